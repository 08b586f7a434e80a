"""Stochastic, per-sample BPTT training loop."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, NonNegativeFloat, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from ..errors import TrainingError
from ..hooks import TrainingHooks
from ..records import LabeledWindowT, StopReason, TrainHistoryT
from .bptt import backward, descend
from .network import ElmanNetwork, forward_trace

logger = logging.getLogger(__name__)

HISTORY_CSV_COLUMNS = ["epoch", "sse", "train_accuracy"]


class TrainConfigT(BaseModel):
    learning_rate: PositiveFloat = 0.1
    max_epochs: PositiveInt = 2000
    shuffle_seed: int = 0
    target_pos: float = 1.0
    target_neg: float = 0.0
    stop_tolerance: NonNegativeFloat = 1e-6
    patience: PositiveInt = 10
    positive_weight: PositiveFloat = 1.0
    decision_threshold: float = 0.5
    log_every: NonNegativeInt = 100

    @model_validator(mode="after")
    def _targets_ordered(self) -> "TrainConfigT":
        if not self.target_pos > self.target_neg:
            raise ValueError(f"target_pos ({self.target_pos}) must exceed target_neg ({self.target_neg})")
        return self


def train(
    net: ElmanNetwork,
    windows: Sequence[LabeledWindowT],
    config: Optional[TrainConfigT] = None,
    hooks: Optional[TrainingHooks] = None,
) -> tuple[ElmanNetwork, TrainHistoryT]:
    """Train a copy of `net` on `windows`; returns (trained network, history).

    Each epoch visits the samples in a permutation drawn from a generator seeded with
    `shuffle_seed`, and updates the weights after every sample. Epoch SSE and accuracy are
    accumulated from the outputs seen during the epoch, before each update. Training stops at
    `max_epochs`, or once the epoch SSE has improved by less than `stop_tolerance` for
    `patience` consecutive epochs.
    """
    config = config or TrainConfigT()
    hooks = hooks or TrainingHooks()
    if not windows:
        raise TrainingError("Cannot train on an empty set of windows")

    net = net.copy()
    inputs = np.array([w.inputs for w in windows], dtype=np.float64)
    labels = np.array([w.label for w in windows], dtype=bool)
    rng = np.random.default_rng(config.shuffle_seed)
    history = TrainHistoryT()
    loss_kwargs = dict(
        target_pos=config.target_pos, target_neg=config.target_neg, positive_weight=config.positive_weight
    )

    hooks.run_pre_train(net, config)
    stalled = 0
    for epoch in range(1, config.max_epochs + 1):
        sse = 0.0
        correct = 0
        for i in rng.permutation(len(windows)):
            label = bool(labels[i])
            trace = forward_trace(net, inputs[i])
            output = float(trace.output[0])
            grad = backward(net, trace, label, **loss_kwargs)
            target = config.target_pos if label else config.target_neg
            sse += (output - target) ** 2
            correct += (output >= config.decision_threshold) == label
            descend(net, grad, config.learning_rate)
        if not all(np.all(np.isfinite(a)) for a in net.parameters().values()):
            raise TrainingError(f"Weights became non-finite in epoch {epoch}")

        accuracy = 100.0 * correct / len(windows)
        if history.sse and history.sse[-1] - sse < config.stop_tolerance:
            stalled += 1
        else:
            stalled = 0
        history.sse.append(float(sse))
        history.train_accuracy.append(float(accuracy))
        hooks.run_post_epoch(epoch, float(sse), float(accuracy))
        if stalled >= config.patience:
            history.stop_reason = StopReason.CONVERGED
            break
    else:
        history.stop_reason = StopReason.MAX_EPOCHS

    logger.debug("training stopped after %d epochs (%s)", history.epochs, history.stop_reason.value)
    hooks.run_post_train(net, history)
    return net, history


def history_to_frame(history: TrainHistoryT) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "epoch": np.arange(1, history.epochs + 1),
            "sse": history.sse,
            "train_accuracy": history.train_accuracy,
        },
        columns=HISTORY_CSV_COLUMNS,
    )


def write_history(path: str | Path, history: TrainHistoryT) -> None:
    history_to_frame(history).to_csv(path, index=False, lineterminator="\n")


def read_history(path: str | Path) -> TrainHistoryT:
    frame = pd.read_csv(path, float_precision="round_trip")
    return TrainHistoryT(sse=frame["sse"].tolist(), train_accuracy=frame["train_accuracy"].tolist())
