"""Elman recurrent network and its backpropagation-through-time trainer."""

from .network import (
    ElmanNetwork,
    NetworkOptionsT,
    TopologyT,
    forward,
    init_weights,
    load_network,
    predict_scores,
    save_network,
    sigmoid,
    step,
)
from .bptt import Gradient, bptt_gradients, central_difference, finite_difference_gradient, sample_loss, sgd_update
from .trainer import TrainConfigT, train

__all__ = [
    "ElmanNetwork", "NetworkOptionsT", "TopologyT", "forward", "init_weights", "load_network",
    "predict_scores", "save_network", "sigmoid", "step", "Gradient", "bptt_gradients", "central_difference",
    "finite_difference_gradient", "sample_loss", "sgd_update", "TrainConfigT", "train",
]
