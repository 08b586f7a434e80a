from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, field_validator, model_validator

WINDOW_LEN = 5


class IntensityWindowT(BaseModel):
    """Raw intensities (knots) of consecutive 6-hourly points ending at `anchor_index`."""

    model_config = ConfigDict(frozen=True)

    inputs: tuple[float, ...] = Field(min_length=1)
    label: bool
    cyclone_id: str
    anchor_index: NonNegativeInt


class LabeledWindowT(BaseModel):
    """Normalized window fed to the network, oldest value first."""

    model_config = ConfigDict(frozen=True)

    inputs: tuple[float, ...] = Field(min_length=1)
    label: bool
    cyclone_id: str
    anchor_index: NonNegativeInt

    @field_validator("inputs")
    @classmethod
    def _unit_interval(cls, inputs: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0.0 <= x <= 1.0 for x in inputs):
            raise ValueError(f"normalized inputs must lie in [0, 1], got {inputs}")
        return inputs


class NormalizationBoundsT(BaseModel):
    model_config = ConfigDict(frozen=True)

    min_kt: float
    max_kt: float

    @model_validator(mode="after")
    def _ordered(self) -> "NormalizationBoundsT":
        if not self.max_kt > self.min_kt:
            raise ValueError(f"max_kt ({self.max_kt}) must exceed min_kt ({self.min_kt})")
        return self


class CycloneReportT(BaseModel):
    cyclone_id: str
    duration_steps: NonNegativeInt
    ri_count: NonNegativeInt

    @model_validator(mode="after")
    def _bounded(self) -> "CycloneReportT":
        if self.ri_count > self.duration_steps:
            raise ValueError(f"{self.cyclone_id}: ri_count {self.ri_count} exceeds duration {self.duration_steps}")
        return self


class StopReason(str, Enum):
    MAX_EPOCHS = "max_epochs"
    CONVERGED = "converged"


class TrainHistoryT(BaseModel):
    sse: list[float] = []
    train_accuracy: list[float] = []
    stop_reason: Optional[StopReason] = None

    @property
    def epochs(self) -> int:
        return len(self.sse)


class ConfusionMatrixT(BaseModel):
    """Counts by (actual, predicted); rows are the actual classes."""

    model_config = ConfigDict(frozen=True)

    tp: NonNegativeInt
    fn: NonNegativeInt
    fp: NonNegativeInt
    tn: NonNegativeInt

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def actual_positive(self) -> int:
        return self.tp + self.fn

    @property
    def actual_negative(self) -> int:
        return self.fp + self.tn

    @property
    def predicted_positive(self) -> int:
        return self.tp + self.fp

    @property
    def predicted_negative(self) -> int:
        return self.fn + self.tn

    @property
    def tpr(self) -> float:
        return self.tp / self.actual_positive if self.actual_positive else 0.0

    @property
    def fpr(self) -> float:
        return self.fp / self.actual_negative if self.actual_negative else 0.0


class RocPointT(BaseModel):
    model_config = ConfigDict(frozen=True)

    threshold: float
    fpr: float = Field(ge=0.0, le=1.0)
    tpr: float = Field(ge=0.0, le=1.0)


class RocCurveT(BaseModel):
    points: list[RocPointT] = Field(min_length=2)

    @model_validator(mode="after")
    def _monotone(self) -> "RocCurveT":
        for previous, current in zip(self.points, self.points[1:]):
            if not current.threshold < previous.threshold:
                raise ValueError("ROC thresholds must be strictly decreasing")
            if current.fpr < previous.fpr or current.tpr < previous.tpr:
                raise ValueError("ROC fpr/tpr must be nondecreasing along the curve")
        first, last = self.points[0], self.points[-1]
        if (first.fpr, first.tpr) != (0.0, 0.0) or (last.fpr, last.tpr) != (1.0, 1.0):
            raise ValueError("ROC curve must start at (0, 0) and end at (1, 1)")
        return self


class RunSummaryT(BaseModel):
    accuracies: list[float] = Field(min_length=1)
    mean: float
    std: Optional[float] = None
    best_index: NonNegativeInt
    best_confusion: Optional[ConfusionMatrixT] = None

    @model_validator(mode="after")
    def _mean_in_range(self) -> "RunSummaryT":
        lo, hi = min(self.accuracies), max(self.accuracies)
        if not lo - 1e-9 <= self.mean <= hi + 1e-9:
            raise ValueError(f"mean {self.mean} outside run range [{lo}, {hi}]")
        if self.best_index >= len(self.accuracies):
            raise ValueError(f"best_index {self.best_index} out of range")
        return self
