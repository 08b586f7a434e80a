"""Rapid-intensification labelling and window extraction.

A point t is positive when the wind 24 hours later (4 steps of 6 h) exceeds the wind at t
by at least the strategy threshold. Each labelled point with 4 earlier points yields one
window of 5 raw intensities ending at t.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, PositiveFloat, PositiveInt
from scipy import stats

from .besttrack.filters import split_segments
from .besttrack.types import CycloneTrackT
from .errors import ExtractionError
from .records import (
    WINDOW_LEN,
    CycloneReportT,
    IntensityWindowT,
    LabeledWindowT,
    NormalizationBoundsT,
)

logger = logging.getLogger(__name__)

LOOKAHEAD_STEPS = 4
BOUNDS_MARGIN = 0.05
REPORT_CSV_COLUMNS = ["cyclone_id", "duration_steps", "ri_count"]


class StrategyName(str, Enum):
    I = "I"
    II = "II"


class StrategyT(BaseModel):
    name: StrategyName
    threshold_kt: PositiveFloat
    hidden_units: PositiveInt


STRATEGIES = {
    StrategyName.I: StrategyT(name=StrategyName.I, threshold_kt=30.0, hidden_units=5),
    StrategyName.II: StrategyT(name=StrategyName.II, threshold_kt=10.0, hidden_units=10),
}


def get_strategy(name: str | int | StrategyName) -> StrategyT:
    """Look up a strategy by enum, roman numeral or CLI number (1 or 2)."""
    if isinstance(name, StrategyName):
        return STRATEGIES[name]
    key = str(name).strip().upper()
    key = {"1": "I", "2": "II"}.get(key, key)
    try:
        return STRATEGIES[StrategyName(key)]
    except ValueError:
        raise ValueError(f"Unknown strategy: {name}") from None


def label_ri_points(track: CycloneTrackT, threshold_kt: float) -> list[bool]:
    """Per-point RI labels for every point that has a full 24-hour lookahead.

    The returned list has `max(0, n - 4)` entries; the last 4 points get no label.
    """
    if track.has_gaps:
        raise ExtractionError(f"{track.cyclone_id}: labels need a contiguous 6-hourly track")
    if track.duration_steps <= LOOKAHEAD_STEPS:
        return []
    vmax = track.intensities
    rise = vmax[LOOKAHEAD_STEPS:] - vmax[:-LOOKAHEAD_STEPS]
    return [bool(r >= threshold_kt) for r in rise]


def make_windows(
    track: CycloneTrackT, labels: Sequence[bool], window_len: int = WINDOW_LEN
) -> list[IntensityWindowT]:
    """Windows of raw intensities `[t - window_len + 1, t]` for each labelled t."""
    if window_len < 1:
        raise ValueError(f"window_len must be positive, got {window_len}")
    expected = max(0, track.duration_steps - LOOKAHEAD_STEPS)
    if len(labels) != expected:
        raise ValueError(f"{track.cyclone_id}: expected {expected} labels, got {len(labels)}")
    vmax = track.intensities
    return [
        IntensityWindowT(
            inputs=tuple(float(v) for v in vmax[t - window_len + 1 : t + 1]),
            label=labels[t],
            cyclone_id=track.cyclone_id,
            anchor_index=t,
        )
        for t in range(window_len - 1, len(labels))
    ]


def extract_windows(
    tracks: Iterable[CycloneTrackT], threshold_kt: float, window_len: int = WINDOW_LEN
) -> list[IntensityWindowT]:
    """Split every track into contiguous segments and window each one."""
    windows: list[IntensityWindowT] = []
    for track in tracks:
        for segment in split_segments(track):
            windows.extend(make_windows(segment, label_ri_points(segment, threshold_kt), window_len))
    return windows


def fit_bounds(windows: Iterable[IntensityWindowT], margin: float = BOUNDS_MARGIN) -> NormalizationBoundsT:
    """Min/max of the training intensities, widened by `margin` of the range on each side."""
    values = np.array([x for w in windows for x in w.inputs], dtype=np.float64)
    if values.size == 0:
        raise ExtractionError("Cannot fit normalization bounds on an empty training set")
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        raise ExtractionError(f"Degenerate training intensities: all values equal {lo}")
    pad = margin * (hi - lo)
    return NormalizationBoundsT(min_kt=lo - pad, max_kt=hi + pad)


def normalize(window: IntensityWindowT, bounds: NormalizationBoundsT) -> LabeledWindowT:
    span = bounds.max_kt - bounds.min_kt
    scaled = np.clip((np.asarray(window.inputs) - bounds.min_kt) / span, 0.0, 1.0)
    return LabeledWindowT(
        inputs=tuple(float(x) for x in scaled),
        label=window.label,
        cyclone_id=window.cyclone_id,
        anchor_index=window.anchor_index,
    )


def normalize_all(windows: Iterable[IntensityWindowT], bounds: NormalizationBoundsT) -> list[LabeledWindowT]:
    return [normalize(w, bounds) for w in windows]


def class_counts(windows: Iterable[IntensityWindowT | LabeledWindowT]) -> tuple[int, int]:
    """(positives, negatives)."""
    labels = [w.label for w in windows]
    positives = sum(labels)
    return positives, len(labels) - positives


def format_class_table(rows: dict[str, tuple[int, int]], region: str = "") -> str:
    """Positive/negative/total table, one row per dataset (e.g. training and test set)."""
    header = f"{'Region':<16}{'Dataset':<14}{'No. Positive':>14}{'No. Negative':>14}{'Total':>8}{'% Negative':>12}"
    lines = [header, "-" * len(header)]
    for i, (dataset, (positives, negatives)) in enumerate(rows.items()):
        total = positives + negatives
        share = 100.0 * negatives / total if total else 0.0
        lines.append(
            f"{region if i == 0 else '':<16}{dataset:<14}{positives:>14}{negatives:>14}{total:>8}{share:>11.2f}%"
        )
    return "\n".join(lines)


def duration_ri_report(tracks: Iterable[CycloneTrackT], threshold_kt: float) -> list[CycloneReportT]:
    """Duration (6-hourly points) and number of positive points for each cyclone.

    Gapped tracks are labelled per segment and the counts summed back onto the cyclone.
    """
    reports = []
    for track in tracks:
        ri_count = sum(
            sum(label_ri_points(segment, threshold_kt)) for segment in split_segments(track)
        )
        reports.append(
            CycloneReportT(cyclone_id=track.cyclone_id, duration_steps=track.duration_steps, ri_count=ri_count)
        )
    return reports


class DurationCorrelationT(BaseModel):
    n_cyclones: int
    pearson_r: Optional[float] = None
    spearman_rho: Optional[float] = None
    spearman_p: Optional[float] = None

    def summary(self, strong: float = 0.7) -> str:
        if self.spearman_rho is None:
            return f"duration vs RI count: undefined over {self.n_cyclones} cyclones"
        verdict = "relates" if abs(self.spearman_rho) >= strong else "does not directly relate"
        return (
            f"duration vs RI count over {self.n_cyclones} cyclones: "
            f"pearson r={self.pearson_r:.3f}, spearman rho={self.spearman_rho:.3f} "
            f"(p={self.spearman_p:.3g}); RI count {verdict} to duration"
        )


def duration_ri_correlation(reports: Sequence[CycloneReportT]) -> DurationCorrelationT:
    durations = np.array([r.duration_steps for r in reports], dtype=np.float64)
    counts = np.array([r.ri_count for r in reports], dtype=np.float64)
    if len(reports) < 3 or np.ptp(durations) == 0 or np.ptp(counts) == 0:
        return DurationCorrelationT(n_cyclones=len(reports))
    pearson = stats.pearsonr(durations, counts)
    spearman = stats.spearmanr(durations, counts)
    return DurationCorrelationT(
        n_cyclones=len(reports),
        pearson_r=float(pearson.statistic),
        spearman_rho=float(spearman.statistic),
        spearman_p=float(spearman.pvalue),
    )


def window_columns(window_len: int = WINDOW_LEN) -> list[str]:
    return ["cyclone_id", "anchor_index", *[f"x{i}" for i in range(1, window_len + 1)], "label"]


def windows_to_frame(windows: Sequence[LabeledWindowT], window_len: int = WINDOW_LEN) -> pd.DataFrame:
    columns = window_columns(window_len)
    rows = [[w.cyclone_id, w.anchor_index, *w.inputs, int(w.label)] for w in windows]
    return pd.DataFrame(rows, columns=columns)


def write_windows(path: str | Path, windows: Sequence[LabeledWindowT], window_len: int = WINDOW_LEN) -> None:
    windows_to_frame(windows, window_len).to_csv(path, index=False, lineterminator="\n")


def read_windows(path: str | Path) -> list[LabeledWindowT]:
    frame = pd.read_csv(path, dtype={"cyclone_id": str}, float_precision="round_trip")
    inputs = sorted((c for c in frame.columns if c.startswith("x")), key=lambda c: int(c[1:]))
    if not inputs or "label" not in frame.columns:
        raise ExtractionError(f"{path}: not a window CSV (columns {list(frame.columns)})")
    return [
        LabeledWindowT(
            inputs=tuple(float(row[c]) for c in inputs),
            label=bool(int(row["label"])),
            cyclone_id=str(row["cyclone_id"]),
            anchor_index=int(row["anchor_index"]),
        )
        for _, row in frame.iterrows()
    ]


def write_report(path: str | Path, reports: Sequence[CycloneReportT]) -> None:
    frame = pd.DataFrame([r.model_dump() for r in reports], columns=REPORT_CSV_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")


def read_report(path: str | Path) -> list[CycloneReportT]:
    frame = pd.read_csv(path, dtype={"cyclone_id": str})
    return [CycloneReportT.model_validate(row) for row in frame.to_dict("records")]


def write_bounds(path: str | Path, bounds: NormalizationBoundsT) -> None:
    Path(path).write_text(bounds.model_dump_json(indent=2))


def read_bounds(path: str | Path) -> NormalizationBoundsT:
    return NormalizationBoundsT.model_validate_json(Path(path).read_text())
