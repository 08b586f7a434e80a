"""PNG figures: ROC curves and per-cyclone duration against RI count."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from matplotlib.figure import Figure

from .evaluation import auc
from .records import CycloneReportT, RocCurveT

logger = logging.getLogger(__name__)

DPI = 120


def _save(fig: Figure, path: str | Path) -> Path:
    path = Path(path)
    # no creation timestamp so repeated runs write identical files
    fig.savefig(path, dpi=DPI, metadata={"Software": None})
    logger.debug("wrote %s", path)
    return path


def plot_roc(path: str | Path, curves: dict[str, RocCurveT], title: str = "ROC") -> Path:
    """Draw one or more ROC curves, labelled with their AUC, on a single axis."""
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    for label, curve in curves.items():
        fpr = [p.fpr for p in curve.points]
        tpr = [p.tpr for p in curve.points]
        ax.plot(fpr, tpr, label=f"{label} (AUC {auc(curve):.3f})")
    ax.plot([0, 1], [0, 1], linestyle="--", color="grey", linewidth=0.8)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("False positive rate")
    ax.set_ylabel("True positive rate")
    ax.set_title(title)
    ax.legend(loc="lower right")
    return _save(fig, path)


def plot_duration_ri(
    path: str | Path, reports: Sequence[CycloneReportT], title: Optional[str] = None
) -> Path:
    """Bars of duration (6-hour steps) and RI count for each cyclone, indexed 1..n."""
    fig = Figure(figsize=(10, 4))
    ax = fig.add_subplot()
    index = np.arange(1, len(reports) + 1)
    ax.bar(index - 0.2, [r.duration_steps for r in reports], width=0.4, label="Duration (6 h steps)")
    ax.bar(index + 0.2, [r.ri_count for r in reports], width=0.4, label="RI cases")
    ax.set_xlabel("Cyclone")
    ax.set_ylabel("Count")
    if title:
        ax.set_title(title)
    ax.legend()
    return _save(fig, path)
