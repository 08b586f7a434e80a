"""Classification metrics: confusion matrices, accuracy, ROC/AUC and run aggregation."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from sklearn.metrics import auc as sklearn_auc
from sklearn.metrics import confusion_matrix, roc_curve

from .elman.network import ElmanNetwork, forward, predict_scores
from .errors import EvaluationError
from .records import ConfusionMatrixT, LabeledWindowT, RocCurveT, RocPointT, RunSummaryT

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5
CONFUSION_CSV_COLUMNS = ["tp", "fn", "fp", "tn"]
ROC_CSV_COLUMNS = ["threshold", "fpr", "tpr"]


def classify(net: ElmanNetwork, window, threshold: float = DEFAULT_THRESHOLD) -> bool:
    """Positive iff the network output is at least `threshold` (ties count as positive)."""
    return forward(net, getattr(window, "inputs", window)) >= threshold


def confusion_from_scores(scores, labels, threshold: float = DEFAULT_THRESHOLD) -> ConfusionMatrixT:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if scores.shape != labels.shape:
        raise ValueError(f"{scores.size} scores for {labels.size} labels")
    (tp, fn), (fp, tn) = confusion_matrix(labels, scores >= threshold, labels=[True, False])
    return ConfusionMatrixT(tp=int(tp), fn=int(fn), fp=int(fp), tn=int(tn))


def confusion(
    net: ElmanNetwork, windows: Sequence[LabeledWindowT], threshold: float = DEFAULT_THRESHOLD
) -> ConfusionMatrixT:
    if not windows:
        raise EvaluationError("Cannot build a confusion matrix from an empty window set")
    return confusion_from_scores(predict_scores(net, windows), [w.label for w in windows], threshold)


def accuracy(cm: ConfusionMatrixT) -> float:
    """Percentage of correctly classified windows."""
    if cm.total == 0:
        raise EvaluationError("Accuracy is undefined for an empty confusion matrix")
    return 100.0 * (cm.tp + cm.tn) / cm.total


def all_negative_accuracy(n_positive: int, n_total: int) -> float:
    """Accuracy of a detector that never predicts RI; the class-imbalance baseline."""
    if n_total <= 0:
        raise EvaluationError("Baseline accuracy needs at least one window")
    return accuracy(ConfusionMatrixT(tp=0, fn=n_positive, fp=0, tn=n_total - n_positive))


def roc_from_scores(scores, labels, n_thresholds: Optional[int] = None) -> RocCurveT:
    """ROC over the distinct scores, bracketed by +inf and -inf sentinels.

    With `n_thresholds` set, at most that many distinct scores are used as thresholds,
    evenly spaced through the sorted list.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if not labels.any():
        raise EvaluationError("ROC needs at least one positive window; none were given")
    if labels.all():
        raise EvaluationError("ROC needs at least one negative window; none were given")

    # thresholds[0] is +inf; the rest are the distinct scores, descending
    fpr, tpr, thresholds = roc_curve(labels, scores, pos_label=True, drop_intermediate=False)
    n_distinct = thresholds.size - 1
    if n_thresholds is not None and 0 < n_thresholds < n_distinct:
        keep = 1 + np.unique(np.linspace(0, n_distinct - 1, n_thresholds).round().astype(int))
        keep = np.concatenate([[0], keep])
        fpr, tpr, thresholds = fpr[keep], tpr[keep], thresholds[keep]
    points = [RocPointT(threshold=float(t), fpr=float(f), tpr=float(r)) for t, f, r in zip(thresholds, fpr, tpr)]
    points.append(RocPointT(threshold=-np.inf, fpr=1.0, tpr=1.0))
    return RocCurveT(points=points)


def roc(net: ElmanNetwork, windows: Sequence[LabeledWindowT], n_thresholds: Optional[int] = None) -> RocCurveT:
    return roc_from_scores(predict_scores(net, windows), [w.label for w in windows], n_thresholds)


def auc(curve: RocCurveT) -> float:
    """Trapezoidal area under the (fpr, tpr) curve."""
    return float(sklearn_auc([p.fpr for p in curve.points], [p.tpr for p in curve.points]))


def summarize_runs(
    accuracies: Sequence[float], confusions: Optional[Sequence[ConfusionMatrixT]] = None
) -> RunSummaryT:
    """Mean, sample std (omitted for a single run) and best run.

    The best run has the highest accuracy; ties go to the earliest run, i.e. the lowest seed.
    """
    if not accuracies:
        raise EvaluationError("No runs to summarize")
    values = np.asarray(accuracies, dtype=np.float64)
    best = int(np.argmax(values))
    return RunSummaryT(
        accuracies=values.tolist(),
        mean=float(values.mean()),
        std=float(values.std(ddof=1)) if values.size > 1 else None,
        best_index=best,
        best_confusion=confusions[best] if confusions else None,
    )


def aggregate_runs(
    accuracies: Sequence[float], confusions: Optional[Sequence[ConfusionMatrixT]] = None
) -> RunSummaryT:
    if len(accuracies) < 2:
        raise EvaluationError(f"Standard deviation needs at least 2 runs, got {len(accuracies)}")
    return summarize_runs(accuracies, confusions)


def format_mean_std(mean: float, std: Optional[float]) -> str:
    if std is None:
        return f"{mean:.3f}"
    return f"{mean:.3f} ± {std:.3f}"


def format_confusion_table(cm: ConfusionMatrixT, title: str = "Confusion Matrix") -> str:
    """Actual classes as rows, predicted classes as columns, with margins."""
    rows = [
        title,
        f"{'':<18}{'Predicted':^24}",
        f"{'':<18}{'Positive':>12}{'Negative':>12}{'Total':>10}",
        f"{'Actual Positive':<18}{cm.tp:>12}{cm.fn:>12}{cm.actual_positive:>10}",
        f"{'Actual Negative':<18}{cm.fp:>12}{cm.tn:>12}{cm.actual_negative:>10}",
        f"{'Total':<18}{cm.predicted_positive:>12}{cm.predicted_negative:>12}{cm.total:>10}",
    ]
    return "\n".join(rows)


def metric_notes(cm: ConfusionMatrixT, mean: Optional[float] = None, std: Optional[float] = None) -> list[str]:
    """Caveats printed next to accuracy figures."""
    notes = [
        f"all-negative baseline: {all_negative_accuracy(cm.actual_positive, cm.total):.2f}% "
        f"({cm.actual_positive} positive of {cm.total})",
        "test percentage is plain accuracy; balanced accuracy or another metric would give different figures",
    ]
    if mean is not None and std:
        best = accuracy(cm)
        sigmas = (best - mean) / std
        if sigmas > 10:
            notes.append(
                f"best-run accuracy {best:.2f}% lies {sigmas:.0f} standard deviations above the mean "
                f"{mean:.3f}; check that both figures measure the same thing"
            )
    if cm.tp == 0:
        notes.append("no RI case was detected (tp = 0)")
    return notes


def strategy_comparison(cm_i: ConfusionMatrixT, cm_ii: ConfusionMatrixT) -> str:
    verdict = "detects more" if cm_ii.tp > cm_i.tp else "does not detect more"
    return (
        f"Strategy II {verdict} RI cases than Strategy I "
        f"(tp {cm_ii.tp} vs {cm_i.tp}; fpr {cm_ii.fpr:.3f} vs {cm_i.fpr:.3f})"
    )


def write_confusion(path: str | Path, cm: ConfusionMatrixT) -> None:
    pd.DataFrame([cm.model_dump()], columns=CONFUSION_CSV_COLUMNS).to_csv(path, index=False, lineterminator="\n")


def read_confusion(path: str | Path) -> ConfusionMatrixT:
    frame = pd.read_csv(path)
    return ConfusionMatrixT.model_validate(frame.to_dict("records")[0])


def write_roc(path: str | Path, curve: RocCurveT) -> None:
    frame = pd.DataFrame([p.model_dump() for p in curve.points], columns=ROC_CSV_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")


def read_roc(path: str | Path) -> RocCurveT:
    frame = pd.read_csv(path, float_precision="round_trip")
    return RocCurveT(points=[RocPointT.model_validate(row) for row in frame.to_dict("records")])
