"""The repeated train/evaluate protocol and its report files.

Run `i` initialises its network and shuffles its samples with seed `base_seed + i`; runs share
nothing else, so they may execute in parallel. Report files carry no timestamps and are identical
for identical inputs.
"""

import logging
from pathlib import Path
from typing import Optional

import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel

from .besttrack import filter_tracks, get_basin_filter, read_tracks, split_by_years
from .besttrack.types import CycloneTrackT
from .config import ExperimentSpecT, format_spec
from .elman.network import NetworkDocumentT, init_weights, save_network
from .elman.trainer import train, write_history
from .errors import EvaluationError, ExperimentError, ExtractionError
from .evaluation import (
    accuracy,
    auc,
    confusion,
    format_confusion_table,
    format_mean_std,
    metric_notes,
    roc,
    summarize_runs,
    write_confusion,
    write_roc,
)
from .extraction import (
    class_counts,
    duration_ri_correlation,
    duration_ri_report,
    extract_windows,
    fit_bounds,
    format_class_table,
    normalize_all,
    write_bounds,
)
from .hooks import TrainingHooks
from .plotting import plot_duration_ri, plot_roc
from .records import (
    ConfusionMatrixT,
    CycloneReportT,
    LabeledWindowT,
    NormalizationBoundsT,
    RocCurveT,
    RunSummaryT,
    TrainHistoryT,
)
from .reference_results import published_accuracy

logger = logging.getLogger(__name__)

RUNS_CSV_COLUMNS = ["run_index", "seed", "accuracy", "auc", "epochs", "stop_reason", "tp", "fn", "fp", "tn"]


class PreparedDataT(BaseModel):
    train_tracks: list[CycloneTrackT]
    test_tracks: list[CycloneTrackT]
    train_windows: list[LabeledWindowT]
    test_windows: list[LabeledWindowT]
    bounds: NormalizationBoundsT
    reports: list[CycloneReportT]


class RunResultT(BaseModel):
    run_index: int
    seed: int
    accuracy: float
    confusion: ConfusionMatrixT
    auc: Optional[float] = None
    roc: Optional[RocCurveT] = None
    history: TrainHistoryT
    network: NetworkDocumentT


class ExperimentReportT(BaseModel):
    spec: ExperimentSpecT
    train_counts: tuple[int, int]
    test_counts: tuple[int, int]
    n_train_cyclones: int
    n_test_cyclones: int
    runs: list[RunResultT]
    failures: dict[int, str] = {}
    summary: Optional[RunSummaryT] = None

    @property
    def best_run(self) -> Optional[RunResultT]:
        return self.runs[self.summary.best_index] if self.summary else None


def prepare_data(spec: ExperimentSpecT) -> PreparedDataT:
    """Read, filter, split, window and normalise the tracks named by `spec`."""
    tracks = read_tracks(spec.tracks_path)
    years = (min(spec.train_years[0], spec.test_years[0]), max(spec.train_years[1], spec.test_years[1]))
    kept = filter_tracks(tracks, get_basin_filter(spec.basin, years))
    train_tracks, test_tracks = split_by_years(kept, spec.train_years, spec.test_years)
    logger.info(
        "%s: %d cyclones kept, %d train / %d test", spec.basin.value, len(kept), len(train_tracks), len(test_tracks)
    )

    threshold = spec.strategy_spec.threshold_kt
    window_len = spec.topology.unfold_steps
    train_raw = extract_windows(train_tracks, threshold, window_len)
    test_raw = extract_windows(test_tracks, threshold, window_len)
    if not test_raw:
        raise ExtractionError(f"No test windows for seasons {spec.test_years[0]}-{spec.test_years[1]}")
    bounds = fit_bounds(train_raw)
    return PreparedDataT(
        train_tracks=train_tracks,
        test_tracks=test_tracks,
        train_windows=normalize_all(train_raw, bounds),
        test_windows=normalize_all(test_raw, bounds),
        bounds=bounds,
        reports=duration_ri_report(train_tracks + test_tracks, threshold),
    )


def run_once(
    spec: ExperimentSpecT, data: PreparedDataT, run_index: int, hooks: Optional[TrainingHooks] = None
) -> RunResultT:
    seed = spec.base_seed + run_index
    net = init_weights(spec.topology, seed, spec.network)
    config = spec.train.model_copy(update={"shuffle_seed": seed})
    trained, history = train(net, data.train_windows, config, hooks)

    cm = confusion(trained, data.test_windows, spec.decision_threshold)
    try:
        curve = roc(trained, data.test_windows, spec.roc_thresholds)
    except EvaluationError as e:
        logger.warning("run %d: no ROC curve (%s)", run_index, e)
        curve = None
    result = RunResultT(
        run_index=run_index,
        seed=seed,
        accuracy=accuracy(cm),
        confusion=cm,
        auc=auc(curve) if curve else None,
        roc=curve,
        history=history,
        network=trained.to_document(),
    )
    logger.info("run %d (seed %d): test accuracy %.3f%%", run_index, seed, result.accuracy)
    return result


def _guarded_run(spec, data, run_index, hooks) -> RunResultT | str:
    try:
        return run_once(spec, data, run_index, hooks)
    except Exception as e:
        logger.error("run %d failed: %s", run_index, e)
        return f"{type(e).__name__}: {e}"


class ExperimentRunner:
    """Runs `spec.n_runs` independent train/evaluate cycles and writes the report."""

    def __init__(self, spec: ExperimentSpecT, hooks: Optional[TrainingHooks] = None):
        self.spec = spec
        self.hooks = hooks or TrainingHooks()
        self._data: Optional[PreparedDataT] = None

    @property
    def data(self) -> PreparedDataT:
        if self._data is None:
            self._data = prepare_data(self.spec)
        return self._data

    def run(self, write: bool = True) -> ExperimentReportT:
        """Execute every run, then summarise; raises ExperimentError if any run failed.

        The partial report is written and attached to the error when runs fail.
        """
        data = self.data
        outcomes = Parallel(n_jobs=self.spec.n_jobs)(
            delayed(_guarded_run)(self.spec, data, i, self.hooks) for i in range(self.spec.n_runs)
        )
        runs = [o for o in outcomes if isinstance(o, RunResultT)]
        failures = {i: o for i, o in enumerate(outcomes) if isinstance(o, str)}
        summary = summarize_runs([r.accuracy for r in runs], [r.confusion for r in runs]) if runs else None

        report = ExperimentReportT(
            spec=self.spec,
            train_counts=class_counts(data.train_windows),
            test_counts=class_counts(data.test_windows),
            n_train_cyclones=len(data.train_tracks),
            n_test_cyclones=len(data.test_tracks),
            runs=runs,
            failures=failures,
            summary=summary,
        )
        if write:
            write_outputs(report, data, self.spec.out_dir)
        if failures:
            raise ExperimentError(f"{len(failures)} of {self.spec.n_runs} runs failed", partial=report)
        return report


def format_summary(report: ExperimentReportT, data: Optional[PreparedDataT] = None) -> str:
    spec = report.spec
    strategy = spec.strategy_spec
    lines = [
        f"basin: {spec.basin.value}",
        f"strategy: {strategy.name.value} (threshold {strategy.threshold_kt:g} kt, {spec.topology.hidden} hidden units)",
        f"seasons: train {spec.train_years[0]}-{spec.train_years[1]} ({report.n_train_cyclones} cyclones), "
        f"test {spec.test_years[0]}-{spec.test_years[1]} ({report.n_test_cyclones} cyclones)",
        "",
        format_class_table({"Training Set": report.train_counts, "Testing Set": report.test_counts}, spec.basin.value),
        "",
        f"runs: {len(report.runs)} of {spec.n_runs} (seeds {spec.base_seed}-{spec.base_seed + spec.n_runs - 1})",
    ]
    summary = report.summary
    if summary is not None:
        best = report.best_run
        lines += [
            f"test accuracy (%): {format_mean_std(summary.mean, summary.std)}",
            f"best run: {best.run_index} (seed {best.seed}) accuracy {best.accuracy:.2f}%"
            + (f", AUC {best.auc:.4f}" if best.auc is not None else ""),
        ]
        published = published_accuracy(spec.basin, spec.strategy)
        lines.append(f"published test accuracy (%): {format_mean_std(published.mean, published.std)}")
        lines += ["", format_confusion_table(best.confusion, f"Strategy {strategy.name.value} best-run confusion matrix")]
        lines += ["", "notes:"]
        lines += [f"  - {note}" for note in metric_notes(best.confusion, summary.mean, summary.std)]
    if data is not None:
        lines.append(f"  - {duration_ri_correlation(data.reports).summary()}")
    if report.failures:
        lines += ["", "failed runs:"]
        lines += [f"  - run {i}: {message}" for i, message in sorted(report.failures.items())]
    return "\n".join(lines) + "\n"


def runs_to_frame(runs: list[RunResultT]) -> pd.DataFrame:
    rows = [
        {
            "run_index": r.run_index,
            "seed": r.seed,
            "accuracy": r.accuracy,
            "auc": r.auc,
            "epochs": r.history.epochs,
            "stop_reason": r.history.stop_reason.value if r.history.stop_reason else "",
            **r.confusion.model_dump(),
        }
        for r in runs
    ]
    return pd.DataFrame(rows, columns=RUNS_CSV_COLUMNS)


def write_outputs(report: ExperimentReportT, data: PreparedDataT, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "spec.txt").write_text(format_spec(report.spec))
    runs_to_frame(report.runs).to_csv(out / "runs.csv", index=False, lineterminator="\n")
    write_bounds(out / "bounds.json", data.bounds)
    (out / "summary.txt").write_text(format_summary(report, data))

    best = report.best_run
    if best is not None:
        write_confusion(out / "best_confusion.csv", best.confusion)
        (out / "best_confusion.txt").write_text(format_confusion_table(best.confusion) + "\n")
        write_history(out / "best_history.csv", best.history)
        save_network(out / "best_network.json", best.network.to_network())
        if best.roc is not None:
            write_roc(out / "best_roc.csv", best.roc)

    if report.spec.write_plots:
        if best is not None and best.roc is not None:
            plot_roc(out / "best_roc.png", {f"Strategy {report.spec.strategy.value}": best.roc})
        plot_duration_ri(out / "duration_ri.png", data.reports)
    logger.info("report written to %s", out)
    return out
