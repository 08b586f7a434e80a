"""Command-line front end: ingest, extract, train, eval, report and experiment."""

import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Optional, Sequence

from .besttrack import (
    Basin,
    OnError,
    TrackFormat,
    filter_tracks,
    get_basin_filter,
    read_tracks,
    write_tracks,
)
from .config import build_experiment_spec, build_train_config, load_spec_file, parse_year_range
from .datastore import TrackStore
from .elman.network import TopologyT, init_weights, load_network, save_network
from .elman.trainer import train, write_history
from .errors import EvaluationError, ExperimentError, ExtractionError, TrackParseError, TrainingError
from .evaluation import (
    accuracy,
    all_negative_accuracy,
    auc,
    confusion,
    format_confusion_table,
    metric_notes,
    roc,
    write_confusion,
    write_roc,
)
from .experiment import ExperimentRunner, format_summary, prepare_data
from .extraction import (
    class_counts,
    duration_ri_correlation,
    format_class_table,
    get_strategy,
    read_report,
    read_windows,
    write_bounds,
    write_report,
    write_windows,
)
from .hooks import TrainingHooks, progress_logger
from .plotting import plot_duration_ri
from .reference_results import ACCURACIES, BEST_CONFUSIONS, CLASS_COUNTS, DISCREPANCIES

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class ExitCode(IntEnum):
    OK = 0
    USAGE = 2
    PARSE = 3
    EXTRACTION = 4
    TRAINING = 5
    EVALUATION = 6
    EXPERIMENT = 7


def _config_values(args: argparse.Namespace) -> dict[str, str]:
    return load_spec_file(args.config) if args.config else {}


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ingest(args: argparse.Namespace) -> ExitCode:
    tracks = read_tracks(args.input, TrackFormat(args.format), OnError(args.on_error))
    if args.basin:
        years = parse_year_range(args.years)
        tracks = filter_tracks(tracks, get_basin_filter(Basin.from_flag(args.basin), years))
    path = _out_dir(args) / "tracks.csv"
    write_tracks(path, tracks)

    print(f"{len(tracks)} cyclones written to {path}")
    with TrackStore(tracks) as store:
        for row in store.season_counts().itertuples(index=False):
            print(f"  season {row.season}: {row.cyclones}")
    return ExitCode.OK


def cmd_extract(args: argparse.Namespace) -> ExitCode:
    overrides = {
        "basin": args.basin,
        "strategy": args.strategy,
        "tracks_path": args.tracks,
        "train_years": args.train_years,
        "test_years": args.test_years,
    }
    spec = build_experiment_spec(_config_values(args), overrides)
    data = prepare_data(spec)
    out = _out_dir(args)
    write_windows(out / "train_windows.csv", data.train_windows, spec.topology.unfold_steps)
    write_windows(out / "test_windows.csv", data.test_windows, spec.topology.unfold_steps)
    write_bounds(out / "bounds.json", data.bounds)
    write_report(out / "report.csv", data.reports)

    rows = {"Training Set": class_counts(data.train_windows), "Testing Set": class_counts(data.test_windows)}
    print(f"Strategy {spec.strategy.value} (threshold {spec.strategy_spec.threshold_kt:g} kt)")
    print(format_class_table(rows, spec.basin.value))
    print(duration_ri_correlation(data.reports).summary())
    return ExitCode.OK


def cmd_train(args: argparse.Namespace) -> ExitCode:
    overrides = {"learning_rate": args.learning_rate, "max_epochs": args.epochs, "shuffle_seed": args.seed}
    config, options = build_train_config(_config_values(args), overrides)
    windows = read_windows(args.windows)
    if not windows:
        raise TrainingError(f"{args.windows}: no windows to train on")
    hidden = args.hidden or get_strategy(args.strategy or "1").hidden_units
    topology = TopologyT(hidden=hidden, unfold_steps=len(windows[0].inputs))
    seed = args.seed or 0

    hooks = TrainingHooks()
    if config.log_every:
        hooks.add_post_epoch_hook(progress_logger(config.log_every))
    net, history = train(init_weights(topology, seed, options), windows, config, hooks)

    out = _out_dir(args)
    save_network(out / "network.json", net)
    write_history(out / "history.csv", history)
    print(
        f"trained 1-{hidden}-1 network for {history.epochs} epochs ({history.stop_reason.value}); "
        f"final sse {history.sse[-1]:.6f}, train accuracy {history.train_accuracy[-1]:.3f}%"
    )
    return ExitCode.OK


def cmd_eval(args: argparse.Namespace) -> ExitCode:
    net = load_network(args.network)
    windows = read_windows(args.windows)
    cm = confusion(net, windows, args.threshold)
    out = _out_dir(args)
    write_confusion(out / "confusion.csv", cm)
    (out / "confusion.txt").write_text(format_confusion_table(cm) + "\n")

    print(format_confusion_table(cm))
    print(f"test accuracy: {accuracy(cm):.3f}%")
    print(f"all-negative baseline: {all_negative_accuracy(cm.actual_positive, cm.total):.3f}%")
    try:
        curve = roc(net, windows, args.roc_thresholds)
    except EvaluationError as e:
        logger.warning("skipping ROC: %s", e)
    else:
        write_roc(out / "roc.csv", curve)
        print(f"AUC: {auc(curve):.4f}")
    for note in metric_notes(cm)[1:]:
        print(f"note: {note}")
    return ExitCode.OK


def cmd_report(args: argparse.Namespace) -> ExitCode:
    if args.published:
        _print_published()
    if args.report:
        reports = read_report(args.report)
        print(f"{len(reports)} cyclones, {sum(r.ri_count == 0 for r in reports)} without RI")
        print(duration_ri_correlation(reports).summary())
        if args.plot:
            path = plot_duration_ri(_out_dir(args) / "duration_ri.png", reports)
            print(f"chart written to {path}")
    elif not args.published:
        raise ValueError("report needs a report CSV or --published")
    return ExitCode.OK


def _print_published() -> None:
    for basin, (train_counts, test_counts) in CLASS_COUNTS.items():
        rows = {
            "Training Set": (train_counts.positive, train_counts.negative),
            "Testing Set": (test_counts.positive, test_counts.negative),
        }
        print(format_class_table(rows, basin.value))
        print()
    for (basin, strategy), published in ACCURACIES.items():
        print(f"{basin.value} strategy {strategy.value}: {published.mean:.3f} ± {published.std:.3f}")
    for (basin, strategy), cm in BEST_CONFUSIONS.items():
        print()
        print(format_confusion_table(cm, f"Strategy {strategy.value} confusion matrix, {basin.value}"))
        print(f"accuracy {accuracy(cm):.2f}%")
    print()
    for discrepancy in DISCREPANCIES:
        print(f"note: {discrepancy}")


def cmd_experiment(args: argparse.Namespace) -> ExitCode:
    overrides = {
        "basin": args.basin,
        "strategy": args.strategy,
        "base_seed": args.seed,
        "out_dir": args.out,
        "n_runs": args.runs,
        "n_jobs": args.jobs,
        "write_plots": True if args.plots else None,
    }
    spec = build_experiment_spec(_config_values(args), overrides)
    hooks = TrainingHooks()
    if spec.train.log_every:
        hooks.add_post_epoch_hook(progress_logger(spec.train.log_every))
    runner = ExperimentRunner(spec, hooks)
    try:
        report = runner.run()
    except ExperimentError as e:
        if e.partial is not None:
            print(format_summary(e.partial, runner.data), end="")
        raise
    print(format_summary(report, runner.data), end="")
    print(f"report written to {spec.out_dir}")
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--basin", choices=["sp", "si"], help="South Pacific or South Indian basin")
    shared.add_argument("--strategy", choices=["1", "2"], help="RI threshold strategy: 1 (30 kt) or 2 (10 kt)")
    shared.add_argument("--seed", type=int, help="Random seed (base seed for experiments)")
    shared.add_argument("--out", help="Output directory (default: current directory)")
    shared.add_argument("--config", help="Spec file of key = value lines")

    parser = argparse.ArgumentParser(prog="cyclone-ri", description="Rapid-intensification detection with Elman networks")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", parents=[shared], help="Parse best-track data into the track CSV")
    ingest.add_argument("input", help="b-deck or track CSV file")
    ingest.add_argument("--format", choices=[f.value for f in TrackFormat], default=TrackFormat.BDECK.value)
    ingest.add_argument("--on-error", choices=[o.value for o in OnError], default=OnError.SKIP.value)
    ingest.add_argument("--years", default="1980-2013", help="Season range kept with --basin (default: 1980-2013)")
    ingest.set_defaults(handler=cmd_ingest)

    extract = commands.add_parser("extract", parents=[shared], help="Label and window tracks, fit normalisation bounds")
    extract.add_argument("tracks", nargs="?", help="Track CSV written by ingest")
    extract.add_argument("--train-years", help="e.g. 1985-2005 (default: published split)")
    extract.add_argument("--test-years", help="e.g. 2006-2013 (default: published split)")
    extract.set_defaults(handler=cmd_extract)

    train_cmd = commands.add_parser("train", parents=[shared], help="Train a network on a window CSV")
    train_cmd.add_argument("windows", help="Training window CSV")
    train_cmd.add_argument("--hidden", type=int, help="Hidden units (default: from --strategy)")
    train_cmd.add_argument("--epochs", type=int, help="Maximum epochs")
    train_cmd.add_argument("--learning-rate", type=float)
    train_cmd.set_defaults(handler=cmd_train)

    eval_cmd = commands.add_parser("eval", parents=[shared], help="Confusion matrix, accuracy and ROC on a window CSV")
    eval_cmd.add_argument("network", help="Network JSON written by train")
    eval_cmd.add_argument("windows", help="Test window CSV")
    eval_cmd.add_argument("--threshold", type=float, default=0.5)
    eval_cmd.add_argument("--roc-thresholds", type=int, help="Cap on ROC thresholds")
    eval_cmd.set_defaults(handler=cmd_eval)

    report = commands.add_parser("report", parents=[shared], help="Duration/RI analysis and published figures")
    report.add_argument("report", nargs="?", help="Report CSV written by extract")
    report.add_argument("--plot", action="store_true", help="Write duration_ri.png")
    report.add_argument("--published", action="store_true", help="Print the published tables")
    report.set_defaults(handler=cmd_report)

    experiment = commands.add_parser("experiment", parents=[shared], help="Repeated train/evaluate runs from a spec")
    experiment.add_argument("--runs", type=int, help="Number of runs (default: 30)")
    experiment.add_argument("--jobs", type=int, help="Parallel runs")
    experiment.add_argument("--plots", action="store_true", help="Write PNG figures")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("cyclone_ri").setLevel(level)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return int(args.handler(args))
    except ExperimentError as e:
        logger.error("%s", e)
        return ExitCode.EXPERIMENT
    except TrackParseError as e:
        logger.error("parse failed: %s", e)
        return ExitCode.PARSE
    except ExtractionError as e:
        logger.error("extraction failed: %s", e)
        return ExitCode.EXTRACTION
    except TrainingError as e:
        logger.error("training failed: %s", e)
        return ExitCode.TRAINING
    except EvaluationError as e:
        logger.error("evaluation failed: %s", e)
        return ExitCode.EVALUATION
    except (ValueError, OSError) as e:
        logger.error("%s", e)
        return ExitCode.USAGE


if __name__ == "__main__":
    sys.exit(main())
