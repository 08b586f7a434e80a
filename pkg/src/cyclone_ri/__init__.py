"""Rapid-intensification detection for tropical cyclones with Elman recurrent networks"""

from .besttrack import Basin, CycloneTrackT, filter_tracks, parse_atcf_bdeck, parse_track_csv, split_by_years
from .elman import ElmanNetwork, TopologyT, TrainConfigT, bptt_gradients, forward, init_weights, train
from .evaluation import accuracy, aggregate_runs, auc, classify, confusion, roc
from .extraction import StrategyName, extract_windows, get_strategy, label_ri_points, make_windows
from .builders.builder import ExperimentBuilder
from .experiment import ExperimentRunner

__all__ = [
    "Basin", "CycloneTrackT", "filter_tracks", "parse_atcf_bdeck", "parse_track_csv", "split_by_years",
    "ElmanNetwork", "TopologyT", "TrainConfigT", "bptt_gradients", "forward", "init_weights", "train",
    "accuracy", "aggregate_runs", "auc", "classify", "confusion", "roc",
    "StrategyName", "extract_windows", "get_strategy", "label_ri_points", "make_windows",
    "ExperimentBuilder", "ExperimentRunner",
]
