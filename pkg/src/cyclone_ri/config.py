"""Experiment configuration: the `ExperimentSpecT` model and the flat `key = value` spec file.

A spec file looks like::

    # South Pacific, Strategy II
    basin = sp
    strategy = 2
    tracks_path = data/sp_tracks.csv
    train_years = 1985-2005
    test_years = 2006-2013
    n_runs = 30
    learning_rate = 0.1

Keys of `TrainConfigT` and `NetworkOptionsT` sit at the top level next to the experiment keys.
"""

from pathlib import Path
from typing import Any, Mapping, Optional

from pydantic import BaseModel, NonNegativeInt, PositiveInt, field_validator, model_validator

from .besttrack.types import Basin
from .elman.network import NetworkOptionsT, TopologyT
from .elman.trainer import TrainConfigT
from .extraction import StrategyName, StrategyT, get_strategy
from .reference_results import YEAR_SPLITS

YearRange = tuple[int, int]

TRAIN_KEYS = frozenset(TrainConfigT.model_fields)
NETWORK_KEYS = frozenset(NetworkOptionsT.model_fields)


def parse_year_range(value: str | YearRange | list) -> YearRange:
    """`"1985-2005"` -> (1985, 2005); a single year is a one-year range."""
    if isinstance(value, (tuple, list)):
        first, last = (int(v) for v in value)
    else:
        text = str(value).strip()
        head, sep, tail = text.partition("-")
        try:
            first = int(head)
            last = int(tail) if sep else first
        except ValueError:
            raise ValueError(f"Bad year range {value!r}, expected e.g. 1985-2005") from None
    if first > last:
        raise ValueError(f"Empty year range {first}-{last}")
    return first, last


class ExperimentSpecT(BaseModel):
    basin: Basin
    strategy: StrategyName
    tracks_path: Path
    train_years: YearRange
    test_years: YearRange
    n_runs: PositiveInt = 30
    base_seed: NonNegativeInt = 0
    out_dir: Path = Path("results")
    n_jobs: int = 1
    decision_threshold: float = 0.5
    hidden_units: Optional[PositiveInt] = None
    roc_thresholds: Optional[PositiveInt] = None
    write_plots: bool = False
    train: TrainConfigT = TrainConfigT()
    network: NetworkOptionsT = NetworkOptionsT()

    @field_validator("basin", mode="before")
    @classmethod
    def _basin_flag(cls, value: Any) -> Any:
        return Basin.from_flag(value) if isinstance(value, str) else value

    @field_validator("strategy", mode="before")
    @classmethod
    def _strategy_flag(cls, value: Any) -> Any:
        return get_strategy(value).name

    @field_validator("train_years", "test_years", mode="before")
    @classmethod
    def _year_range(cls, value: Any) -> YearRange:
        return parse_year_range(value)

    @model_validator(mode="after")
    def _disjoint_years(self) -> "ExperimentSpecT":
        (a0, a1), (b0, b1) = self.train_years, self.test_years
        if a0 <= b1 and b0 <= a1:
            raise ValueError(f"Year ranges overlap: train {a0}-{a1}, test {b0}-{b1}")
        if self.basin == Basin.OTHER:
            raise ValueError("Experiments need a basin with a defined box (sp or si)")
        return self

    @property
    def strategy_spec(self) -> StrategyT:
        return get_strategy(self.strategy)

    @property
    def topology(self) -> TopologyT:
        return TopologyT(hidden=self.hidden_units or self.strategy_spec.hidden_units)

    @property
    def seeds(self) -> list[int]:
        return [self.base_seed + i for i in range(self.n_runs)]


SPEC_KEYS = frozenset(ExperimentSpecT.model_fields) - {"train", "network"}


def _merge(values: Mapping[str, Any], overrides: Optional[Mapping[str, Any]]) -> dict[str, Any]:
    merged = dict(values)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(merged) - SPEC_KEYS - TRAIN_KEYS - NETWORK_KEYS)
    if unknown:
        raise ValueError(f"Unknown spec keys: {', '.join(unknown)}")
    return merged


def load_spec_file(path: str | Path) -> dict[str, str]:
    """Read `key = value` lines; `#` starts a comment, blank lines are skipped."""
    values: dict[str, str] = {}
    for line_number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"{path}:{line_number}: expected 'key = value', got {raw.strip()!r}")
        if key in values:
            raise ValueError(f"{path}:{line_number}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def build_experiment_spec(
    values: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentSpecT:
    """Merge file values with overrides (None overrides are ignored) and validate.

    Year ranges default to the published split for the basin.
    """
    merged = _merge(values, overrides)
    top = {k: v for k, v in merged.items() if k in SPEC_KEYS}
    train = {k: v for k, v in merged.items() if k in TRAIN_KEYS and k not in SPEC_KEYS}
    network = {k: v for k, v in merged.items() if k in NETWORK_KEYS}
    if "decision_threshold" in top:
        train["decision_threshold"] = top["decision_threshold"]

    if "basin" in top and ("train_years" not in top or "test_years" not in top):
        basin = Basin.from_flag(top["basin"]) if isinstance(top["basin"], str) else top["basin"]
        if basin in YEAR_SPLITS:
            top.setdefault("train_years", YEAR_SPLITS[basin].train_years)
            top.setdefault("test_years", YEAR_SPLITS[basin].test_years)

    return ExperimentSpecT.model_validate({**top, "train": train, "network": network})


def format_spec(spec: ExperimentSpecT) -> str:
    """The resolved spec as a spec file that `load_spec_file` reads back."""

    def render(value: Any) -> str:
        if isinstance(value, bool):
            return str(value).lower()
        if isinstance(value, tuple):
            return f"{value[0]}-{value[1]}"
        if hasattr(value, "value"):
            return str(value.value)
        return str(value)

    lines = []
    for key, value in spec.model_dump(exclude={"train", "network"}).items():
        if value is not None:
            lines.append(f"{key} = {render(value)}")
    for key, value in spec.train.model_dump(exclude={"decision_threshold"}).items():
        lines.append(f"{key} = {render(value)}")
    for key, value in spec.network.model_dump().items():
        lines.append(f"{key} = {render(value)}")
    return "\n".join(lines) + "\n"


def build_train_config(
    values: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
) -> tuple[TrainConfigT, NetworkOptionsT]:
    """Training and network options from a spec file; experiment keys are accepted and ignored."""
    merged = _merge(values, overrides)
    train = TrainConfigT.model_validate({k: v for k, v in merged.items() if k in TRAIN_KEYS})
    network = NetworkOptionsT.model_validate({k: v for k, v in merged.items() if k in NETWORK_KEYS})
    return train, network
