import logging
import shutil
import tempfile
from pathlib import Path
from typing import Any, Optional

from ..besttrack.types import Basin
from ..config import build_experiment_spec
from ..elman.network import NetworkOptionsT
from ..elman.trainer import TrainConfigT
from ..experiment import ExperimentRunner
from ..extraction import StrategyName
from ..hooks import PostEpochHook, PostTrainHook, PreTrainHook, TrainingHooks, progress_logger

logger = logging.getLogger(__name__)


class ExperimentBuilder:
    """Fluent construction of an ExperimentRunner with training hooks attached."""

    def __init__(self, hooks: Optional[TrainingHooks] = None):
        """
        Args:
            hooks: Registry to extend; a fresh TrainingHooks when omitted
        """
        self.hooks = hooks or TrainingHooks()
        self._values: dict[str, Any] = {}
        self._temp_dir: Optional[str] = None

    def for_basin(self, basin: Basin | str) -> "ExperimentBuilder":
        """
        Select the basin whose genesis box and season split apply.

        Args:
            basin: A Basin or its command-line flag, e.g. "sp" or "si"

        Returns:
            This builder
        """
        self._values["basin"] = basin
        return self

    def with_strategy(self, strategy: StrategyName | str | int) -> "ExperimentBuilder":
        """
        Select the RI labelling strategy.

        Args:
            strategy: StrategyName, or 1 / 2 for the 30 kt and 10 kt thresholds

        Returns:
            This builder
        """
        self._values["strategy"] = strategy
        return self

    def with_tracks(self, path: str | Path) -> "ExperimentBuilder":
        """
        Args:
            path: Track CSV written by `cyclone-ri ingest`

        Returns:
            This builder
        """
        self._values["tracks_path"] = Path(path)
        return self

    def with_years(self, train_years: tuple[int, int] | str, test_years: tuple[int, int] | str) -> "ExperimentBuilder":
        """
        Override the basin's published train/test season split.

        Args:
            train_years: Inclusive season range, as a tuple or "1985-2005"
            test_years: Inclusive season range for evaluation

        Returns:
            This builder
        """
        self._values["train_years"] = train_years
        self._values["test_years"] = test_years
        return self

    def with_train_config(self, config: Optional[TrainConfigT] = None, **overrides: Any) -> "ExperimentBuilder":
        """
        Set training options.

        Args:
            config: A full TrainConfigT; its fields are copied
            **overrides: Individual TrainConfigT fields, applied after `config`

        Returns:
            This builder
        """
        if config is not None:
            self._values.update(config.model_dump())
        self._values.update(overrides)
        return self

    def with_network_options(self, options: NetworkOptionsT) -> "ExperimentBuilder":
        """
        Args:
            options: Bias use and initial context value for every run

        Returns:
            This builder
        """
        self._values.update(options.model_dump())
        return self

    def with_hidden_units(self, hidden_units: int) -> "ExperimentBuilder":
        """
        Args:
            hidden_units: Size of the hidden and context layers

        Returns:
            This builder
        """
        self._values["hidden_units"] = hidden_units
        return self

    def with_runs(self, n_runs: int, base_seed: int = 0, n_jobs: int = 1) -> "ExperimentBuilder":
        """
        Set the number of seeded runs.

        Args:
            n_runs: Independent training runs
            base_seed: Seed of the first run; run i uses base_seed + i
            n_jobs: Worker processes for the runs

        Returns:
            This builder
        """
        self._values.update(n_runs=n_runs, base_seed=base_seed, n_jobs=n_jobs)
        return self

    def with_plots(self, enabled: bool = True) -> "ExperimentBuilder":
        """
        Args:
            enabled: Whether the report includes the ROC and duration PNGs

        Returns:
            This builder
        """
        self._values["write_plots"] = enabled
        return self

    def write_to(self, out_dir: str | Path) -> "ExperimentBuilder":
        """
        Args:
            out_dir: Report directory, created when the runner writes

        Returns:
            This builder
        """
        self._values["out_dir"] = Path(out_dir)
        return self

    def write_to_temporary_dir(self) -> "ExperimentBuilder":
        """
        Send the report to a scratch directory removed on `cleanup()`.

        Returns:
            This builder
        """
        self._temp_dir = tempfile.mkdtemp(prefix="cyclone_ri_")
        self._values["out_dir"] = Path(self._temp_dir)
        return self

    def add_pre_train_hook(self, hook: PreTrainHook) -> "ExperimentBuilder":
        """
        Args:
            hook: Called with the initial network and the TrainConfigT of each run

        Returns:
            This builder
        """
        self.hooks.add_pre_train_hook(hook)
        return self

    def add_epoch_hook(self, hook: PostEpochHook) -> "ExperimentBuilder":
        """
        Args:
            hook: Called with the epoch number, epoch SSE and training accuracy

        Returns:
            This builder
        """
        self.hooks.add_post_epoch_hook(hook)
        return self

    def add_post_train_hook(self, hook: PostTrainHook) -> "ExperimentBuilder":
        """
        Args:
            hook: Called with the trained network and its history

        Returns:
            This builder
        """
        self.hooks.add_post_train_hook(hook)
        return self

    def log_progress(self, every: int = 100) -> "ExperimentBuilder":
        """
        Log SSE and training accuracy during training.

        Args:
            every: Epoch interval between log lines

        Returns:
            This builder
        """
        self.hooks.add_post_epoch_hook(progress_logger(every))
        return self

    def build(self) -> ExperimentRunner:
        """
        Validate the collected values and create the runner.

        Returns:
            An ExperimentRunner sharing this builder's hooks

        Raises:
            pydantic.ValidationError: If a value is missing or out of range
            ValueError: If the basin flag is not recognised
        """
        spec = build_experiment_spec(self._values)
        logger.debug("built experiment for %s strategy %s", spec.basin.value, spec.strategy.value)
        return ExperimentRunner(spec, self.hooks)

    @property
    def out_dir(self) -> Optional[Path]:
        return self._values.get("out_dir")

    def cleanup(self):
        """Remove the scratch directory made by `write_to_temporary_dir`, if any."""
        if self._temp_dir and Path(self._temp_dir).exists():
            shutil.rmtree(self._temp_dir)
            self._temp_dir = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.cleanup()
