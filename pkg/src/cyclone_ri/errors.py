"""Exceptions raised across the cyclone_ri pipeline."""

from typing import Any, Optional


class CycloneRIError(Exception):
    pass


class TrackParseError(CycloneRIError):
    """A best-track record could not be decoded."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class ExtractionError(CycloneRIError):
    pass


class TrainingError(CycloneRIError):
    pass


class EvaluationError(CycloneRIError):
    pass


class ExperimentError(CycloneRIError):
    """One or more experiment runs failed; `partial` holds what did finish."""

    def __init__(self, message: str, partial: Optional[Any] = None):
        self.partial = partial
        super().__init__(message)
