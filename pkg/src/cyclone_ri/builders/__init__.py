from .builder import ExperimentBuilder

__all__ = ["ExperimentBuilder"]
