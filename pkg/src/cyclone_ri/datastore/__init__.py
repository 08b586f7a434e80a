from .core import TrackStore

__all__ = ["TrackStore"]
