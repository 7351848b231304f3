"""HTTP service exposing the simulator."""

from .app import app

__all__ = ["app"]
