"""HTTP service wrapping the scenario pipeline."""

from .app import create_app

__all__ = ["create_app"]
