"""HTTP surface: FastAPI app wrapping the logalg command layer."""

from .app import app, create_app

__all__ = ["app", "create_app"]
