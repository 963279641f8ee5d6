"""HTTP service layer: FastAPI app plus typed request/response models."""

from .app import create_app

__all__ = ["create_app"]
