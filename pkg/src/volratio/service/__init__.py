"""HTTP service layer: FastAPI app plus pydantic request/response models."""

from .app import app

__all__ = ["app"]
