"""Semantic sidecar: transformer-backed scoring service for the analyzer.

Wire protocol (HTTP, JSON, UTF-8):
  * POST /v1/nsp    {"pairs": [{"a": str, "b": str}]} -> {"scores": [float]}
  * POST /v1/embed  {"context": str, "entities": [str]}
                    -> {"vectors": [[float]], "dim": int}
  * GET  /v1/health -> {"name": str, "dim": int, "model": str}
"""

from .app import create_app
from .config import ServiceConfig
from .model import ModelBackend

__all__ = ["ServiceConfig", "ModelBackend", "create_app"]
__version__ = "0.1.0"
