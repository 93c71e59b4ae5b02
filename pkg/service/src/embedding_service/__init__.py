"""Embedding microservice for the paraphrase evaluation toolkit."""

from .app import create_app
from .encoder import Encoder, TINY_SEEDED

__version__ = "0.1.0"

__all__ = ["create_app", "Encoder", "TINY_SEEDED", "__version__"]
