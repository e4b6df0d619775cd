"""Grounded coordinate-term discovery for Java class mentions in text."""
from .config import ConfigError, PipelineConfig

__version__ = "0.1.0"

__all__ = ["ConfigError", "PipelineConfig", "__version__"]
