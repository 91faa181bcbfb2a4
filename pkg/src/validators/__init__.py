"""Run configuration validation"""

from .config_validator import ConfigValidator, RunConfig

__all__ = ["ConfigValidator", "RunConfig"]
