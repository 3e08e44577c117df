"""
Data Models and Schema Validation

This package provides Pydantic models for run configuration validation.
"""

from tools.lib.models.config_models import HyperParameters, RunConfig


__all__ = [
    "RunConfig",
    "HyperParameters",
]
