"""
DRE-MARL - Library Modules

Reward estimation, aggregation and training for cooperative multi-agent
reinforcement learning under reward uncertainty.
"""

from tools.lib.config_loader import ConfigLoader, ConfigurationError, parse_config
from tools.lib.models.config_models import HyperParameters, RunConfig


__all__ = [
    "ConfigLoader",
    "ConfigurationError",
    "parse_config",
    "HyperParameters",
    "RunConfig",
]
