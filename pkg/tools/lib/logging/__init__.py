"""
Logging utilities for DRE-MARL runs

This package provides structured logging capabilities with JSON formatting.
"""

from tools.lib.logging.structured_logger import StructuredFormatter, StructuredLogger


__all__ = ["StructuredFormatter", "StructuredLogger"]
