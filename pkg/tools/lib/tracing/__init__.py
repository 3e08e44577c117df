"""
Run Tracing Module

This package scopes a run ID over each training run so log records can be
attributed to the run that produced them.
"""

from tools.lib.tracing.run_context import (
    RunContext,
    clear_run_id,
    get_run_id,
    set_run_id,
)


__all__ = [
    "RunContext",
    "clear_run_id",
    "get_run_id",
    "set_run_id",
]
