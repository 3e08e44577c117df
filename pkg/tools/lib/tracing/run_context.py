"""
Run ID Management

Tracks which training run the current code is executing for, so that log
records emitted from deep inside the trainer can be attributed to a run.
"""

import contextvars
from typing import Optional


_run_id: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar(
    "run_id", default=None
)


def get_run_id() -> Optional[str]:
    """
    Get the current run ID from context.

    Returns:
        Optional[str]: Current run ID or None outside a run
    """
    return _run_id.get()


def set_run_id(run_id: Optional[str]) -> None:
    _run_id.set(run_id)


def clear_run_id() -> None:
    """Clear the run ID from current context."""
    _run_id.set(None)


class RunContext:
    """
    Context manager that scopes a run ID.

    The previous run ID is restored on exit, so nested runs (a sweep that
    trains several configurations in one process) attribute correctly.
    """

    def __init__(self, run_id: str):
        self.run_id = run_id
        self._token: Optional[contextvars.Token] = None

    def __enter__(self) -> str:
        self._token = _run_id.set(self.run_id)
        return self.run_id

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self._token is not None:
            _run_id.reset(self._token)
            self._token = None
