"""Middleware package for cross-cutting concerns of a CLI run.

This package contains:
- Run ID tracing (correlation IDs for one invocation)
- Command entry/exit logging
"""

from goppa_bounds.middleware.logging import trace_command
from goppa_bounds.middleware.run_id import get_run_id, run_scope

__all__ = [
    "get_run_id",
    "run_scope",
    "trace_command",
]
