"""Run ID context - correlates every log line of one CLI invocation.

Every command run gets a short unique ID that:
- Is stamped on log records by ``goppa_bounds.core.logging.RunIdFilter``
- Can be echoed in structured reports (``--timestamps``)
- Is available anywhere in the calling thread during the run via contextvars
"""

import uuid
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Optional

run_id_var: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def get_run_id() -> Optional[str]:
    """Get the current run ID from context."""
    return run_id_var.get()


@contextmanager
def run_scope(run_id: Optional[str] = None) -> Iterator[str]:
    """Bind a run ID for the duration of a command.

    Usage:
        with run_scope() as rid:
            logger.info(f"[{rid}] starting")
    """
    rid = run_id or uuid.uuid4().hex[:12]
    token = run_id_var.set(rid)
    try:
        yield rid
    finally:
        run_id_var.reset(token)
