"""Command tracing - entry/exit logging for CLI commands.

Example log output:
    INFO  [3f2a9c1b0d4e] → verify q=2 n=3 r=5
    INFO  [3f2a9c1b0d4e] ← exit 0 (812.40ms)

For logging configuration (formatters, setup), see goppa_bounds.core.logging.
"""

import functools
import logging
import time
from collections.abc import Callable
from typing import Any

from goppa_bounds.middleware.run_id import get_run_id

logger = logging.getLogger("goppa_bounds.command")


def trace_command(name: str) -> Callable[[Callable[..., int]], Callable[..., int]]:
    """Decorate a command handler returning an exit status.

    The first positional argument of the handler must be the run
    configuration; its ``describe()`` summary is logged on entry.
    """

    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(config: Any, *args: Any, **kwargs: Any) -> int:
            run_id = get_run_id() or "no-id"
            summary = config.describe() if hasattr(config, "describe") else ""
            logger.info(f"[{run_id}] → {name} {summary}".rstrip())

            start_time = time.perf_counter()
            try:
                status = func(config, *args, **kwargs)
            except Exception as e:
                duration_ms = (time.perf_counter() - start_time) * 1000
                logger.error(
                    f"[{run_id}] ✗ Exception: {type(e).__name__}: {e} ({duration_ms:.2f}ms)"
                )
                raise

            duration_ms = (time.perf_counter() - start_time) * 1000
            log_level = logging.WARNING if status else logging.INFO
            logger.log(log_level, f"[{run_id}] ← exit {status} ({duration_ms:.2f}ms)")
            return status

        return wrapper

    return decorator
