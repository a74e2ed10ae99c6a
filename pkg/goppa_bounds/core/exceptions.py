"""Exception Handling - Custom exceptions and the CLI error boundary.

Provides:
- Custom exception hierarchy for domain errors
- ``handle_exception`` that turns any error into an exit status and a
  consistent error document, logged with the current run ID

Exit statuses: 0 success/pass, 1 verification mismatch or internal
inconsistency, 2 invalid parameters or capacity.
"""

import logging
import sys
from typing import Optional, TextIO

from goppa_bounds.middleware.run_id import get_run_id
from goppa_bounds.models import ErrorResponse

logger = logging.getLogger("goppa_bounds.exceptions")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2


# =============================================================================
# Custom Exception Hierarchy
# =============================================================================


class AppException(Exception):
    """Base exception for all application errors.

    Subclass this for domain-specific errors:

        class BudgetError(AppException):
            def __init__(self, bits: int):
                super().__init__(
                    message=f"requires 2^{bits} elements",
                    error_code="CAPACITY_EXCEEDED",
                    exit_code=2,
                )
    """

    def __init__(
        self,
        message: str,
        error_code: str = "APP_ERROR",
        exit_code: int = EXIT_INVALID,
        detail: Optional[str] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.detail = detail
        super().__init__(message)


class ParameterError(AppException):
    """Invalid input parameters (exit 2)."""

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(
            message=message,
            error_code="PARAMETER_ERROR",
            exit_code=EXIT_INVALID,
            detail=detail,
        )


class CapacityError(AppException):
    """Requested enumeration exceeds the configured budget (exit 2)."""

    def __init__(self, required: int, budget: int, what: str = "elements"):
        super().__init__(
            message=f"requires {_describe_size(required)} {what}",
            error_code="CAPACITY_EXCEEDED",
            exit_code=EXIT_INVALID,
            detail=f"configured budget is {_describe_size(budget)} {what}",
        )
        self.required = required
        self.budget = budget


class DomainError(AppException):
    """Operation undefined for the given element (exit 2)."""

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(
            message=message,
            error_code="DOMAIN_ERROR",
            exit_code=EXIT_INVALID,
            detail=detail,
        )


class UnsupportedCaseError(AppException):
    """The counting hypotheses exclude this input (exit 2)."""

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(
            message=message,
            error_code="UNSUPPORTED_CASE",
            exit_code=EXIT_INVALID,
            detail=detail,
        )


class InternalInconsistencyError(AppException):
    """Two independent computations disagree (exit 1)."""

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(
            message=message,
            error_code="INTERNAL_INCONSISTENCY",
            exit_code=EXIT_MISMATCH,
            detail=detail,
        )


# =============================================================================
# Specific Domain Exceptions
# =============================================================================


class DivisionByZeroError(DomainError):
    """Inverse of the zero element."""

    def __init__(self) -> None:
        super().__init__(message="division by zero in field arithmetic")
        self.error_code = "DIVISION_BY_ZERO"


class NotInSError(DomainError):
    """Element does not have degree r over F_{q^n}."""

    def __init__(self, handle: int, degree: int):
        super().__init__(
            message=f"element {handle} is not in S",
            detail=f"degree over F_q^n is {degree}",
        )


class CacheFormatError(AppException):
    """Tower cache file is unreadable or belongs to another format version."""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"invalid tower cache file {path}",
            error_code="CACHE_FORMAT_ERROR",
            exit_code=EXIT_INVALID,
            detail=reason,
        )


def _describe_size(value: int) -> str:
    if value > 0 and value & (value - 1) == 0:
        return f"2^{value.bit_length() - 1}"
    return str(value)


# =============================================================================
# Error Boundary
# =============================================================================


def handle_exception(
    exc: BaseException,
    structured: bool = False,
    stream: Optional[TextIO] = None,
) -> int:
    """Log an exception, print an error document and return the exit status.

    This is the single place where exceptions leave the library and become
    process exit codes. Call it from the CLI entry point.

    Args:
        exc: The exception raised by a command.
        structured: Print an ``ErrorResponse`` JSON document instead of a line.
        stream: Destination for the error document (default stderr).

    Returns:
        The process exit status.
    """
    stream = stream or sys.stderr
    run_id = get_run_id() or "no-id"

    if isinstance(exc, AppException):
        log_level = logging.ERROR if exc.exit_code == EXIT_MISMATCH else logging.WARNING
        logger.log(log_level, f"[{run_id}] {exc.error_code}: {exc.message}")
        error = ErrorResponse(error=exc.error_code, message=exc.message, detail=exc.detail)
        exit_code = exc.exit_code
    else:
        logger.exception(f"[{run_id}] Unhandled exception: {type(exc).__name__}: {exc}")
        error = ErrorResponse(
            error="INTERNAL_ERROR",
            message="An unexpected error occurred",
            detail=f"{type(exc).__name__}: {exc}",
        )
        exit_code = EXIT_MISMATCH

    if structured:
        stream.write(error.model_dump_json(indent=2) + "\n")
    else:
        line = f"error: {error.message}"
        if error.detail:
            line += f" ({error.detail})"
        stream.write(line + "\n")
    return exit_code
