"""Unit tests for the exception hierarchy and the CLI error boundary."""

import io
import json

import pytest

from goppa_bounds.core.exceptions import (
    EXIT_INVALID,
    EXIT_MISMATCH,
    CapacityError,
    DivisionByZeroError,
    InternalInconsistencyError,
    NotInSError,
    ParameterError,
    UnsupportedCaseError,
    handle_exception,
)
from goppa_bounds.middleware import get_run_id, run_scope


class TestExceptionHierarchy:
    """Test error codes and exit statuses."""

    @pytest.mark.parametrize(
        "exc, code, status",
        [
            (ParameterError("bad"), "PARAMETER_ERROR", EXIT_INVALID),
            (CapacityError(1 << 55, 1 << 26), "CAPACITY_EXCEEDED", EXIT_INVALID),
            (NotInSError(5, 1), "DOMAIN_ERROR", EXIT_INVALID),
            (DivisionByZeroError(), "DIVISION_BY_ZERO", EXIT_INVALID),
            (UnsupportedCaseError("p | k"), "UNSUPPORTED_CASE", EXIT_INVALID),
            (InternalInconsistencyError("disagree"), "INTERNAL_INCONSISTENCY", EXIT_MISMATCH),
        ],
    )
    def test_codes(self, exc, code, status):
        assert exc.error_code == code
        assert exc.exit_code == status

    def test_capacity_message_uses_powers_of_two(self):
        exc = CapacityError(1 << 55, 1 << 26)

        assert exc.message == "requires 2^55 elements"
        assert exc.detail == "configured budget is 2^26 elements"

    def test_capacity_message_other_sizes(self):
        assert CapacityError(1000, 512, what="table entries").message == "requires 1000 table entries"


class TestHandleException:
    """Test conversion of exceptions into exit statuses and error documents."""

    def test_human_line(self):
        stream = io.StringIO()
        status = handle_exception(ParameterError("q=6 is not a prime power", detail="factorization"), stream=stream)

        assert status == EXIT_INVALID
        assert stream.getvalue() == "error: q=6 is not a prime power (factorization)\n"

    def test_structured_document(self):
        stream = io.StringIO()
        status = handle_exception(CapacityError(1 << 55, 1 << 26), structured=True, stream=stream)
        document = json.loads(stream.getvalue())

        assert status == EXIT_INVALID
        assert document["error"] == "CAPACITY_EXCEEDED"
        assert document["message"] == "requires 2^55 elements"

    def test_unexpected_exception(self):
        stream = io.StringIO()
        status = handle_exception(ValueError("boom"), structured=True, stream=stream)
        document = json.loads(stream.getvalue())

        assert status == EXIT_MISMATCH
        assert document["error"] == "INTERNAL_ERROR"
        assert "ValueError: boom" in document["detail"]


class TestRunScope:
    """Test run ID binding."""

    def test_scope_binds_and_resets(self):
        assert get_run_id() is None
        with run_scope("abc123") as rid:
            assert rid == "abc123"
            assert get_run_id() == "abc123"
        assert get_run_id() is None

    def test_generated_ids_are_short_and_unique(self):
        with run_scope() as first:
            pass
        with run_scope() as second:
            pass
        assert len(first) == 12
        assert first != second
