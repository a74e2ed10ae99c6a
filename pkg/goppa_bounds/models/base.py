"""Base schemas and common report models.

This module contains:
- The error document printed by the CLI error boundary
- Report metadata shared by every structured report
"""

from datetime import datetime
from typing import Optional

from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    """Standard error document.

    Used for consistent error formatting across all commands.
    """

    error: str = Field(description="Error type or code")
    message: str = Field(description="Human-readable error message")
    detail: Optional[str] = Field(default=None, description="Additional error details")


class ReportMeta(BaseModel):
    """Tool and run identification.

    ``generated_at`` and ``run_id`` stay unset unless timestamps are requested,
    so repeated runs produce byte-identical documents.
    """

    tool: str = Field(default="goppa-bounds", description="Producing tool")
    version: str = Field(description="Tool version")
    command: str = Field(description="Subcommand that produced the report")
    generated_at: Optional[datetime] = Field(default=None, description="Report creation time")
    run_id: Optional[str] = Field(default=None, description="Run correlation ID")
