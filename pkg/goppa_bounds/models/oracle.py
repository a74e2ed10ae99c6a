"""Oracle verification schemas.

This module contains schemas for:
- Single exact comparisons
- Run statistics
- The verification report
"""

from typing import Optional

from pydantic import BaseModel, Field

from goppa_bounds.models.base import ReportMeta
from goppa_bounds.models.bounds import TowerParamsModel


class ComparisonModel(BaseModel):
    """Predicted against measured, compared exactly."""

    quantity: str
    expected: int
    measured: int
    passed: bool


class RunStatsModel(BaseModel):
    """Wall clock and peak memory; integers only."""

    elapsed_ms: int
    peak_rss_kib: int


class VerificationReportModel(BaseModel):
    """Exhaustive check of every predicted integer for one (q, n, r)."""

    meta: ReportMeta
    params: TowerParamsModel
    status: str = Field(description="'pass' or 'fail'")
    first_mismatch: Optional[str] = Field(default=None, description="First differing quantity")
    backend: str
    orbit_counts: dict[str, int] = Field(description="Orbit count per generator set")
    comparisons: list[ComparisonModel]
    dumps: list[str] = Field(default_factory=list, description="Partition dump files")
    stats: Optional[RunStatsModel] = Field(default=None, description="Present with --timestamps")
