"""Bound report schemas.

This module contains schemas for:
- Tower parameters
- Case flags and the closed-form branch
- Per-subgroup fixed-set rows and the full bound report
"""

from typing import Optional

from pydantic import BaseModel, Field

from goppa_bounds.models.base import ReportMeta


class TowerParamsModel(BaseModel):
    """q = p^t and the primes n, r."""

    q: int
    p: int
    t: int
    n: int
    r: int


class CaseLabelModel(BaseModel):
    """Divisibility flags of the deciding prime and the branch they select."""

    prime: int = Field(description="r, or n when n = r")
    flags: dict[str, bool]
    branch: str = Field(description="Closed-form branch 1-4 or 'table-derived'")


class FixedCountRowModel(BaseModel):
    """One subgroup row of the fixed-set table."""

    subgroup: str
    exponent: int = Field(description="Generator σ^e; e = |G| for the trivial subgroup")
    order: int
    fresh_elements: int = Field(description="Group elements generating exactly this subgroup")
    fixed_affine: int
    fixed_pl: int


class BoundReportModel(BaseModel):
    """Closed-form side of the bound for one (q, n, r)."""

    meta: ReportMeta
    params: TowerParamsModel
    group_order: int
    s_size: int
    affine_set_count: int
    pl_set_count: int
    case: CaseLabelModel
    table: list[FixedCountRowModel]
    affine_orbit_bound: int
    extended_bound: int
    closed_form_bound: Optional[int] = Field(
        default=None, description="Branch formula value; absent when table-derived"
    )
    warnings: list[str] = Field(default_factory=list)
