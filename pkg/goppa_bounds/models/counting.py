"""Matrix counting schemas."""

from typing import Optional

from pydantic import BaseModel, Field

from goppa_bounds.models.base import ReportMeta


class CyclotomicProfileModel(BaseModel):
    """Splitting of the k-th cyclotomic polynomial over F_Q."""

    k: int
    field_size: int
    phi: int
    degree: int = Field(description="d = ord_k(Q)")
    factor_count: int
    quadratic_count: int


class MatrixCountReportModel(BaseModel):
    """Closed-form count of order-k matrices with irreducible m_A, and its confirmation."""

    meta: ReportMeta
    field_size: int
    k: int
    hypotheses_met: bool
    reasons: list[str] = Field(default_factory=list, description="Failed hypotheses")
    profile: Optional[CyclotomicProfileModel] = None
    conjugacy_class_count: Optional[int] = None
    class_size: Optional[int] = None
    total: Optional[int] = None
    brute_force_total: Optional[int] = Field(default=None, description="Absent above the matrix budget")
    confirmed: Optional[bool] = None
