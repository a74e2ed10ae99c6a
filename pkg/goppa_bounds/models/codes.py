"""Goppa code schemas."""

from typing import Optional

from pydantic import BaseModel, Field

from goppa_bounds.models.base import ReportMeta
from goppa_bounds.models.bounds import TowerParamsModel


class CertificateModel(BaseModel):
    """Column permutation carrying C(image) onto C(source)."""

    kind: str
    description: str
    source: int
    image: int
    permutation: list[int]
    scale: int
    verified: bool


class CodeReportModel(BaseModel):
    """One irreducible Goppa code C(α)."""

    meta: ReportMeta
    params: TowerParamsModel
    alpha: int
    length: int
    dimension: int
    parity_rank: int = Field(description="Rank of the F_p parity rows")
    minimum_distance: Optional[int] = Field(default=None, description="Only at desk scale")
    extended_length: Optional[int] = None
    extended_sums_zero: Optional[bool] = None
    parity_file: Optional[str] = None
    certificates: list[CertificateModel] = Field(default_factory=list)
