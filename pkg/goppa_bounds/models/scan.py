"""Parameter scan schemas."""

from typing import Optional

from pydantic import BaseModel

from goppa_bounds.models.base import ReportMeta


class ScanRowModel(BaseModel):
    q: int
    n: int
    r: int
    branch: str
    extended_bound: Optional[int] = None
    affine_orbit_bound: Optional[int] = None
    closed_form: Optional[int] = None
    integral: bool
    agrees: Optional[bool] = None


class ScanReportModel(BaseModel):
    """Integrality and branch agreement over a grid of triples."""

    meta: ReportMeta
    triples: int
    non_integral: int
    disagreements: int
    csv_file: Optional[str] = None
    rows: list[ScanRowModel]
