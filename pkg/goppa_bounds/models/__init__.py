"""Models package - Pydantic schemas for structured reports.

Schemas are organized by domain:
- base.py: Common models (ErrorResponse, ReportMeta)
- bounds.py: Bound report schemas
- oracle.py: Verification report schemas
- counting.py: Matrix count schemas
- codes.py: Goppa code schemas
- scan.py: Parameter scan schemas

Import directly from this package:
    from goppa_bounds.models import BoundReportModel, ErrorResponse
"""

# Base/Common
from goppa_bounds.models.base import (
    ErrorResponse,
    ReportMeta,
)

# Bounds
from goppa_bounds.models.bounds import (
    BoundReportModel,
    CaseLabelModel,
    FixedCountRowModel,
    TowerParamsModel,
)

# Oracle
from goppa_bounds.models.oracle import (
    ComparisonModel,
    RunStatsModel,
    VerificationReportModel,
)

# Counting
from goppa_bounds.models.counting import (
    CyclotomicProfileModel,
    MatrixCountReportModel,
)

# Codes
from goppa_bounds.models.codes import (
    CertificateModel,
    CodeReportModel,
)

# Scan
from goppa_bounds.models.scan import (
    ScanReportModel,
    ScanRowModel,
)

__all__ = [
    # Base
    "ErrorResponse",
    "ReportMeta",
    # Bounds
    "BoundReportModel",
    "CaseLabelModel",
    "FixedCountRowModel",
    "TowerParamsModel",
    # Oracle
    "ComparisonModel",
    "RunStatsModel",
    "VerificationReportModel",
    # Counting
    "CyclotomicProfileModel",
    "MatrixCountReportModel",
    # Codes
    "CertificateModel",
    "CodeReportModel",
    # Scan
    "ScanReportModel",
    "ScanRowModel",
]
