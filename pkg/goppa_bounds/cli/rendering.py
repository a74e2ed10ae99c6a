"""Report rendering - service results to report models, and models to text.

Structured output is the model's JSON with unset fields omitted; human
output is a short summary with the fixed-set table laid out by pandas.
"""

import sys
from datetime import datetime, timezone
from typing import Optional, TextIO

import pandas as pd
from pydantic import BaseModel

from goppa_bounds import __version__
from goppa_bounds.cli.parser import RunConfig
from goppa_bounds.middleware.run_id import get_run_id
from goppa_bounds.models import (
    BoundReportModel,
    CaseLabelModel,
    CertificateModel,
    CodeReportModel,
    ComparisonModel,
    CyclotomicProfileModel,
    FixedCountRowModel,
    MatrixCountReportModel,
    ReportMeta,
    RunStatsModel,
    ScanReportModel,
    ScanRowModel,
    TowerParamsModel,
    VerificationReportModel,
)
from goppa_bounds.services.bounds import BoundReport
from goppa_bounds.services.codes import EquivalenceCertificate
from goppa_bounds.services.counting import CyclotomicProfile
from goppa_bounds.services.fields import TowerParams
from goppa_bounds.services.oracle import VerificationReport


def report_meta(config: RunConfig) -> ReportMeta:
    meta = ReportMeta(version=__version__, command=config.command)
    if config.timestamps:
        meta = meta.model_copy(update={"generated_at": datetime.now(timezone.utc), "run_id": get_run_id()})
    return meta


def params_model(params: TowerParams) -> TowerParamsModel:
    return TowerParamsModel(q=params.q, p=params.p, t=params.t, n=params.n, r=params.r)


# =============================================================================
# Service result → model
# =============================================================================


def bound_report_model(report: BoundReport, config: RunConfig) -> BoundReportModel:
    rationale = report.table.rationale
    return BoundReportModel(
        meta=report_meta(config),
        params=params_model(report.params),
        group_order=report.params.group_order,
        s_size=report.s_size,
        affine_set_count=report.affine_set_count,
        pl_set_count=report.pl_set_count,
        case=CaseLabelModel(prime=rationale.prime, flags=rationale.flags, branch=rationale.branch),
        table=[
            FixedCountRowModel(
                subgroup=row.subgroup.label,
                exponent=row.subgroup.exponent,
                order=row.subgroup.order,
                fresh_elements=row.subgroup.fresh_element_count,
                fixed_affine=row.fixed_affine,
                fixed_pl=row.fixed_pl,
            )
            for row in report.table.rows
        ],
        affine_orbit_bound=report.affine_orbit_bound,
        extended_bound=report.extended_bound,
        closed_form_bound=report.closed_form_bound,
        warnings=list(report.warnings),
    )


def verification_report_model(report: VerificationReport, config: RunConfig) -> VerificationReportModel:
    mismatch = report.first_mismatch
    return VerificationReportModel(
        meta=report_meta(config),
        params=params_model(report.params),
        status="pass" if report.passed else "fail",
        first_mismatch=mismatch.quantity if mismatch else None,
        backend=report.backend,
        orbit_counts=report.orbit_counts,
        comparisons=[
            ComparisonModel(quantity=c.quantity, expected=c.expected, measured=c.measured, passed=c.passed)
            for c in report.comparisons
        ],
        dumps=[str(path) for path in report.dumps],
        stats=(
            RunStatsModel(elapsed_ms=report.stats.elapsed_ms, peak_rss_kib=report.stats.peak_rss_kib)
            if config.timestamps
            else None
        ),
    )


def profile_model(profile: CyclotomicProfile) -> CyclotomicProfileModel:
    return CyclotomicProfileModel(
        k=profile.k,
        field_size=profile.field_size,
        phi=profile.phi,
        degree=profile.d,
        factor_count=profile.factor_count,
        quadratic_count=profile.quadratic_count,
    )


def certificate_model(certificate: EquivalenceCertificate, kind: str) -> CertificateModel:
    return CertificateModel(
        kind=kind,
        description=certificate.description,
        source=certificate.source,
        image=certificate.image,
        permutation=list(certificate.permutation),
        scale=certificate.scale,
        verified=True,
    )


def scan_report_model(frame: pd.DataFrame, config: RunConfig) -> ScanReportModel:
    rows = [
        ScanRowModel(**{key: (None if pd.isna(value) else value) for key, value in record.items()})
        for record in frame.astype(object).to_dict(orient="records")
    ]
    return ScanReportModel(
        meta=report_meta(config),
        triples=len(rows),
        non_integral=sum(1 for row in rows if not row.integral),
        disagreements=sum(1 for row in rows if row.agrees is False),
        csv_file=str(config.csv) if config.csv else None,
        rows=rows,
    )


# =============================================================================
# Model → text
# =============================================================================


def emit(model: BaseModel, config: RunConfig, stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stdout
    if config.structured:
        stream.write(model.model_dump_json(indent=2, exclude_none=True) + "\n")
        return
    stream.write(human_text(model) + "\n")


def human_text(model: BaseModel) -> str:
    match model:
        case BoundReportModel():
            return _bound_text(model)
        case VerificationReportModel():
            return _verification_text(model)
        case MatrixCountReportModel():
            return _matrices_text(model)
        case CodeReportModel():
            return _code_text(model)
        case ScanReportModel():
            return _scan_text(model)
    return model.model_dump_json(indent=2, exclude_none=True)


def _params_line(params: TowerParamsModel) -> str:
    return f"q={params.q} (p={params.p}, t={params.t})  n={params.n}  r={params.r}"


def _bound_text(model: BoundReportModel) -> str:
    table = pd.DataFrame([row.model_dump() for row in model.table]).drop(columns=["exponent"])
    lines = [
        _params_line(model.params),
        f"|G| = {model.group_order}   |S| = {model.s_size}",
        f"affine sets |𝔸| = {model.affine_set_count}   PL sets |𝕆| = {model.pl_set_count}",
        f"branch: {model.case.branch}   flags: "
        + ", ".join(f"{name}={'yes' if value else 'no'}" for name, value in model.case.flags.items()),
        "",
        table.to_string(index=False),
        "",
        f"affine orbit bound: {model.affine_orbit_bound}",
        f"extended bound:     {model.extended_bound}",
    ]
    lines.extend(f"warning: {w}" for w in model.warnings)
    return "\n".join(lines)


def _verification_text(model: VerificationReportModel) -> str:
    lines = [_params_line(model.params), f"backend: {model.backend}", ""]
    for c in model.comparisons:
        mark = "ok  " if c.passed else "FAIL"
        lines.append(f"[{mark}] {c.quantity}: expected {c.expected}, measured {c.measured}")
    lines.append("")
    lines.extend(f"dump: {path}" for path in model.dumps)
    lines.append(f"status: {model.status}" + (f" (first mismatch: {model.first_mismatch})" if model.first_mismatch else ""))
    if model.stats is not None:
        lines.append(f"elapsed: {model.stats.elapsed_ms} ms   peak RSS: {model.stats.peak_rss_kib} KiB")
    return "\n".join(lines)


def _matrices_text(model: MatrixCountReportModel) -> str:
    header = f"Q={model.field_size}  k={model.k}"
    if not model.hypotheses_met:
        return "\n".join([header, "hypotheses not met: " + "; ".join(model.reasons)])
    lines = [
        header,
        f"conjugacy classes: {model.conjugacy_class_count} of size {model.class_size}",
        f"matrices of order k: {model.total}",
    ]
    if model.brute_force_total is None:
        lines.append("brute force: skipped (above the matrix budget)")
    else:
        verdict = "confirmed" if model.confirmed else "MISMATCH"
        lines.append(f"brute force: {model.brute_force_total} ({verdict})")
    return "\n".join(lines)


def _code_text(model: CodeReportModel) -> str:
    lines = [
        _params_line(model.params),
        f"alpha: {model.alpha}",
        f"length: {model.length}   dimension: {model.dimension}   parity rank: {model.parity_rank}",
    ]
    if model.minimum_distance is not None:
        lines.append(f"minimum distance: {model.minimum_distance}")
    if model.extended_length is not None:
        lines.append(
            f"extended length: {model.extended_length}   coordinate sums zero: "
            f"{'yes' if model.extended_sums_zero else 'no'}"
        )
    if model.parity_file:
        lines.append(f"parity matrix: {model.parity_file}")
    for cert in model.certificates:
        lines.append(f"certificate {cert.description}: C({cert.source}) ~ C({cert.image}) verified")
    return "\n".join(lines)


def _scan_text(model: ScanReportModel) -> str:
    lines = [
        f"triples: {model.triples}   non-integral: {model.non_integral}   "
        f"branch disagreements: {model.disagreements}"
    ]
    if model.csv_file:
        lines.append(f"table written to {model.csv_file}")
    return "\n".join(lines)
