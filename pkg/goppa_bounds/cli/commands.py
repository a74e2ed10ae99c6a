"""Command handlers - one per subcommand, each returning an exit status."""

import logging
from collections.abc import Callable
from typing import Optional

from goppa_bounds.cli.parser import RunConfig
from goppa_bounds.cli.rendering import (
    bound_report_model,
    certificate_model,
    emit,
    params_model,
    profile_model,
    report_meta,
    scan_report_model,
    verification_report_model,
)
from goppa_bounds.core.config import Settings, get_settings
from goppa_bounds.core.exceptions import EXIT_MISMATCH, EXIT_OK
from goppa_bounds.middleware import trace_command
from goppa_bounds.models import CodeReportModel, MatrixCountReportModel
from goppa_bounds.services.bounds import extended_bound, scan_parameters
from goppa_bounds.services.codes import (
    equivalence_witness,
    extend,
    minimum_distance,
    parity_check,
    write_parity_matrix,
)
from goppa_bounds.services.counting import (
    HypothesesNotMet,
    cyclotomic_profile,
    enumerate_matrices_of_order,
    matrix_order_count,
)
from goppa_bounds.services.fields import FieldTower, Level, build_tower
from goppa_bounds.services.oracle import verify_bound

logger = logging.getLogger(__name__)


@trace_command("bound")
def cmd_bound(config: RunConfig, settings: Settings) -> int:
    params = config.tower_params()
    report = extended_bound(params.q, params.n, params.r)
    emit(bound_report_model(report, config), config)
    return EXIT_OK


@trace_command("verify")
def cmd_verify(config: RunConfig, settings: Settings) -> int:
    params = config.tower_params()
    report = verify_bound(
        params.q,
        params.n,
        params.r,
        settings=settings,
        budget=config.budget,
        backend=config.backend,
        workers=config.workers,
        cache_dir=config.cache_dir,
        dump_dir=config.out if config.dump else None,
    )
    emit(verification_report_model(report, config), config)
    return EXIT_OK if report.passed else EXIT_MISMATCH


@trace_command("matrices")
def cmd_matrices(config: RunConfig, settings: Settings) -> int:
    field_size, k = config.q**config.n, config.k
    outcome = matrix_order_count(field_size, k)

    if isinstance(outcome, HypothesesNotMet):
        model = MatrixCountReportModel(
            meta=report_meta(config),
            field_size=field_size,
            k=k,
            hypotheses_met=False,
            reasons=list(outcome.reasons),
        )
        emit(model, config)
        return EXIT_OK

    brute_force = None
    if field_size <= settings.matrix_budget_order:
        brute_force = enumerate_matrices_of_order(field_size, k, settings=settings)
    else:
        logger.info(f"Skipping brute force: Q={field_size} above matrix budget {settings.matrix_budget_order}")

    model = MatrixCountReportModel(
        meta=report_meta(config),
        field_size=field_size,
        k=k,
        hypotheses_met=True,
        profile=profile_model(cyclotomic_profile(field_size, k)),
        conjugacy_class_count=outcome.conjugacy_class_count,
        class_size=outcome.class_size,
        total=outcome.total,
        brute_force_total=brute_force,
        confirmed=None if brute_force is None else brute_force == outcome.total,
    )
    emit(model, config)
    return EXIT_MISMATCH if model.confirmed is False else EXIT_OK


@trace_command("code")
def cmd_code(config: RunConfig, settings: Settings) -> int:
    params = config.tower_params()
    tower = build_tower(params, config.backend, settings=settings, cache_dir=config.cache_dir)
    code = parity_check(tower, config.alpha)

    path = config.out / f"parity-p{params.p}-t{params.t}-n{params.n}-r{params.r}-alpha{code.alpha}.txt"
    write_parity_matrix(code, path)

    extended_length, sums_zero = None, None
    if config.extend:
        extended = extend(code)
        words = extended.codewords()
        if words is None:
            words = extended.basis
        extended_length = extended.length
        sums_zero = all(tower.sum(word) == 0 for word in words) and all(extended.contains(w) for w in words)

    certificates = []
    for kind in config.witnesses:
        if kind == "frobenius":
            certificate = equivalence_witness(tower, code.alpha, "frobenius", i=config.frobenius_power)
        else:
            a, b = _affine_witness_coefficients(config, tower)
            certificate = equivalence_witness(tower, code.alpha, "affine", a=a, b=b)
        certificates.append(certificate_model(certificate, kind))

    model = CodeReportModel(
        meta=report_meta(config),
        params=params_model(params),
        alpha=code.alpha,
        length=code.length,
        dimension=code.dimension,
        parity_rank=code.rank,
        minimum_distance=minimum_distance(code),
        extended_length=extended_length,
        extended_sums_zero=sums_zero,
        parity_file=str(path),
        certificates=certificates,
    )
    emit(model, config)
    return EXIT_MISMATCH if sums_zero is False else EXIT_OK


def _affine_witness_coefficients(config: RunConfig, tower: FieldTower) -> tuple[int, int]:
    level = tower.subfield(Level.F_QN)
    # default scale: a generator of F_{q^n}^*
    a = config.affine_a
    if a is None:
        a = tower.pow(tower.primitive_element, (tower.order - 1) // (level.size - 1))
    b = config.affine_b if config.affine_b is not None else 1
    return int(a), int(b)


@trace_command("scan")
def cmd_scan(config: RunConfig, settings: Settings) -> int:
    frame = scan_parameters(config.field_sizes, config.prime_limit)
    if config.csv is not None:
        config.csv.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(config.csv, index=False)
    model = scan_report_model(frame, config)
    emit(model, config)
    failed = model.non_integral or model.disagreements
    return EXIT_MISMATCH if failed else EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, Settings], int]] = {
    "bound": cmd_bound,
    "verify": cmd_verify,
    "matrices": cmd_matrices,
    "code": cmd_code,
    "scan": cmd_scan,
}


def dispatch(config: RunConfig, settings: Optional[Settings] = None) -> int:
    return COMMANDS[config.command](config, settings or get_settings())
