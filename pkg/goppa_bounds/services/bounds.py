"""Bounds Service - fixed-set tables and Cauchy–Frobenius orbit counts.

The primary path is table-first: for every subgroup of G = ⟨σ⟩ the number
of affine sets and projective linear sets it fixes is computed from the case
analysis, and the orbit counts follow by Burnside. The four closed-form
branches of the final bound are evaluated separately and must agree with the
table whenever their conditions apply; parameter combinations no branch
covers are labelled ``table-derived``.

Everything here is exact integer arithmetic; no tower is built.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import pandas as pd
import sympy

from goppa_bounds.core.exceptions import InternalInconsistencyError, ParameterError
from goppa_bounds.services.fields import TowerParams

logger = logging.getLogger(__name__)

TABLE_DERIVED = "table-derived"


class SetKind(str, Enum):
    AFFINE = "affine"
    PL = "pl"


# =============================================================================
# Subgroups and case flags
# =============================================================================


@dataclass(frozen=True)
class SubgroupSpec:
    """The subgroup ⟨σ^e⟩ of G, with e = |G| standing for the trivial subgroup."""

    exponent: int
    order: int
    fresh_element_count: int

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def label(self) -> str:
        if self.is_trivial:
            return "1"
        if self.exponent == 1:
            return "⟨σ⟩"
        return f"⟨σ^{self.exponent}⟩"


def subgroup_lattice(n: int, r: int) -> tuple[SubgroupSpec, ...]:
    """Subgroups of the cyclic group ⟨σ⟩ of order nr, smallest first.

    n ≠ r gives 1, ⟨σ^n⟩, ⟨σ^r⟩, ⟨σ⟩; n = r gives 1, ⟨σ^n⟩, ⟨σ⟩.
    """
    group_order = n * r
    exponents = [group_order, n, 1] if n == r else [group_order, n, r, 1]
    specs = []
    for e in exponents:
        order = group_order // math.gcd(e, group_order)
        specs.append(SubgroupSpec(exponent=e, order=order, fresh_element_count=int(sympy.totient(order))))
    if sum(s.fresh_element_count for s in specs) != group_order:
        raise InternalInconsistencyError(f"subgroup element counts do not add up to |G|={group_order}")
    return tuple(specs)


def subgroup_by_exponent(n: int, r: int, exponent: int) -> SubgroupSpec:
    """Look up ⟨σ^e⟩; e = 0 and e = nr both name the trivial subgroup."""
    group_order = n * r
    exponent = exponent % group_order or group_order
    for spec in subgroup_lattice(n, r):
        if spec.exponent == exponent:
            return spec
    raise ParameterError(f"σ^{exponent} does not generate a listed subgroup for n={n}, r={r}")


@dataclass(frozen=True)
class CaseLabel:
    """Divisibility flags for the prime that decides the case (r, or n when n = r)."""

    prime: int
    is_characteristic: bool
    divides_q_minus_1: bool
    divides_qn_minus_1: bool
    divides_q_plus_1: bool
    divides_qn_plus_1: bool
    branch: str

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "r=p": self.is_characteristic,
            "r|q-1": self.divides_q_minus_1,
            "r|q^n-1": self.divides_qn_minus_1,
            "r|q+1": self.divides_q_plus_1,
            "r|q^n+1": self.divides_qn_plus_1,
        }


def case_label(params: TowerParams) -> CaseLabel:
    q, n, r, p = params.q, params.n, params.r, params.p
    prime = r
    qn = q**n
    flags = dict(
        is_characteristic=prime == p,
        divides_q_minus_1=(q - 1) % prime == 0,
        divides_qn_minus_1=(qn - 1) % prime == 0,
        divides_q_plus_1=(q + 1) % prime == 0,
        divides_qn_plus_1=(qn + 1) % prime == 0,
    )
    if flags["divides_q_minus_1"] and not flags["divides_qn_minus_1"]:
        raise InternalInconsistencyError(f"{prime} | q−1 but not q^n−1")
    if n % 2 and flags["divides_q_plus_1"] and not flags["divides_qn_plus_1"]:
        raise InternalInconsistencyError(f"{prime} | q+1 but not q^n+1 for odd n")
    branch = _branch_equal(**flags) if params.equal_degrees else _branch_distinct(**flags)
    return CaseLabel(prime=prime, branch=branch, **flags)


def _branch_equal(
    is_characteristic: bool,
    divides_q_minus_1: bool,
    divides_qn_minus_1: bool,
    divides_q_plus_1: bool,
    divides_qn_plus_1: bool,
) -> str:
    if is_characteristic:
        return "1"
    if divides_qn_minus_1:
        return "2"
    if divides_qn_plus_1:
        return "3"
    return "4"


def _branch_distinct(
    is_characteristic: bool,
    divides_q_minus_1: bool,
    divides_qn_minus_1: bool,
    divides_q_plus_1: bool,
    divides_qn_plus_1: bool,
) -> str:
    if is_characteristic:
        return "1"
    if (
        divides_q_minus_1
        or (divides_qn_minus_1 and not divides_q_minus_1 and divides_q_plus_1)
        or (not divides_qn_minus_1 and divides_qn_plus_1 and divides_q_plus_1)
    ):
        return "2"
    if not divides_qn_minus_1 and divides_qn_plus_1 and not divides_q_plus_1:
        return "3"
    if not divides_qn_minus_1 and not divides_qn_plus_1:
        return "4"
    return TABLE_DERIVED


# =============================================================================
# Set counts
# =============================================================================


def _exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise InternalInconsistencyError(
            f"{what} is not integral",
            detail=f"{numerator} / {denominator} leaves remainder {remainder}",
        )
    return quotient


def _params(q: int, n: int, r: int) -> TowerParams:
    return TowerParams.from_q(q, n, r)


def s_size(q: int, n: int, r: int) -> int:
    """|S| = q^{nr} − q^n (q^{n²} − q^n when n = r)."""
    return _params(q, n, r).s_size


def affine_set_count(q: int, n: int, r: int) -> int:
    """|𝔸| = |S| / (q^n(q^n − 1))."""
    qn = q**n
    return _exact_div(s_size(q, n, r), qn * (qn - 1), "|𝔸|")


def pl_set_count(q: int, n: int, r: int) -> int:
    """|𝕆| = |S| / (q^{3n} − q^n)."""
    qn = q**n
    return _exact_div(s_size(q, n, r), qn**3 - qn, "|𝕆|")


# =============================================================================
# Fixed counts per subgroup
# =============================================================================


def affine_fixed_count(q: int, n: int, r: int, subgroup: SubgroupSpec) -> int:
    """Number of affine sets fixed by ⟨σ^e⟩."""
    params = _params(q, n, r)
    p, qn = params.p, params.qn
    _check_in_lattice(params, subgroup)
    if subgroup.is_trivial:
        return affine_set_count(q, n, r)

    if params.equal_degrees:
        # ⟨σ^n⟩ and ⟨σ⟩ fix the same affine sets
        if n == p:
            return 1
        return n - 1 if (qn - 1) % n == 0 else 0

    if subgroup.exponent == n:
        if r == p:
            return 1
        return r - 1 if (qn - 1) % r == 0 else 0
    if subgroup.exponent == r:
        return _exact_div(q ** (r - 1) - 1, q - 1, "(q^{r-1}-1)/(q-1)")
    if r == p:
        return 1
    return r - 1 if (q - 1) % r == 0 else 0


def pl_fixed_count(q: int, n: int, r: int, subgroup: SubgroupSpec) -> int:
    """Number of projective linear sets fixed by ⟨σ^e⟩."""
    params = _params(q, n, r)
    p, qn = params.p, params.qn
    _check_in_lattice(params, subgroup)
    if subgroup.is_trivial:
        return pl_set_count(q, n, r)

    if params.equal_degrees:
        if n == p:
            return 1
        if (qn - 1) % n == 0 or (qn + 1) % n == 0:
            return (n - 1) // 2
        return 0

    half = (r - 1) // 2
    if subgroup.exponent == n:
        if r == p:
            return 1
        if (qn - 1) % r == 0 or (qn + 1) % r == 0:
            return half
        return 0
    if subgroup.exponent == r:
        return _exact_div(q ** (r - 1) - 1, q * q - 1, "(q^{r-1}-1)/(q^2-1)")

    if r == p:
        return 1
    r_q_minus = (q - 1) % r == 0
    r_qn_minus = (qn - 1) % r == 0
    r_q_plus = (q + 1) % r == 0
    if r_q_minus or (r_qn_minus and r_q_plus) or (not r_qn_minus and r_q_plus):
        return half
    return 0


def _check_in_lattice(params: TowerParams, subgroup: SubgroupSpec) -> None:
    if subgroup not in subgroup_lattice(params.n, params.r):
        raise ParameterError(
            f"{subgroup.label} is not a subgroup of ⟨σ⟩ for n={params.n}, r={params.r}"
        )


# =============================================================================
# Burnside aggregation
# =============================================================================


def burnside(
    fresh_counts: Sequence[int],
    fixed_counts: Sequence[int],
    group_order: Optional[int] = None,
) -> int:
    """(1/|G|) Σ fresh · fixed, exactly.

    Raises:
        InternalInconsistencyError: the sum is not divisible by |G|, or the
            fresh counts do not add up to |G|.
    """
    if len(fresh_counts) != len(fixed_counts):
        raise ParameterError("fresh and fixed counts must be aligned")
    total_elements = sum(fresh_counts)
    group_order = total_elements if group_order is None else group_order
    if total_elements != group_order:
        raise InternalInconsistencyError(
            f"fresh element counts sum to {total_elements}, group has {group_order} elements"
        )
    weighted = sum(f * x for f, x in zip(fresh_counts, fixed_counts))
    return _exact_div(weighted, group_order, "Burnside orbit count")


# =============================================================================
# Tables and reports
# =============================================================================


@dataclass(frozen=True)
class FixedCountRow:
    subgroup: SubgroupSpec
    fixed_affine: int
    fixed_pl: int


@dataclass(frozen=True)
class FixedCountTable:
    rows: tuple[FixedCountRow, ...]
    rationale: CaseLabel

    def fixed(self, kind: SetKind) -> list[int]:
        if kind is SetKind.AFFINE:
            return [row.fixed_affine for row in self.rows]
        return [row.fixed_pl for row in self.rows]

    @property
    def fresh_counts(self) -> list[int]:
        return [row.subgroup.fresh_element_count for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        """Rows laid out like the printed fixed-set tables."""
        return pd.DataFrame(
            [
                {
                    "subgroup": row.subgroup.label,
                    "order": row.subgroup.order,
                    "new elements": row.subgroup.fresh_element_count,
                    "fixed affine sets": row.fixed_affine,
                    "fixed PL sets": row.fixed_pl,
                }
                for row in self.rows
            ]
        )


def fixed_count_table(q: int, n: int, r: int) -> FixedCountTable:
    params = _params(q, n, r)
    rows = tuple(
        FixedCountRow(
            subgroup=spec,
            fixed_affine=affine_fixed_count(q, n, r, spec),
            fixed_pl=pl_fixed_count(q, n, r, spec),
        )
        for spec in subgroup_lattice(n, r)
    )
    table = FixedCountTable(rows=rows, rationale=case_label(params))
    pl_total = pl_set_count(q, n, r)
    for row in rows:
        if row.fixed_pl > pl_total or row.fixed_pl < 0 or row.fixed_affine < 0:
            raise InternalInconsistencyError(f"fixed count out of range for {row.subgroup.label}")
    return table


def closed_form_extended_bound(q: int, n: int, r: int) -> Optional[int]:
    """Per-branch closed forms; None when no branch covers the flags."""
    params = _params(q, n, r)
    label = case_label(params)
    pl_sets = pl_set_count(q, n, r)

    if params.equal_degrees:
        match label.branch:
            case "1":
                extra = n * n - 1
            case "2":
                extra = _exact_div((n * n - 1) * (n - 1), 2, "(n²−1)(n−1)/2")
            case "3":
                extra = _exact_div((n + 1) * (n - 1) ** 2, 2, "(n+1)(n−1)²/2")
            case _:
                extra = 0
        return _exact_div(pl_sets + extra, n * n, "closed-form bound (n = r)")

    sigma_r_part = (n - 1) * _exact_div(q ** (r - 1) - 1, q * q - 1, "(q^{r-1}-1)/(q²-1)")
    match label.branch:
        case "1":
            extra = n * (r - 1)
        case "2":
            extra = _exact_div(n * (r - 1) ** 2, 2, "n(r−1)²/2")
        case "3":
            extra = _exact_div((r - 1) ** 2, 2, "(r−1)²/2")
        case "4":
            extra = 0
        case _:
            return None
    return _exact_div(pl_sets + extra + sigma_r_part, n * r, "closed-form bound (n ≠ r)")


@dataclass(frozen=True)
class BoundReport:
    params: TowerParams
    s_size: int
    affine_set_count: int
    pl_set_count: int
    table: FixedCountTable
    affine_orbit_bound: int
    extended_bound: int
    closed_form_bound: Optional[int]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def branch(self) -> str:
        return self.table.rationale.branch


def affine_orbit_bound(q: int, n: int, r: int) -> int:
    """Number of F·G orbits on S, by Burnside over the affine sets."""
    table = fixed_count_table(q, n, r)
    return burnside(table.fresh_counts, table.fixed(SetKind.AFFINE), n * r)


def extended_bound(q: int, n: int, r: int) -> BoundReport:
    """Upper bound on extended irreducible Goppa codes of degree r and length q^n + 1.

    Raises:
        InternalInconsistencyError: table-derived and closed-form values differ.
    """
    params = _params(q, n, r)
    table = fixed_count_table(q, n, r)
    group_order = n * r
    extended = burnside(table.fresh_counts, table.fixed(SetKind.PL), group_order)
    affine = burnside(table.fresh_counts, table.fixed(SetKind.AFFINE), group_order)

    closed = closed_form_extended_bound(q, n, r)
    if closed is not None and closed != extended:
        raise InternalInconsistencyError(
            f"branch {table.rationale.branch} gives {closed}, fixed-count table gives {extended}",
            detail=f"q={q} n={n} r={r}",
        )

    warnings = []
    if params.outside_validated_range:
        warnings.append("n = 2 is outside the validated parameter range; confirm with the oracle")
    if closed is None:
        warnings.append("no closed-form branch covers these flags; value is table-derived")

    report = BoundReport(
        params=params,
        s_size=params.s_size,
        affine_set_count=affine_set_count(q, n, r),
        pl_set_count=pl_set_count(q, n, r),
        table=table,
        affine_orbit_bound=affine,
        extended_bound=extended,
        closed_form_bound=closed,
        warnings=tuple(warnings),
    )
    if report.extended_bound > report.pl_set_count or report.affine_orbit_bound > report.affine_set_count:
        raise InternalInconsistencyError("orbit count exceeds the number of sets")
    logger.debug(f"Bound q={q} n={n} r={r}: extended={extended}, affine={affine}, branch={report.branch}")
    return report


# =============================================================================
# Parameter scan
# =============================================================================


SCAN_COLUMNS = [
    "q",
    "n",
    "r",
    "branch",
    "extended_bound",
    "affine_orbit_bound",
    "closed_form",
    "integral",
    "agrees",
]


def scan_parameters(field_sizes: Iterable[int], prime_limit: int = 13) -> pd.DataFrame:
    """Table-derived bounds for every (q, n, r) with primes n ≤ limit and 3 ≤ r ≤ limit.

    Each row records integrality of both Burnside sums and agreement with the
    closed-form branch when one applies.
    """
    primes = [int(x) for x in sympy.primerange(2, prime_limit + 1)]
    rows = []
    for q in field_sizes:
        for n in primes:
            for r in primes:
                if r < 3:
                    continue
                rows.append(_scan_row(q, n, r))
    # object columns keep bounds exact beyond int64
    frame = pd.DataFrame(rows, columns=SCAN_COLUMNS, dtype=object)
    non_integral = sum(1 for row in rows if not row["integral"])
    disagreements = sum(1 for row in rows if row["agrees"] is False)
    logger.info(f"Scanned {len(rows)} triples: {non_integral} non-integral, {disagreements} branch disagreements")
    return frame


def _scan_row(q: int, n: int, r: int) -> dict:
    table = fixed_count_table(q, n, r)
    weighted_pl = sum(f * x for f, x in zip(table.fresh_counts, table.fixed(SetKind.PL)))
    weighted_affine = sum(f * x for f, x in zip(table.fresh_counts, table.fixed(SetKind.AFFINE)))
    group_order = n * r
    integral = weighted_pl % group_order == 0 and weighted_affine % group_order == 0
    extended = weighted_pl // group_order if integral else None
    try:
        closed = closed_form_extended_bound(q, n, r)
    except InternalInconsistencyError:
        closed = None
        integral = False
    return {
        "q": q,
        "n": n,
        "r": r,
        "branch": table.rationale.branch,
        "extended_bound": extended,
        "affine_orbit_bound": weighted_affine // group_order if integral else None,
        "closed_form": closed,
        "integral": integral,
        "agrees": None if closed is None else closed == extended,
    }
