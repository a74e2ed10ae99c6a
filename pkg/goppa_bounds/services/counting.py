"""Counting Service - orders, cyclotomic profiles, matrix counts and F_s roots.

Closed forms and their brute-force counterparts live side by side:

- ``cyclotomic_profile`` / ``matrix_order_count``: the number of matrices of
  order k in GL(2, Q) with irreducible minimal polynomial, from the splitting
  of the k-th cyclotomic polynomial over F_Q
- ``enumerate_matrices_of_order``: the same count by exhaustion over all Q^4
  quadruples
- ``fs_factor_degrees`` / ``fs_factor_degrees_observed``: predicted and
  observed irreducible factor degrees of F_s(x) = c x^{Q^s+1} + d x^{Q^s} − a x − b
- ``fs_roots_in_S``: roots of F_s lying in S, by direct evaluation
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import galois
import numpy as np
import sympy

from goppa_bounds.core.config import Settings, get_settings
from goppa_bounds.core.exceptions import (
    CapacityError,
    InternalInconsistencyError,
    ParameterError,
    UnsupportedCaseError,
)
from goppa_bounds.services.actions import ProjectiveMap, enumerate_pgl
from goppa_bounds.services.fields import FieldTower, Level, split_prime_power

logger = logging.getLogger(__name__)


# =============================================================================
# Integer tools
# =============================================================================


def euler_phi(k: int) -> int:
    if k < 1:
        raise ParameterError(f"totient needs k ≥ 1, got {k}")
    return int(sympy.totient(k))


def multiplicative_order(field_size: int, k: int) -> int:
    """Least d ≥ 1 with Q^d ≡ 1 (mod k).

    Raises:
        ParameterError: gcd(Q, k) ≠ 1 or k < 1.
    """
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    if math.gcd(field_size, k) != 1:
        raise ParameterError(f"gcd(Q={field_size}, k={k}) ≠ 1")
    if k == 1:
        return 1
    return int(sympy.n_order(field_size % k, k))


# =============================================================================
# Cyclotomic profile and matrix counts
# =============================================================================


@dataclass(frozen=True)
class CyclotomicProfile:
    """How x^k − 1's primitive part splits over F_Q."""

    k: int
    field_size: int
    d: int
    factor_count: int
    quadratic_count: int

    @property
    def phi(self) -> int:
        return self.factor_count * self.d


def cyclotomic_profile(field_size: int, k: int) -> CyclotomicProfile:
    """Splitting of the k-th cyclotomic polynomial over F_Q.

    Raises:
        UnsupportedCaseError: the characteristic divides k.
    """
    p, _ = split_prime_power(field_size)
    if k % p == 0:
        raise UnsupportedCaseError(
            f"characteristic {p} divides k={k}",
            detail="the cyclotomic splitting count needs p ∤ k",
        )
    d = multiplicative_order(field_size, k)
    phi = euler_phi(k)
    if phi % d:
        raise InternalInconsistencyError(f"order {d} of {field_size} mod {k} does not divide φ(k)={phi}")
    return CyclotomicProfile(
        k=k,
        field_size=field_size,
        d=d,
        factor_count=phi // d,
        quadratic_count=phi // 2 if d == 2 else 0,
    )


@dataclass(frozen=True)
class MatrixOrderCount:
    """Matrices of order k in GL(2, Q) with irreducible minimal polynomial."""

    k: int
    field_size: int
    conjugacy_class_count: int
    class_size: int
    total: int


@dataclass(frozen=True)
class HypothesesNotMet:
    """The closed-form count does not apply; ``reasons`` says which hypothesis failed."""

    k: int
    field_size: int
    reasons: tuple[str, ...]


MatrixCountOutcome = Union[MatrixOrderCount, HypothesesNotMet]


def matrix_order_count(field_size: int, k: int) -> MatrixCountOutcome:
    """φ(k)·Q(Q−1)/2 when gcd(Q, k) = 1, k | Q+1 and k ∤ Q−1."""
    split_prime_power(field_size)
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")

    reasons = []
    if math.gcd(field_size, k) != 1:
        reasons.append(f"gcd(Q, k) = {math.gcd(field_size, k)}")
    if (field_size + 1) % k:
        reasons.append(f"k ∤ Q+1 ({k} ∤ {field_size + 1})")
    if (field_size - 1) % k == 0:
        reasons.append(f"k | Q−1 ({k} | {field_size - 1})")
    if reasons:
        return HypothesesNotMet(k=k, field_size=field_size, reasons=tuple(reasons))

    profile = cyclotomic_profile(field_size, k)
    class_size = field_size * (field_size - 1)
    total = profile.quadratic_count * class_size
    if total != euler_phi(k) * field_size * (field_size - 1) // 2:
        raise InternalInconsistencyError(f"matrix count {total} disagrees with φ(k)Q(Q−1)/2")
    return MatrixOrderCount(
        k=k,
        field_size=field_size,
        conjugacy_class_count=profile.quadratic_count,
        class_size=class_size,
        total=total,
    )


def enumerate_matrices_of_order(field_size: int, k: int, settings: Optional[Settings] = None) -> int:
    """Brute-force count of A ∈ GL(2, Q) of order k with irreducible characteristic polynomial.

    Runs over all Q^4 quadruples, one slab of Q^3 per value of the first entry.

    Raises:
        CapacityError: Q above the configured matrix budget.
    """
    settings = settings or get_settings()
    split_prime_power(field_size)
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}")
    budget = settings.matrix_budget_order
    if field_size > budget:
        raise CapacityError(required=field_size**4, budget=budget**4, what="matrix quadruples")

    field = galois.GF(field_size)
    values = np.arange(field_size, dtype=np.int64)
    b_int, c_int, d_int = (x.ravel() for x in np.meshgrid(values, values, values, indexing="ij"))
    b, c, d = field(b_int), field(c_int), field(d_int)
    primes = [int(x) for x in sympy.primefactors(k)]

    total = 0
    for a_value in values:
        a = field(np.full(b.shape, a_value, dtype=np.int64))
        det = a * d - b * c
        trace = a + d
        keep = det != 0
        for lam in field.elements:
            keep &= (lam * lam - trace * lam + det) != 0
        entries = (a[keep], b[keep], c[keep], d[keep])
        if entries[0].size == 0:
            continue
        exact = _is_identity(_matrix_power(field, entries, k))
        for prime in primes:
            exact &= ~_is_identity(_matrix_power(field, entries, k // prime))
        total += int(np.count_nonzero(exact))

    logger.info(f"Enumerated GL(2,{field_size}): {total} matrices of order {k} with irreducible m_A")
    return total


def _matrix_power(field, entries, exponent: int):
    one, zero = field.Ones(entries[0].shape), field.Zeros(entries[0].shape)
    result = (one, zero, zero, one)
    base = entries
    while exponent:
        if exponent & 1:
            result = _matrix_product(result, base)
        base = _matrix_product(base, base)
        exponent >>= 1
    return result


def _matrix_product(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def _is_identity(entries) -> np.ndarray:
    a, b, c, d = entries
    return (a == 1) & (b == 0) & (c == 0) & (d == 1)


# =============================================================================
# F_s(x): predicted degrees, factorization and roots
# =============================================================================


@dataclass(frozen=True)
class FsDegreePrediction:
    """Irreducible factor degrees F_s may have, given the projective order D."""

    projective_order: int
    s: int
    permitted_degrees: frozenset[int]

    @property
    def nonlinear_degrees(self) -> frozenset[int]:
        return frozenset(x for x in self.permitted_degrees if x > 2)


def fs_factor_degrees(m: ProjectiveMap, s: int) -> FsDegreePrediction:
    """Permitted degrees {Ds} ∪ {Dk : s = kj, k < s, gcd(j, D) = 1} ∪ {1, 2}.

    Raises:
        ParameterError: m is the identity class or s < 1.
    """
    if m.is_identity:
        raise ParameterError("F_s is undefined for the identity map")
    if s < 1:
        raise ParameterError(f"s must be positive, got {s}")
    order = m.projective_order
    degrees = {order * s, 1, 2}
    for k in sympy.divisors(s):
        if k < s and math.gcd(s // k, order) == 1:
            degrees.add(order * k)
    return FsDegreePrediction(projective_order=order, s=s, permitted_degrees=frozenset(degrees))


def _require_entries_in(m: ProjectiveMap, level: Level) -> None:
    outside = [x for x in m.matrix.entries if not m.tower.in_level(x, level)]
    if outside:
        raise ParameterError(
            f"map entries must lie in {level.value}",
            detail=f"entries outside the level: {outside}",
        )


def fs_roots(tower: FieldTower, m: ProjectiveMap, s: int, level: Level = Level.F_QN) -> np.ndarray:
    """Sorted roots in S of c x^{Q^s+1} + d x^{Q^s} − a x − b, Q the level's order.

    Raises:
        ParameterError: identity map, s < 1, entries outside the level.
        CapacityError: tower above the oracle budget.
    """
    if m.is_identity:
        raise ParameterError("F_s is undefined for the identity map")
    if s < 1:
        raise ParameterError(f"s must be positive, got {s}")
    _require_entries_in(m, level)
    settings = get_settings()
    if tower.order > settings.oracle_budget:
        raise CapacityError(required=tower.order, budget=settings.oracle_budget)

    a, b, c, d = m.matrix.entries
    shift = tower.params.level_degree(level) * s
    roots = []
    for start in range(0, tower.order, settings.chunk_size):
        x = np.arange(start, min(start + settings.chunk_size, tower.order), dtype=np.int64)
        xq = np.asarray(tower.frobenius(x, shift))
        value = tower.add(
            tower.add(tower.mul(c, tower.mul(x, xq)), tower.mul(d, xq)),
            tower.neg(tower.add(tower.mul(a, x), b)),
        )
        hits = x[(np.asarray(value) == 0) & np.asarray(tower.in_s(x))]
        roots.append(hits)
    return np.concatenate(roots)


def fs_roots_in_S(tower: FieldTower, m: ProjectiveMap, s: int, level: Level = Level.F_QN) -> int:
    """Number of roots of F_s in S; never above Q^s + 1."""
    count = int(fs_roots(tower, m, s, level).size)
    bound = tower.params.level_order(level) ** s + 1
    if count > bound:
        raise InternalInconsistencyError(f"F_s has {count} roots in S, degree is only {bound}")
    return count


def fs_root_union(tower: FieldTower, maps: list[ProjectiveMap], s: int, level: Level = Level.F_QN) -> np.ndarray:
    """Distinct elements of S that are roots of F_s for at least one map."""
    if not maps:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.concatenate([fs_roots(tower, m, s, level) for m in maps]))


def has_irreducible_characteristic_polynomial(m: ProjectiveMap, level: Level = Level.F_QN) -> bool:
    """x² − (a+d)x + (ad − bc) has no root in the level (scaling-invariant)."""
    tower = m.tower
    a, _, _, d = m.matrix.entries
    trace = tower.add(a, d)
    det = m.matrix.determinant(tower)
    lam = tower.subfield(level)
    value = tower.add(tower.sub(tower.mul(lam, lam), tower.mul(trace, lam)), det)
    return not bool(np.any(np.asarray(value) == 0))


def maps_of_order(tower: FieldTower, order: int, irreducible_only: bool = True) -> list[ProjectiveMap]:
    """All elements of PGL(2, q^n) of the given projective order."""
    found = []
    for a, b, c, d in zip(*enumerate_pgl(tower)):
        m = ProjectiveMap.from_entries(tower, int(a), int(b), int(c), int(d))
        if m.projective_order != order:
            continue
        if irreducible_only and not has_irreducible_characteristic_polynomial(m):
            continue
        found.append(m)
    return found


def fs_factor_degrees_observed(
    tower: FieldTower, m: ProjectiveMap, s: int, level: Level = Level.F_QN
) -> tuple[int, ...]:
    """Degrees (with multiplicity, ascending) of the irreducible factors of F_s.

    F_s is moved into an isomorphic ``galois`` copy of the level and factored
    there; the isomorphism sends the copy's generator to a root of its
    modulus inside the tower.
    """
    if m.is_identity:
        raise ParameterError("F_s is undefined for the identity map")
    _require_entries_in(m, level)
    field, to_copy = level_isomorphism(tower, level)

    top = tower.params.level_order(level) ** s
    coefficients = field.Zeros(top + 2)
    a, b, c, d = m.matrix.entries
    # descending: x^{top+1}, x^{top}, ..., x, 1
    coefficients[0] = to_copy[c]
    coefficients[1] = to_copy[d]
    coefficients[top] = to_copy[tower.neg(a)]
    coefficients[top + 1] = to_copy[tower.neg(b)]

    leading = coefficients[np.flatnonzero(coefficients.view(np.ndarray))[0]]
    poly = galois.Poly(coefficients / leading)
    factors, multiplicities = poly.factors()
    degrees = [f.degree for f, mult in zip(factors, multiplicities) for _ in range(mult)]
    return tuple(sorted(degrees))


def level_isomorphism(tower: FieldTower, level: Level) -> tuple[type[galois.FieldArray], dict[int, int]]:
    """A ``galois`` field isomorphic to the level and a handle → copy map."""
    params = tower.params
    p = params.p
    width = params.t * params.level_degree(level)
    elements = tower.subfield(level)
    if width == 1:
        return galois.GF(p), {int(h): int(h) for h in elements}

    field = galois.GF(p**width, irreducible_poly=galois.irreducible_poly(p, width, method="min"))
    # root of the copy's modulus among the level's elements, by Horner
    value = np.zeros_like(elements)
    for coefficient in field.irreducible_poly.coeffs:
        value = np.asarray(tower.add(tower.mul(value, elements), int(coefficient)))
    root = int(elements[np.flatnonzero(value == 0)[0]])

    powers = [1]
    for _ in range(width - 1):
        powers.append(tower.mul(powers[-1], root))
    copies = np.arange(p**width, dtype=np.int64)
    digits = np.stack([(copies // p**i) % p for i in range(width)], axis=1)
    images = np.zeros(copies.size, dtype=np.int64)
    for i, power in enumerate(powers):
        images = np.asarray(tower.add(images, tower.mul(digits[:, i], power)))

    mapping = {int(h): int(v) for h, v in zip(images, copies)}
    if len(mapping) != elements.size or set(mapping) != {int(h) for h in elements}:
        raise InternalInconsistencyError(f"isomorphism onto {level.value} is not a bijection")
    return field, mapping
