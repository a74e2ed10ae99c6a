"""Group Actions Service - Frobenius, affine and projective-linear maps on S.

S is the set of elements of F_{q^{nr}} of degree r over F_{q^n}. Three maps
act on it:

- σ^i: α → α^{q^i}
- affine maps α → aα + b with a ≠ 0 and a, b ∈ F_{q^n}
- fractional linear maps [B](α) = (aα + b)/(cα + d) with B ∈ GL(2, q^n)

Orbits are identified by their minimal member handle: an affine set A(α) by
``affine_set_id`` and a projective linear set O(α) by ``pl_set_id``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from goppa_bounds.core.exceptions import (
    DomainError,
    InternalInconsistencyError,
    NotInSError,
    ParameterError,
)
from goppa_bounds.services.fields import FieldTower, Level

logger = logging.getLogger(__name__)


# =============================================================================
# Matrices and projective maps
# =============================================================================


@dataclass(frozen=True)
class Matrix2:
    """A 2×2 matrix (a b / c d) with entries in F_{q^n}."""

    a: int
    b: int
    c: int
    d: int

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def determinant(self, tower: FieldTower) -> int:
        return tower.sub(tower.mul(self.a, self.d), tower.mul(self.b, self.c))

    def times(self, tower: FieldTower, other: "Matrix2") -> "Matrix2":
        """Matrix product self · other."""
        mul, add = tower.mul, tower.add
        return Matrix2(
            a=add(mul(self.a, other.a), mul(self.b, other.c)),
            b=add(mul(self.a, other.b), mul(self.b, other.d)),
            c=add(mul(self.c, other.a), mul(self.d, other.c)),
            d=add(mul(self.c, other.b), mul(self.d, other.d)),
        )

    def scaled(self, tower: FieldTower, factor: int) -> "Matrix2":
        return Matrix2(*(tower.mul(x, factor) for x in self.entries))


def make_matrix(tower: FieldTower, a: int, b: int, c: int, d: int) -> Matrix2:
    """Validated element of GL(2, q^n).

    Raises:
        ParameterError: entries outside F_{q^n} or zero determinant.
    """
    matrix = Matrix2(int(a), int(b), int(c), int(d))
    outside = [x for x in matrix.entries if not tower.in_level(x, Level.F_QN)]
    if outside:
        raise ParameterError(
            "matrix entries must lie in F_q^n",
            detail=f"entries outside the level: {outside}",
        )
    if matrix.determinant(tower) == 0:
        raise ParameterError("matrix is singular", detail=f"entries {matrix.entries}")
    return matrix


@dataclass(frozen=True)
class ProjectiveMap:
    """The class [B] of a matrix in PGL(2, q^n).

    The stored matrix is canonical: the first nonzero entry in the order
    a, b, c, d is 1, so equality of maps is equality of matrices.
    """

    matrix: Matrix2
    tower: FieldTower = field(compare=False, repr=False)

    @classmethod
    def from_matrix(cls, tower: FieldTower, matrix: Matrix2) -> "ProjectiveMap":
        lead = next(x for x in matrix.entries if x != 0)
        return cls(matrix=matrix.scaled(tower, tower.inv(lead)), tower=tower)

    @classmethod
    def from_entries(cls, tower: FieldTower, a: int, b: int, c: int, d: int) -> "ProjectiveMap":
        return cls.from_matrix(tower, make_matrix(tower, a, b, c, d))

    @classmethod
    def identity(cls, tower: FieldTower) -> "ProjectiveMap":
        return cls(Matrix2(1, 0, 0, 1), tower)

    @classmethod
    def inversion(cls, tower: FieldTower) -> "ProjectiveMap":
        """α → 1/α."""
        return cls(Matrix2(0, 1, 1, 0), tower)

    @classmethod
    def affine(cls, tower: FieldTower, a: int, b: int) -> "ProjectiveMap":
        """α → aα + b."""
        return cls.from_entries(tower, a, b, 0, 1)

    @property
    def is_identity(self) -> bool:
        m = self.matrix
        return m.b == 0 and m.c == 0 and m.a == m.d

    def compose(self, other: "ProjectiveMap") -> "ProjectiveMap":
        """[BC]: apply ``other`` first, then ``self``."""
        return ProjectiveMap.from_matrix(self.tower, self.matrix.times(self.tower, other.matrix))

    def power(self, exponent: int) -> "ProjectiveMap":
        if exponent < 0:
            raise ParameterError("negative powers are not supported")
        result = ProjectiveMap.identity(self.tower)
        base = self
        while exponent:
            if exponent & 1:
                result = result.compose(base)
            base = base.compose(base)
            exponent >>= 1
        return result

    @cached_property
    def projective_order(self) -> int:
        """Order D of [B], found by stripping prime factors off |PGL(2, q^n)|."""
        qn = self.tower.params.qn
        order = qn * (qn * qn - 1)
        for prime in sympy.factorint(order):
            prime = int(prime)
            while order % prime == 0 and self.power(order // prime).is_identity:
                order //= prime
        return order

    def apply(self, alpha):
        return pgl_apply(self.tower, self, alpha)


def enumerate_pgl(tower: FieldTower) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Canonical representatives of all q^{3n} − q^n elements of PGL(2, q^n).

    Returns four aligned arrays (a, b, c, d): first (1, b, c, d) with
    d ≠ bc, then (0, 1, c, d) with c ≠ 0.
    """
    field_elements = tower.subfield(Level.F_QN)
    qn = field_elements.size
    b, c, d = (x.ravel() for x in np.meshgrid(field_elements, field_elements, field_elements, indexing="ij"))
    keep = np.asarray(tower.mul(b, c)) != d
    b, c, d = b[keep], c[keep], d[keep]
    a = np.ones_like(b)

    c2, d2 = (x.ravel() for x in np.meshgrid(field_elements[1:], field_elements, indexing="ij"))
    a2, b2 = np.zeros_like(c2), np.ones_like(c2)

    result = tuple(np.concatenate(pair) for pair in ((a, a2), (b, b2), (c, c2), (d, d2)))
    if result[0].size != qn**3 - qn:
        raise InternalInconsistencyError(f"enumerated {result[0].size} maps, expected {qn**3 - qn}")
    return result


# =============================================================================
# Applying maps
# =============================================================================


def require_in_s(tower: FieldTower, alpha: int) -> None:
    """Raise NotInSError unless α has degree r over F_{q^n}."""
    if not tower.in_s(alpha):
        raise NotInSError(int(alpha), int(tower.degree_over(alpha, Level.F_QN)))


def affine_apply(tower: FieldTower, a: int, b: int, alpha):
    """aα + b.

    Raises:
        ParameterError: a = 0 or a, b outside F_{q^n}.
    """
    if a == 0:
        raise ParameterError("affine map needs a ≠ 0")
    if not (tower.in_level(a, Level.F_QN) and tower.in_level(b, Level.F_QN)):
        raise ParameterError("affine coefficients must lie in F_q^n", detail=f"a={a}, b={b}")
    return tower.add(tower.mul(a, alpha), b)


def pgl_apply(tower: FieldTower, m: ProjectiveMap, alpha):
    """[B](α) = (aα + b)/(cα + d).

    Raises:
        DomainError: cα + d = 0 (α is then not in S).
    """
    a, b, c, d = m.matrix.entries
    denominator = tower.add(tower.mul(c, alpha), d)
    if np.any(np.asarray(denominator) == 0):
        raise DomainError("cα + d = 0: the element lies in F_q^n, not in S")
    numerator = tower.add(tower.mul(a, alpha), b)
    return tower.div(numerator, denominator)


# =============================================================================
# Orbits
# =============================================================================


def affine_orbit_array(tower: FieldTower, alpha: int) -> np.ndarray:
    """Sorted members of A(α)."""
    require_in_s(tower, alpha)
    field_elements = tower.subfield(Level.F_QN)
    scaled = np.asarray(tower.mul(field_elements[1:], alpha))
    members = tower.add(scaled[:, np.newaxis], field_elements[np.newaxis, :])
    return np.unique(members)


def pl_orbit_array(tower: FieldTower, alpha: int) -> np.ndarray:
    """Sorted members of O(α)."""
    require_in_s(tower, alpha)
    a, b, c, d = enumerate_pgl(tower)
    numerator = tower.add(tower.mul(a, alpha), b)
    denominator = tower.add(tower.mul(c, alpha), d)
    return np.unique(tower.div(numerator, denominator))


def affine_orbit(tower: FieldTower, alpha: int) -> frozenset[int]:
    """A(α) = {aα + b : a ≠ 0, b ∈ F_{q^n}}."""
    return frozenset(int(x) for x in affine_orbit_array(tower, alpha))


def pl_orbit(tower: FieldTower, alpha: int) -> frozenset[int]:
    """O(α) = {[B](α) : B ∈ GL(2, q^n)}."""
    return frozenset(int(x) for x in pl_orbit_array(tower, alpha))


def affine_set_id(tower: FieldTower, alpha: int) -> int:
    return int(affine_orbit_array(tower, alpha)[0])


def pl_set_id(tower: FieldTower, alpha: int) -> int:
    return int(pl_orbit_array(tower, alpha)[0])


def decompose_pl_set(tower: FieldTower, alpha: int) -> tuple[int, ...]:
    """Affine set ids of A(α), A(1/(α+ξ)) for ξ ∈ F_{q^n} in handle order.

    The q^n + 1 sets are pairwise distinct and together make up O(α).
    """
    require_in_s(tower, alpha)
    field_elements = tower.subfield(Level.F_QN)
    shifted = np.asarray(tower.inv(tower.add(alpha, field_elements)))
    ids = (affine_set_id(tower, alpha),) + tuple(affine_set_id(tower, int(x)) for x in shifted)

    if len(set(ids)) != len(ids):
        raise InternalInconsistencyError(
            "affine sets in the decomposition are not pairwise distinct",
            detail=f"{len(ids) - len(set(ids))} repeats for α={alpha}",
        )
    return ids


def _require_canonical(tower: FieldTower, set_id: int, canonical: int, kind: str) -> None:
    if canonical != set_id:
        raise ParameterError(f"{set_id} is not the id of its {kind}", detail=f"the set's id is {canonical}")


def frobenius_on_affine_set(tower: FieldTower, set_id: int, i: int) -> int:
    """σ^i(A) as an affine set id."""
    _require_canonical(tower, set_id, affine_set_id(tower, set_id), "affine set")
    return affine_set_id(tower, tower.frobenius(set_id, i))


def frobenius_on_pl_set(tower: FieldTower, set_id: int, i: int) -> int:
    """σ^i(O) as a projective linear set id."""
    _require_canonical(tower, set_id, pl_set_id(tower, set_id), "projective linear set")
    return pl_set_id(tower, tower.frobenius(set_id, i))
