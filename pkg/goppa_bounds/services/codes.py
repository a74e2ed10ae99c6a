"""Codes Service - irreducible Goppa codes C(α) and their extensions.

C(α) is the set of words c ∈ F_q^{q^n}, indexed by the locus F_{q^n} in handle
order, with Σ c_i/(α − ζ_i) = 0. The Goppa polynomial itself is never formed:
membership is tested at α and its conjugates.

Parity rows are the F_p digits of the column values, so for t > 1 the F_q
unknowns are split over the F_p-basis {1, w, ..., w^{t-1}} of F_q and the
matrix has t columns per locus position. Kernels and ranks come from
``galois`` linear algebra over GF(p).
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Literal, Optional

import galois
import numpy as np

from goppa_bounds.core.exceptions import (
    InternalInconsistencyError,
    ParameterError,
)
from goppa_bounds.services.actions import affine_apply, require_in_s
from goppa_bounds.services.fields import FieldTower, Level, to_digits

logger = logging.getLogger(__name__)

# Largest codeword count enumerated for minimum distances and span checks.
SPAN_LIMIT = 1 << 16


# =============================================================================
# Locus and F_q coordinates
# =============================================================================


@dataclass(frozen=True)
class CodeLocus:
    """L = (ζ_0, ..., ζ_{q^n - 1}), the elements of F_{q^n} in handle order."""

    elements: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, tower: FieldTower) -> "CodeLocus":
        return cls(tower.subfield(Level.F_QN))

    def __len__(self) -> int:
        return int(self.elements.size)

    def index_of(self, handles: np.ndarray) -> np.ndarray:
        handles = np.asarray(handles, dtype=np.int64)
        positions = np.minimum(np.searchsorted(self.elements, handles), self.elements.size - 1)
        if np.any(self.elements[positions] != handles):
            raise ParameterError("handle outside the code locus")
        return positions


class FqCoordinates:
    """F_q elements as tower handles and as F_p vectors over {1, w, ..., w^{t-1}}."""

    def __init__(self, tower: FieldTower):
        params = tower.params
        self.p, self.t = params.p, params.t
        w = tower.pow(tower.primitive_element, (tower.order - 1) // (params.q - 1))
        self.basis = np.array([tower.pow(w, k) for k in range(self.t)], dtype=np.int64)

        vectors = np.array(list(itertools.product(range(self.p), repeat=self.t)), dtype=np.int64)
        handles = np.zeros(len(vectors), dtype=np.int64)
        for k in range(self.t):
            handles = tower.add(handles, tower.mul(vectors[:, k], self.basis[k]))
        order = np.argsort(handles)
        self.handles = np.asarray(handles)[order]
        self.vectors = vectors[order]
        if not np.array_equal(self.handles, tower.subfield(Level.F_Q)):
            raise InternalInconsistencyError("F_q coordinates do not cover the F_q level")

    def to_vectors(self, word: np.ndarray) -> np.ndarray:
        """Shape (length, t) F_p coordinates of an F_q word."""
        word = np.asarray(word, dtype=np.int64)
        positions = np.searchsorted(self.handles, word)
        positions = np.minimum(positions, self.handles.size - 1)
        if np.any(self.handles[positions] != word):
            raise ParameterError("word has entries outside F_q")
        return self.vectors[positions]

    def from_vectors(self, tower: FieldTower, vectors: np.ndarray) -> np.ndarray:
        """F_q handles from (..., t) F_p coordinates."""
        vectors = np.asarray(vectors, dtype=np.int64)
        result = np.zeros(vectors.shape[:-1], dtype=np.int64)
        for k in range(self.t):
            result = tower.add(result, tower.mul(vectors[..., k], int(self.basis[k])))
        return np.asarray(result, dtype=np.int64)


# =============================================================================
# Goppa codes
# =============================================================================


@dataclass
class GoppaCode:
    """C(α) with its parity rows and an F_q-basis of the kernel."""

    tower: FieldTower = field(repr=False)
    alpha: int
    locus: CodeLocus = field(repr=False)
    column_values: np.ndarray = field(repr=False)
    parity_rows: np.ndarray = field(repr=False)
    rank: int
    dimension: int
    basis: np.ndarray = field(repr=False)
    coordinates: FqCoordinates = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.locus)

    def contains(self, word: np.ndarray) -> bool:
        """Kernel membership through the F_p parity rows."""
        word = self._check_word(word)
        digits = self.coordinates.to_vectors(word).reshape(-1)
        return not np.any((self.parity_rows @ digits) % self.tower.params.p)

    def syndrome(self, word: np.ndarray) -> int:
        """Σ c_i/(α − ζ_i) as a handle."""
        word = self._check_word(word)
        return self.tower.sum(self.tower.mul(word, self.column_values))

    def combination(self, coefficients: np.ndarray) -> np.ndarray:
        """Σ_j a_j · basis_j for F_q coefficients a (shape (..., dimension))."""
        coefficients = np.asarray(coefficients, dtype=np.int64)
        words = np.zeros(coefficients.shape[:-1] + (self.length,), dtype=np.int64)
        for j in range(self.dimension):
            term = self.tower.mul(coefficients[..., j, np.newaxis], self.basis[j])
            words = np.asarray(self.tower.add(words, term), dtype=np.int64)
        return words

    def codewords(self, limit: int = SPAN_LIMIT) -> Optional[np.ndarray]:
        """All q^dimension codewords, or None above ``limit``."""
        q = self.tower.params.q
        if q**self.dimension > limit:
            return None
        if self.dimension == 0:
            return np.zeros((1, self.length), dtype=np.int64)
        field_elements = self.coordinates.handles
        coefficients = np.array(list(itertools.product(field_elements, repeat=self.dimension)), dtype=np.int64)
        return self.combination(coefficients)

    def _check_word(self, word: np.ndarray) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            raise ParameterError(f"word length {word.size} differs from code length {self.length}")
        return word


def parity_check(tower: FieldTower, alpha: int) -> GoppaCode:
    """Build C(α) from H(α) = (1/(α − ζ_0), ..., 1/(α − ζ_{q^n-1})).

    Raises:
        NotInSError: α does not have degree r over F_{q^n}.
    """
    require_in_s(tower, alpha)
    params = tower.params
    locus = CodeLocus.of(tower)
    coordinates = FqCoordinates(tower)
    columns = np.asarray(tower.inv(tower.sub(alpha, locus.elements)), dtype=np.int64)

    # column (i, k) holds the F_p digits of w^k / (α − ζ_i)
    scaled = np.asarray(tower.mul(columns[:, np.newaxis], coordinates.basis[np.newaxis, :]), dtype=np.int64)
    parity_rows = to_digits(scaled.reshape(-1), params.p, params.degree).T

    gf = galois.GF(params.p)
    matrix = gf(parity_rows % params.p)
    rank = int(np.linalg.matrix_rank(matrix))
    unknowns = parity_rows.shape[1]
    nullity = unknowns - rank
    if nullity % params.t:
        raise InternalInconsistencyError(f"F_p kernel dimension {nullity} is not a multiple of t={params.t}")

    kernel = np.zeros((0, unknowns), dtype=np.int64)
    if nullity:
        kernel = np.asarray(matrix.null_space().view(np.ndarray), dtype=np.int64)
    if kernel.shape[0] != nullity:
        raise InternalInconsistencyError("kernel size disagrees with the rank")
    words = coordinates.from_vectors(tower, kernel.reshape(nullity, len(locus), params.t))
    basis = _fq_basis(tower, coordinates, words, nullity // params.t)

    code = GoppaCode(
        tower=tower,
        alpha=int(alpha),
        locus=locus,
        column_values=columns,
        parity_rows=parity_rows,
        rank=rank,
        dimension=nullity // params.t,
        basis=basis,
        coordinates=coordinates,
    )
    if code.dimension < code.length - params.extension_degree:
        raise InternalInconsistencyError(
            f"dimension {code.dimension} below q^n − nr = {code.length - params.extension_degree}"
        )
    logger.debug(f"C({alpha}): length={code.length} dimension={code.dimension}")
    return code


def _fq_basis(tower: FieldTower, coordinates: FqCoordinates, words: np.ndarray, dimension: int) -> np.ndarray:
    """Pick F_q-independent words out of an F_p-spanning set of an F_q-space."""
    if coordinates.t == 1:
        return words
    gf = galois.GF(coordinates.p)
    chosen: list[np.ndarray] = []
    span_rows: list[np.ndarray] = []
    for word in words:
        candidate = coordinates.to_vectors(word).reshape(-1)
        if span_rows and np.linalg.matrix_rank(gf(np.vstack(span_rows + [candidate]))) == len(span_rows):
            continue
        chosen.append(word)
        for k in range(coordinates.t):
            scaled = np.asarray(tower.mul(word, int(coordinates.basis[k])), dtype=np.int64)
            span_rows.append(coordinates.to_vectors(scaled).reshape(-1))
        if len(chosen) == dimension:
            break
    if len(chosen) != dimension:
        raise InternalInconsistencyError(f"found {len(chosen)} of {dimension} F_q-basis words")
    return np.array(chosen, dtype=np.int64).reshape(dimension, -1)


def syndrome_check(tower: FieldTower, word: np.ndarray, alpha: int) -> bool:
    """Σ c_i/(β − ζ_i) = 0 for every conjugate β = α^{Q^j}, j < r, Q = q^n.

    Raises:
        ParameterError: word length is not q^n or entries lie outside F_q.
    """
    require_in_s(tower, alpha)
    params = tower.params
    locus = CodeLocus.of(tower)
    word = np.asarray(word, dtype=np.int64)
    if word.shape != (len(locus),):
        raise ParameterError(f"word length {word.size} differs from code length {len(locus)}")
    if not np.all(tower.in_level(word, Level.F_Q)):
        raise ParameterError("word has entries outside F_q")

    for j in range(params.r):
        conjugate = tower.frobenius(alpha, params.n * j)
        columns = tower.inv(tower.sub(conjugate, locus.elements))
        if tower.sum(tower.mul(word, columns)) != 0:
            return False
    return True


def minimum_distance(code: GoppaCode, limit: int = SPAN_LIMIT) -> Optional[int]:
    """Smallest nonzero weight by exhaustion; None above ``limit`` codewords or for the zero code."""
    if code.dimension == 0:
        return None
    words = code.codewords(limit)
    if words is None:
        return None
    weights = np.count_nonzero(words, axis=1)
    return int(weights[weights > 0].min())


# =============================================================================
# Extended codes
# =============================================================================


@dataclass
class ExtendedGoppaCode:
    """C(α) with an overall coordinate making every coordinate sum zero."""

    code: GoppaCode

    @property
    def length(self) -> int:
        return self.code.length + 1

    @property
    def dimension(self) -> int:
        return self.code.dimension

    @cached_property
    def basis(self) -> np.ndarray:
        return np.array([self.extend_word(word) for word in self.code.basis], dtype=np.int64).reshape(
            self.dimension, self.length
        )

    def extend_word(self, word: np.ndarray) -> np.ndarray:
        tower = self.code.tower
        return np.append(np.asarray(word, dtype=np.int64), tower.neg(tower.sum(word)))

    def contains(self, word: np.ndarray) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if word.shape != (self.length,):
            raise ParameterError(f"word length {word.size} differs from code length {self.length}")
        return self.code.contains(word[:-1]) and self.code.tower.sum(word) == 0

    @staticmethod
    def puncture(word: np.ndarray) -> np.ndarray:
        """Drop the overall coordinate."""
        return np.asarray(word)[:-1]

    def codewords(self, limit: int = SPAN_LIMIT) -> Optional[np.ndarray]:
        words = self.code.codewords(limit)
        if words is None:
            return None
        return np.array([self.extend_word(w) for w in words], dtype=np.int64).reshape(len(words), self.length)


def extend(code: GoppaCode) -> ExtendedGoppaCode:
    extended = ExtendedGoppaCode(code)
    tower = code.tower
    for word in extended.basis:
        if tower.sum(word) != 0:
            raise InternalInconsistencyError("extended basis word has nonzero coordinate sum")
    return extended


# =============================================================================
# Equivalence certificates
# =============================================================================


MapKind = Literal["frobenius", "affine"]


@dataclass(frozen=True)
class EquivalenceCertificate:
    """c ∈ C(image) ⇔ (c_{π(i)})_i ∈ C(source), with H(image)_{π(i)} = scale · φ(H(source)_i).

    φ = σ^frobenius_power: σ^i for a Frobenius certificate, the identity
    (power 0) for an affine one, and a sum of powers after composition.
    """

    source: int
    image: int
    permutation: tuple[int, ...]
    scale: int
    description: str
    frobenius_power: int = 0

    def pull_back(self, word: np.ndarray) -> np.ndarray:
        """Carry a word of C(image) to a word of C(source)."""
        return np.asarray(word)[list(self.permutation)]

    def push_forward(self, word: np.ndarray) -> np.ndarray:
        """Carry a word of C(source) to a word of C(image)."""
        result = np.empty_like(np.asarray(word))
        result[list(self.permutation)] = word
        return result

    def then(self, other: "EquivalenceCertificate", tower: FieldTower) -> "EquivalenceCertificate":
        """Compose source → image → other.image.

        The second map acts on the first scale: s = s₂ · φ₂(s₁), φ = φ₂ ∘ φ₁.
        """
        if other.source != self.image:
            raise ParameterError(
                "certificates do not chain",
                detail=f"{self.image} is not the source {other.source}",
            )
        permutation = np.asarray(other.permutation)[list(self.permutation)]
        scale = tower.mul(other.scale, tower.frobenius(self.scale, other.frobenius_power))
        power = (self.frobenius_power + other.frobenius_power) % tower.params.extension_degree
        return EquivalenceCertificate(
            source=self.source,
            image=other.image,
            permutation=tuple(int(i) for i in permutation),
            scale=int(scale),
            description=f"{self.description} then {other.description}",
            frobenius_power=power,
        )

    def columns_match(self, source_code: GoppaCode, image_code: GoppaCode) -> bool:
        """H(image)_{π(i)} = scale · φ(H(source)_i) on the column values."""
        tower = source_code.tower
        expected = tower.mul(tower.frobenius(source_code.column_values, self.frobenius_power), self.scale)
        return bool(np.array_equal(image_code.column_values[list(self.permutation)], np.asarray(expected)))

    def verify(self, source_code: GoppaCode, image_code: GoppaCode) -> bool:
        """Check both directions on full kernel bases."""
        if source_code.dimension != image_code.dimension:
            return False
        forward = all(image_code.contains(self.push_forward(w)) for w in source_code.basis)
        backward = all(source_code.contains(self.pull_back(w)) for w in image_code.basis)
        return forward and backward


def equivalence_witness(
    tower: FieldTower,
    alpha: int,
    kind: MapKind,
    i: int = 1,
    a: int = 1,
    b: int = 0,
) -> EquivalenceCertificate:
    """Certificate that C(α) and C(φ(α)) are equivalent, for φ = σ^i or α → aα + b.

    The permutation satisfies ζ_{π(j)} = φ(ζ_j).

    Raises:
        InternalInconsistencyError: the certificate fails on a kernel basis.
    """
    require_in_s(tower, alpha)
    locus = CodeLocus.of(tower)
    match kind:
        case "frobenius":
            image = tower.frobenius(alpha, i)
            mapped = tower.frobenius(locus.elements, i)
            scale = 1
            power = i % tower.params.extension_degree
            description = f"σ^{power}"
        case "affine":
            image = affine_apply(tower, a, b, alpha)
            mapped = affine_apply(tower, a, b, locus.elements)
            scale = tower.inv(a)
            power = 0
            description = f"α → {a}·α + {b}"
        case _:
            raise ParameterError(f"unknown map kind {kind!r}")

    permutation = locus.index_of(np.asarray(mapped, dtype=np.int64))
    certificate = EquivalenceCertificate(
        source=int(alpha),
        image=int(image),
        permutation=tuple(int(x) for x in permutation),
        scale=int(scale),
        description=description,
        frobenius_power=power,
    )

    source_code = parity_check(tower, alpha)
    image_code = source_code if image == alpha else parity_check(tower, image)
    if not certificate.columns_match(source_code, image_code):
        raise InternalInconsistencyError(f"H({image}) is not scale · φ(H({alpha})) after permutation")
    if not certificate.verify(source_code, image_code):
        raise InternalInconsistencyError(
            f"{description} certificate failed for α={alpha}",
            detail=f"dimensions {source_code.dimension} and {image_code.dimension}",
        )
    logger.debug(f"Certificate {description}: C({alpha}) ~ C({image})")
    return certificate


# =============================================================================
# Export
# =============================================================================


def write_parity_matrix(code: GoppaCode, path: Path) -> Path:
    """Plain-text parity rows of F_p digits under a one-line header."""
    params = code.tower.params
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        f"# p={params.p} t={params.t} n={params.n} r={params.r} alpha={code.alpha} "
        f"length={code.length} dimension={code.dimension}"
    ]
    lines.extend(" ".join(str(int(d)) for d in row) for row in code.parity_rows)
    path.write_text("\n".join(lines) + "\n")
    logger.info(f"Parity matrix for α={code.alpha} written to {path}")
    return path
