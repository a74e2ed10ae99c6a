"""Field Tower Service - explicit F_p ⊂ F_q ⊂ F_{q^n} (⊂ F_{q^r}) ⊂ F_{q^{nr}}.

Elements are integer handles: the base-p encoding of the coefficient vector
over F_p, constant term least significant (the same integer representation
``galois`` uses). Two arithmetic backends produce identical handles:

- ``LogTableBackend``: dense discrete-log/antilog tables (int32), used when the
  tower is small enough to tabulate
- ``PolynomialBackend``: ``galois`` polynomial arithmetic modulo the tower's
  modulus, used above the table threshold

All arithmetic methods accept Python ints or integer numpy arrays and
broadcast like numpy ufuncs; scalar inputs give ``int`` results.
"""

import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Optional, Union

import galois
import numpy as np
import sympy

from goppa_bounds.core.config import Settings, get_settings
from goppa_bounds.core.exceptions import (
    CacheFormatError,
    CapacityError,
    DivisionByZeroError,
    InternalInconsistencyError,
    ParameterError,
)

logger = logging.getLogger(__name__)

ElementLike = Union[int, np.integer, np.ndarray]

# Handles above this order no longer fit int64 arrays.
INT64_ORDER_LIMIT = 1 << 62
# Log tables are int32.
LOG_TABLE_HARD_LIMIT = 1 << 31
# Largest top field that `subfield(Level.F_QNR)` will list handle by handle.
FULL_FIELD_ENUMERATION_LIMIT = 1 << 26


class Level(str, Enum):
    """Subfield levels of the tower, named by their order."""

    F_Q = "F_q"
    F_QN = "F_qn"
    F_QR = "F_qr"
    F_QNR = "F_qnr"


class Backend(str, Enum):
    """Arithmetic backend selection hint."""

    AUTO = "auto"
    LOG_TABLES = "log_tables"
    POLYNOMIAL = "polynomial"


# =============================================================================
# Parameters
# =============================================================================


@dataclass(frozen=True)
class TowerParams:
    """q = p^t and the primes n, r that fix the tower F_{q^{nr}}."""

    p: int
    t: int
    n: int
    r: int

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p):
            raise ParameterError(f"p={self.p} is not prime")
        if self.t < 1:
            raise ParameterError(f"t={self.t} must be a positive integer")
        if not sympy.isprime(self.n):
            raise ParameterError(f"n={self.n} is not prime")
        if not sympy.isprime(self.r):
            raise ParameterError(f"r={self.r} is not prime")
        if self.r < 3:
            raise ParameterError("r must be an odd prime (r > 2)", detail=f"got r={self.r}")

    @classmethod
    def from_q(cls, q: int, n: int, r: int) -> "TowerParams":
        """Resolve a prime power q into (p, t)."""
        p, t = split_prime_power(q)
        return cls(p=p, t=t, n=n, r=r)

    @property
    def q(self) -> int:
        return self.p**self.t

    @property
    def qn(self) -> int:
        return self.q**self.n

    @property
    def equal_degrees(self) -> bool:
        """True in the n = r case."""
        return self.n == self.r

    @property
    def extension_degree(self) -> int:
        """Degree of F_{q^{nr}} over F_q."""
        return self.n * self.r

    @property
    def degree(self) -> int:
        """Degree of the tower over its prime field."""
        return self.t * self.n * self.r

    @property
    def order(self) -> int:
        return self.p**self.degree

    @property
    def group_order(self) -> int:
        """|G| for the Frobenius group ⟨σ⟩ acting on S."""
        return self.extension_degree

    @property
    def s_size(self) -> int:
        return self.order - self.qn

    @property
    def outside_validated_range(self) -> bool:
        """n = 2 is accepted but never exercised by the closed forms."""
        return self.n == 2

    @property
    def levels(self) -> tuple[Level, ...]:
        if self.equal_degrees:
            return (Level.F_Q, Level.F_QN, Level.F_QNR)
        return (Level.F_Q, Level.F_QN, Level.F_QR, Level.F_QNR)

    def level_degree(self, level: Level) -> int:
        """Degree m of a level over F_q, so the level is F_{q^m}."""
        match level:
            case Level.F_Q:
                return 1
            case Level.F_QN:
                return self.n
            case Level.F_QR:
                if self.equal_degrees:
                    raise ParameterError("level F_qr coincides with F_qn when n = r")
                return self.r
            case Level.F_QNR:
                return self.n * self.r
        raise ParameterError(f"unknown level {level!r}")

    def level_order(self, level: Level) -> int:
        return self.q ** self.level_degree(level)

    def describe(self) -> str:
        return f"q={self.q} (p={self.p}, t={self.t}) n={self.n} r={self.r}"


def split_prime_power(q: int) -> tuple[int, int]:
    """Return (p, t) with q = p^t, or raise ParameterError."""
    if q < 2:
        raise ParameterError(f"q={q} is not a prime power")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise ParameterError(
            f"q={q} is not a prime power",
            detail=f"factorization {dict(factors)}",
        )
    ((p, t),) = factors.items()
    return int(p), int(t)


# =============================================================================
# Digit helpers (handle <-> coefficient vector)
# =============================================================================


def to_digits(values: ElementLike, p: int, width: int) -> np.ndarray:
    """Coefficient vectors of handles, shape (..., width), constant term first."""
    values = np.asarray(values, dtype=np.int64)
    digits = np.empty(values.shape + (width,), dtype=np.int64)
    rest = values.copy()
    for i in range(width):
        rest, digits[..., i] = np.divmod(rest, p)
    return digits


def from_digits(digits: np.ndarray, p: int) -> np.ndarray:
    """Inverse of ``to_digits``."""
    digits = np.asarray(digits, dtype=np.int64)
    place = p ** np.arange(digits.shape[-1], dtype=np.int64)
    return digits @ place


def _digitwise(a: np.ndarray, b: Optional[np.ndarray], p: int, width: int) -> np.ndarray:
    # p odd: add (or negate when b is None) coefficient by coefficient mod p
    shape = np.broadcast_shapes(np.shape(a), np.shape(b) if b is not None else ())
    result = np.zeros(shape, dtype=np.int64)
    place = 1
    for _ in range(width):
        da = (a // place) % p
        if b is None:
            digit = (-da) % p
        else:
            digit = (da + (b // place) % p) % p
        result += digit * place
        place *= p
    return result


# =============================================================================
# Arithmetic Backends
# =============================================================================


class ArithmeticBackend(ABC):
    """Vectorized arithmetic on integer handles of one fixed field."""

    name: str

    def __init__(self, p: int, degree: int):
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.group_order = self.order - 1

    @abstractmethod
    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def inv(self, a: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def pow(self, a: np.ndarray, exponent: int) -> np.ndarray: ...

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return _digitwise(a, b, self.p, self.degree)

    def neg(self, a: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return np.array(a, dtype=np.int64, copy=True)
        return _digitwise(a, None, self.p, self.degree)

    def sum(self, values: np.ndarray) -> int:
        """Field sum of a 1-D array of handles."""
        values = np.asarray(values, dtype=np.int64)
        if values.size == 0:
            return 0
        if self.p == 2:
            return int(np.bitwise_xor.reduce(values))
        digits = to_digits(values, self.p, self.degree).sum(axis=0) % self.p
        return int(from_digits(digits, self.p))


class LogTableBackend(ArithmeticBackend):
    """Discrete-log (Zech style) tables: antilog[k] = g^k, log[antilog[k]] = k."""

    name = Backend.LOG_TABLES.value

    def __init__(self, p: int, degree: int, antilog: np.ndarray, log: np.ndarray):
        super().__init__(p, degree)
        self.antilog = antilog
        self.log = log

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        exps = (self.log[a].astype(np.int64) + self.log[b]) % self.group_order
        return np.where((a == 0) | (b == 0), 0, self.antilog[exps].astype(np.int64))

    def inv(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZeroError()
        exps = (-self.log[a].astype(np.int64)) % self.group_order
        return self.antilog[exps].astype(np.int64)

    def pow(self, a: np.ndarray, exponent: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if exponent < 0 and np.any(a == 0):
            raise DivisionByZeroError()
        reduced = exponent % self.group_order
        exps = (self.log[a].astype(np.int64) * reduced) % self.group_order
        result = self.antilog[exps].astype(np.int64)
        if exponent > 0:
            result = np.where(a == 0, 0, result)
        return result


class PolynomialBackend(ArithmeticBackend):
    """Arithmetic through a ``galois`` field class in calculation mode."""

    name = Backend.POLYNOMIAL.value

    def __init__(self, p: int, degree: int, field: type[galois.FieldArray]):
        super().__init__(p, degree)
        self.field = field
        self._dtype = np.int64 if self.order < INT64_ORDER_LIMIT else object

    def _lift(self, a: np.ndarray) -> galois.FieldArray:
        return self.field(np.asarray(a))

    def _lower(self, x: galois.FieldArray) -> np.ndarray:
        return np.asarray(x.view(np.ndarray)).astype(self._dtype)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._lower(self._lift(a) * self._lift(b))

    def inv(self, a: np.ndarray) -> np.ndarray:
        if np.any(np.asarray(a) == 0):
            raise DivisionByZeroError()
        return self._lower(np.reciprocal(self._lift(a)))

    def pow(self, a: np.ndarray, exponent: int) -> np.ndarray:
        lifted = self._lift(a)
        if exponent < 0 and np.any(lifted == 0):
            raise DivisionByZeroError()
        reduced = exponent % self.group_order
        result = self._lower(lifted**reduced)
        if exponent > 0:
            result = np.where(np.asarray(a) == 0, 0, result).astype(self._dtype)
        return result

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2 and self._dtype is np.int64:
            return super().add(a, b)
        return self._lower(self._lift(a) + self._lift(b))

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self._lower(-self._lift(a))

    def sum(self, values: np.ndarray) -> int:
        if len(values) == 0:
            return 0
        return int(np.add.reduce(self._lift(values)))


# =============================================================================
# Field Tower
# =============================================================================


class FieldTower:
    """
    The explicit field F_{q^{nr}} with its subfield lattice.

    Responsibilities:
    - Element arithmetic (add, neg, sub, mul, inv, div, pow) on handles
    - Frobenius powers σ^i: a → a^{q^i} and degree classification
    - Subfield enumeration, realized as powers of the primitive element and
      cross-checked against Frobenius fixed points

    Instances are immutable after ``build_tower`` returns and may be shared
    between threads.
    """

    def __init__(
        self,
        params: TowerParams,
        modulus: tuple[int, ...],
        primitive_element: int,
        backend: ArithmeticBackend,
    ):
        self.params = params
        self.modulus = modulus
        self.order = params.order
        self.primitive_element = primitive_element
        self.backend = backend
        self._subfields: dict[Level, np.ndarray] = {}

    def __repr__(self) -> str:
        return (
            f"FieldTower({self.params.describe()}, order={self.order}, "
            f"backend={self.backend.name})"
        )

    @property
    def backend_name(self) -> str:
        return self.backend.name

    @property
    def log_tables(self) -> Optional[tuple[np.ndarray, np.ndarray]]:
        """(antilog, log) when the tower is tabulated, else None."""
        if isinstance(self.backend, LogTableBackend):
            return self.backend.antilog, self.backend.log
        return None

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def add(self, a: ElementLike, b: ElementLike) -> ElementLike:
        return _out(self.backend.add(_arr(a), _arr(b)), a, b)

    def neg(self, a: ElementLike) -> ElementLike:
        return _out(self.backend.neg(_arr(a)), a)

    def sub(self, a: ElementLike, b: ElementLike) -> ElementLike:
        return _out(self.backend.add(_arr(a), self.backend.neg(_arr(b))), a, b)

    def mul(self, a: ElementLike, b: ElementLike) -> ElementLike:
        return _out(self.backend.mul(_arr(a), _arr(b)), a, b)

    def inv(self, a: ElementLike) -> ElementLike:
        return _out(self.backend.inv(_arr(a)), a)

    def div(self, a: ElementLike, b: ElementLike) -> ElementLike:
        return _out(self.backend.mul(_arr(a), self.backend.inv(_arr(b))), a, b)

    def pow(self, a: ElementLike, exponent: int) -> ElementLike:
        return _out(self.backend.pow(_arr(a), int(exponent)), a)

    def sum(self, values: ElementLike) -> int:
        return self.backend.sum(np.ravel(np.asarray(values)))

    # -------------------------------------------------------------------------
    # Frobenius and degrees
    # -------------------------------------------------------------------------

    def frobenius(self, a: ElementLike, i: int = 1) -> ElementLike:
        """a^{q^i}, with i reduced mod nr."""
        i %= self.params.extension_degree
        if i == 0:
            return _out(np.array(a, dtype=np.int64, copy=True), a)
        return self.pow(a, self.params.q**i)

    def degree_over(self, a: ElementLike, level: Level = Level.F_QN) -> ElementLike:
        """Degree of the minimal polynomial of a over the given level."""
        m = self.params.level_degree(level)
        nr = self.params.extension_degree
        values = _arr(a)
        # degree of a over F_q: least divisor d of nr with a^{q^d} = a
        over_q = np.full(values.shape, nr, dtype=np.int64)
        for d in sorted(sympy.divisors(nr), reverse=True)[1:]:
            fixed = np.asarray(self.frobenius(values, d)) == values
            over_q = np.where(fixed, d, over_q)
        degree = np.lcm(over_q, m) // m
        return _out(degree, a)

    def in_level(self, a: ElementLike, level: Level) -> ElementLike:
        """Membership predicate: a^{q^m} = a for the level's m."""
        m = self.params.level_degree(level)
        result = np.asarray(self.frobenius(_arr(a), m)) == _arr(a)
        return bool(result) if np.ndim(a) == 0 else result

    def in_s(self, a: ElementLike) -> ElementLike:
        """Membership in S: a is not fixed by σ^n (degree r over F_{q^n})."""
        n = self.params.n
        result = np.asarray(self.frobenius(_arr(a), n)) != _arr(a)
        return bool(result) if np.ndim(a) == 0 else result

    # -------------------------------------------------------------------------
    # Elements
    # -------------------------------------------------------------------------

    def coefficients(self, a: int) -> tuple[int, ...]:
        """Coefficient vector over F_p of length t·n·r, constant term first."""
        return tuple(int(c) for c in to_digits(a, self.params.p, self.params.degree))

    def from_coefficients(self, coefficients: tuple[int, ...]) -> int:
        if len(coefficients) != self.params.degree:
            raise ParameterError(
                f"expected {self.params.degree} coefficients, got {len(coefficients)}"
            )
        if any(not 0 <= c < self.params.p for c in coefficients):
            raise ParameterError("coefficients must lie in [0, p)")
        return int(from_digits(np.array(coefficients), self.params.p))

    def random_elements(self, rng: np.random.Generator, size: int, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=size, dtype=np.int64)

    def subfield(self, level: Level) -> np.ndarray:
        """Sorted handles of a subfield level."""
        if level not in self._subfields:
            self._subfields[level] = self._embed_subfield(level)
        return self._subfields[level]

    def _embed_subfield(self, level: Level) -> np.ndarray:
        sub_order = self.params.level_order(level)
        if level is Level.F_QNR:
            # the whole field; proper subfields and S are enumerated separately
            if self.order > FULL_FIELD_ENUMERATION_LIMIT:
                raise CapacityError(required=self.order, budget=FULL_FIELD_ENUMERATION_LIMIT)
            return np.arange(self.order, dtype=np.int64)
        generator = self.pow(self.primitive_element, (self.order - 1) // (sub_order - 1))
        powers = np.array([1], dtype=np.int64)
        step = generator
        while powers.size < sub_order - 1:
            powers = np.concatenate([powers, np.asarray(self.mul(powers, step), dtype=np.int64)])
            step = self.mul(step, step)
        elements = np.sort(np.concatenate([[0], powers[: sub_order - 1]]))

        if np.unique(elements).size != sub_order:
            raise InternalInconsistencyError(
                f"subfield {level.value} embedding is not injective",
                detail=f"expected {sub_order} distinct elements",
            )
        if not np.all(self.in_level(elements, level)):
            raise InternalInconsistencyError(
                f"subfield {level.value} embedding disagrees with the Frobenius predicate"
            )
        return elements

    def check_subfield_sizes(self, chunk: int = 1 << 20) -> dict[Level, int]:
        """Exhaustively count Frobenius fixed points per level.

        Returns the counts; raises when any differs from q^m.
        """
        counts: dict[Level, int] = {}
        for level in self.params.levels:
            if level is Level.F_QNR:
                counts[level] = self.order
                continue
            m = self.params.level_degree(level)
            total = 0
            for start in range(0, self.order, chunk):
                block = np.arange(start, min(start + chunk, self.order), dtype=np.int64)
                total += int(np.count_nonzero(np.asarray(self.frobenius(block, m)) == block))
            counts[level] = total
            if total != self.params.level_order(level):
                raise InternalInconsistencyError(
                    f"level {level.value} has {total} fixed points",
                    detail=f"expected {self.params.level_order(level)}",
                )
        return counts


def _arr(a: ElementLike) -> np.ndarray:
    if isinstance(a, np.ndarray):
        return a
    return np.asarray(a, dtype=np.int64 if abs(int(a)) < INT64_ORDER_LIMIT else object)


def _out(value: np.ndarray, *inputs: ElementLike) -> ElementLike:
    if all(np.ndim(x) == 0 for x in inputs):
        return int(value)
    return value


# =============================================================================
# Module-level operations
# =============================================================================


def frobenius(tower: FieldTower, a: ElementLike, i: int) -> ElementLike:
    """σ^i(a) = a^{q^i}."""
    return tower.frobenius(a, i)


def degree_over(tower: FieldTower, a: ElementLike, level: Level) -> ElementLike:
    return tower.degree_over(a, level)


def enumerate_subfield(tower: FieldTower, level: Level) -> np.ndarray:
    return tower.subfield(level)


def build_tower(
    params: TowerParams,
    backend_hint: Backend = Backend.AUTO,
    settings: Optional[Settings] = None,
    cache_dir: Optional[Path] = None,
) -> FieldTower:
    """Build (or fetch from cache) the field tower for the given parameters.

    Args:
        params: Validated tower parameters.
        backend_hint: ``auto`` picks log tables up to the configured threshold.
        settings: Settings override (defaults to the process settings).
        cache_dir: Tower cache directory override.

    Raises:
        CapacityError: log tables requested above the table/oracle budget.
    """
    settings = settings or get_settings()
    backend = resolve_backend(params, backend_hint, settings)
    directory = cache_dir if cache_dir is not None else settings.cache_dir
    return _build_tower_cached(params, backend, str(directory) if directory else "")


def resolve_backend(params: TowerParams, hint: Backend, settings: Settings) -> Backend:
    """Turn a backend hint into a concrete backend for these parameters."""
    order = params.order
    if hint is Backend.AUTO:
        return Backend.LOG_TABLES if order <= settings.log_table_max_order else Backend.POLYNOMIAL
    if hint is Backend.LOG_TABLES:
        limit = min(max(settings.log_table_max_order, settings.oracle_budget), LOG_TABLE_HARD_LIMIT)
        if order > limit:
            raise CapacityError(required=order, budget=limit, what="table entries")
    return hint


@lru_cache(maxsize=4)
def _build_tower_cached(params: TowerParams, backend: Backend, cache_dir: str) -> FieldTower:
    from goppa_bounds.services.tower_cache import cache_path, load_tower, save_tower

    path = cache_path(Path(cache_dir), params, backend) if cache_dir else None
    if path is not None and path.exists():
        try:
            tower = load_tower(path, params, backend)
            logger.info(f"Tower loaded from cache {path}")
            return tower
        except CacheFormatError as e:
            logger.warning(f"Ignoring tower cache: {e.message} ({e.detail})")

    tower = _construct(params, backend)
    if path is not None:
        save_tower(tower, path)
        logger.info(f"Tower cached at {path}")
    return tower


def find_modulus(p: int, degree: int) -> galois.Poly:
    """Smallest monic irreducible polynomial of the given degree over F_p."""
    modulus = galois.irreducible_poly(p, degree, method="min")
    if not modulus.is_irreducible():
        raise InternalInconsistencyError(f"modulus {modulus} failed the irreducibility test")
    return modulus


def _construct(params: TowerParams, backend: Backend) -> FieldTower:
    start = time.perf_counter()
    modulus = find_modulus(params.p, params.degree)
    generator = int(galois.primitive_element(modulus, method="min"))
    coefficients = tuple(int(c) for c in modulus.coeffs[::-1])
    logger.info(
        f"Building tower {params.describe()}: order={params.order}, "
        f"modulus={modulus}, primitive={generator}, backend={backend.value}"
    )

    field = galois_field(params, modulus, generator)

    arithmetic: ArithmeticBackend
    if backend is Backend.LOG_TABLES:
        antilog, log = build_log_tables(field, generator)
        arithmetic = LogTableBackend(params.p, params.degree, antilog, log)
    else:
        arithmetic = PolynomialBackend(params.p, params.degree, field)

    tower = assemble_tower(params, coefficients, generator, arithmetic)

    duration_ms = (time.perf_counter() - start) * 1000
    logger.info(f"Tower ready: {tower!r} ({duration_ms:.2f}ms)")
    return tower


def build_log_tables(field: type[galois.FieldArray], generator: int) -> tuple[np.ndarray, np.ndarray]:
    """Tabulate g^k for all k < order-1 in blocks and invert the table.

    The products are formed as an outer product of block steps and in-block
    powers so the polynomial multiplications run vectorized.
    """
    order = field.order
    group = order - 1
    block = 1 << max(1, (group.bit_length() + 1) // 2)
    g = field(generator)

    head = _power_run(field, g, block)
    steps = _power_run(field, g**block, -(-group // block))
    antilog_field = (steps[:, np.newaxis] * head[np.newaxis, :]).reshape(-1)[:group]
    antilog = np.asarray(antilog_field.view(np.ndarray), dtype=np.int32)

    seen = np.zeros(order, dtype=bool)
    seen[antilog] = True
    if seen[0] or int(np.count_nonzero(seen)) != group:
        raise InternalInconsistencyError(
            f"element {generator} does not generate the multiplicative group",
            detail="antilog table is not a permutation of the nonzero elements",
        )
    log = np.zeros(order, dtype=np.int32)
    log[antilog] = np.arange(group, dtype=np.int32)
    return antilog, log


def _power_run(field: type[galois.FieldArray], base: galois.FieldArray, count: int) -> galois.FieldArray:
    # base^0 .. base^{count-1} by doubling
    run = field([1])
    step = base
    while run.size < count:
        run = np.concatenate([run, run * step]).view(field)
        step = step * step
    return run[:count]


def verify_primitive(tower: FieldTower) -> None:
    """Check g^{(Q-1)/ℓ} ≠ 1 for every prime ℓ dividing Q-1."""
    group = tower.order - 1
    for prime in sympy.factorint(group):
        if tower.pow(tower.primitive_element, group // int(prime)) == 1:
            raise InternalInconsistencyError(
                f"element {tower.primitive_element} is not primitive",
                detail=f"order divides (Q-1)/{prime}",
            )
    if tower.pow(tower.primitive_element, group) != 1:
        raise InternalInconsistencyError("primitive element order does not divide Q-1")


def clear_tower_cache() -> None:
    """Drop in-memory towers (used by tests that vary the cache directory)."""
    _build_tower_cached.cache_clear()


def galois_field(params: TowerParams, modulus: galois.Poly, generator: int) -> type[galois.FieldArray]:
    """``galois`` class for the tower in a calculation mode it supports.

    JIT calculation when ``galois`` offers it for this field (for example
    GF(2^m)), python calculation otherwise (for example GF(3^21)).
    """
    field = galois.GF(
        params.order,
        irreducible_poly=modulus,
        primitive_element=generator,
        verify=False,
        compile="auto",
    )
    if "jit-calculate" in field.ufunc_modes and field.ufunc_mode != "jit-calculate":
        field.compile("jit-calculate")
    return field


def modulus_poly(p: int, coefficients: tuple[int, ...]) -> galois.Poly:
    """Poly over F_p from an ascending coefficient tuple."""
    return galois.Poly(list(coefficients)[::-1], field=galois.GF(p))


def assemble_tower(
    params: TowerParams,
    coefficients: tuple[int, ...],
    generator: int,
    arithmetic: ArithmeticBackend,
) -> FieldTower:
    """Wrap a backend into a tower and run the construction self-checks."""
    tower = FieldTower(params, coefficients, generator, arithmetic)
    verify_primitive(tower)
    for level in params.levels:
        if level is not Level.F_QNR:
            tower.subfield(level)
    return tower
