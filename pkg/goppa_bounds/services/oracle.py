"""Oracle Service - exhaustive orbit partitions of S and exact verification.

S is enumerated in handle order and indexed through a dense rank table
(handle → S-index, -1 outside S). A group's orbits are the connected
components of the graph joining every element to its images under a
generating set, so each partition is built by applying a handful of
generators chunk by chunk and merging the resulting edges in a union-find.

Image computation runs in a thread pool over S-index ranges; unions are
applied in the calling thread in chunk order. Class labels are the smallest
S-index of each class, so the finished partition does not depend on the
number of workers.
"""

import logging
import resource
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from goppa_bounds.core.config import Settings, get_settings
from goppa_bounds.core.exceptions import (
    CapacityError,
    InternalInconsistencyError,
    ParameterError,
)
from goppa_bounds.services.bounds import BoundReport, SubgroupSpec, extended_bound
from goppa_bounds.services.disjoint_set import DisjointSet
from goppa_bounds.services.fields import (
    LOG_TABLE_HARD_LIMIT,
    Backend,
    FieldTower,
    Level,
    TowerParams,
    build_tower,
)

logger = logging.getLogger(__name__)


class GeneratorSet(str, Enum):
    """Which group acts on S."""

    AFFINE_G = "affine_G"
    PGL_G = "pgl_G"
    AFFINE_ONLY = "affine_only"
    PGL_ONLY = "pgl_only"
    FROBENIUS_ONLY = "frobenius_only"


# =============================================================================
# Enumeration
# =============================================================================


def check_budget(params: TowerParams, budget: int) -> None:
    """Raise CapacityError when the tower is too large to enumerate."""
    if params.order > budget:
        raise CapacityError(required=params.order, budget=budget)


def enumerate_S(
    tower: FieldTower,
    budget: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> np.ndarray:
    """All α with degree r over F_{q^n}, ascending by handle.

    Raises:
        CapacityError: tower order above the enumeration budget.
    """
    settings = get_settings()
    check_budget(tower.params, budget if budget is not None else settings.oracle_budget)
    chunk_size = chunk_size or settings.chunk_size

    start = time.perf_counter()
    parts = []
    for lo in range(0, tower.order, chunk_size):
        block = np.arange(lo, min(lo + chunk_size, tower.order), dtype=np.int64)
        parts.append(block[tower.in_s(block)])
        logger.debug(f"S scan: {min(lo + chunk_size, tower.order)}/{tower.order} handles")
    elements = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    expected = tower.params.s_size
    if elements.size != expected:
        raise InternalInconsistencyError(
            f"enumerated {elements.size} elements of S, expected {expected}"
        )
    duration_ms = (time.perf_counter() - start) * 1000
    logger.info(f"Enumerated |S|={elements.size} ({duration_ms:.2f}ms)")
    return elements


def rank_table(tower: FieldTower, elements: np.ndarray) -> np.ndarray:
    """Dense handle → S-index table; -1 marks handles outside S."""
    if elements.size >= (1 << 31):
        raise CapacityError(required=int(elements.size), budget=1 << 31, what="S-indices")
    rank = np.full(tower.order, -1, dtype=np.int32)
    rank[elements] = np.arange(elements.size, dtype=np.int32)
    return rank


# =============================================================================
# Generators
# =============================================================================


@dataclass(frozen=True)
class Generator:
    """One generating map of the acting group, vectorized over handles."""

    name: str
    apply: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)


def additive_basis(tower: FieldTower) -> np.ndarray:
    """An F_p-basis of F_{q^n}: powers 1, w, ..., w^{tn-1} of a generator w of F_{q^n}^*."""
    w = _level_generator(tower, Level.F_QN)
    dimension = tower.params.t * tower.params.n
    return np.array([tower.pow(w, k) for k in range(dimension)], dtype=np.int64)


def _level_generator(tower: FieldTower, level: Level) -> int:
    sub_order = tower.params.level_order(level)
    return tower.pow(tower.primitive_element, (tower.order - 1) // (sub_order - 1))


def generator_maps(tower: FieldTower, generators: GeneratorSet) -> list[Generator]:
    """Generating maps for the chosen group.

    Translations by an F_p-basis and one primitive scaling generate the
    affine group F; adding α → 1/α gives PGL(2, q^n); σ generates G.
    """
    translations = [
        Generator(f"α+{int(b)}", lambda x, b=int(b): tower.add(x, b)) for b in additive_basis(tower)
    ]
    w = _level_generator(tower, Level.F_QN)
    scaling = Generator(f"{w}·α", lambda x: tower.mul(x, w))
    inversion = Generator("1/α", tower.inv)
    frobenius = Generator("σ", lambda x: tower.frobenius(x, 1))

    affine = translations + [scaling]
    match generators:
        case GeneratorSet.AFFINE_ONLY:
            return affine
        case GeneratorSet.PGL_ONLY:
            return affine + [inversion]
        case GeneratorSet.AFFINE_G:
            return affine + [frobenius]
        case GeneratorSet.PGL_G:
            return affine + [inversion, frobenius]
        case GeneratorSet.FROBENIUS_ONLY:
            return [frobenius]
    raise ParameterError(f"unknown generator set {generators!r}")


# =============================================================================
# Orbit partitions
# =============================================================================


@dataclass
class OrbitPartition:
    """Orbits of a group on S, labelled by their smallest S-index."""

    labels: np.ndarray
    orbit_count: int
    size_histogram: dict[int, int]
    generators: GeneratorSet
    elements: np.ndarray = field(repr=False)
    rank: np.ndarray = field(repr=False)

    def class_id(self, handle: int) -> int:
        """Minimal member handle of the class containing ``handle``."""
        index = int(self.rank[handle])
        if index < 0:
            raise ParameterError(f"element {handle} is not in S")
        return int(self.elements[self.labels[index]])

    def representatives(self) -> np.ndarray:
        """S-indices of class minima."""
        return np.flatnonzero(self.labels == np.arange(self.labels.size, dtype=self.labels.dtype))

    def orbit_sizes(self) -> np.ndarray:
        counts = np.bincount(self.labels, minlength=self.labels.size)
        return counts[counts > 0]

    def class_ids(self) -> np.ndarray:
        """Class-id handle for every S-index."""
        return self.elements[self.labels]


def _chunk_ranges(size: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk_size, size)) for lo in range(0, size, chunk_size)]


def orbit_partition(
    tower: FieldTower,
    elements: np.ndarray,
    generators: GeneratorSet,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
    rank: Optional[np.ndarray] = None,
    base: Optional[OrbitPartition] = None,
) -> OrbitPartition:
    """Partition S into orbits of the group spanned by ``generators``.

    Args:
        tower: The field tower.
        elements: Output of ``enumerate_S``.
        generators: Group to act with.
        workers: Threads computing generator images.
        chunk_size: S-indices per image task.
        rank: Precomputed rank table (built when omitted).
        base: A finer partition whose generators are a subset of these;
            only the missing generators are applied on top of it.
    """
    settings = get_settings()
    workers = workers or settings.workers
    chunk_size = chunk_size or settings.chunk_size
    rank = rank if rank is not None else rank_table(tower, elements)

    maps = generator_maps(tower, generators)
    dsu = DisjointSet(elements.size)
    if base is not None:
        done = {g.name for g in generator_maps(tower, base.generators)}
        if not done <= {g.name for g in maps}:
            raise ParameterError(f"{base.generators.value} is not contained in {generators.value}")
        maps = [g for g in maps if g.name not in done]
        dsu.parent = base.labels.astype(dsu.parent.dtype, copy=True)

    ranges = _chunk_ranges(elements.size, chunk_size)
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for generator in maps:
            step_start = time.perf_counter()

            def images(bounds: tuple[int, int], apply=generator.apply) -> np.ndarray:
                lo, hi = bounds
                return rank[np.asarray(apply(elements[lo:hi]), dtype=np.int64)]

            for (lo, hi), image in zip(ranges, pool.map(images, ranges)):
                if np.any(image < 0):
                    raise InternalInconsistencyError(f"generator {generator.name} maps S outside S")
                dsu.union(np.arange(lo, hi, dtype=image.dtype), image)
            logger.info(
                f"Applied {generator.name} to {elements.size} elements "
                f"({(time.perf_counter() - step_start) * 1000:.2f}ms)"
            )

    labels = dsu.labels()
    sizes = np.bincount(labels, minlength=labels.size)
    sizes = sizes[sizes > 0]
    values, counts = np.unique(sizes, return_counts=True)
    partition = OrbitPartition(
        labels=labels,
        orbit_count=int(sizes.size),
        size_histogram={int(v): int(c) for v, c in zip(values, counts)},
        generators=generators,
        elements=elements,
        rank=rank,
    )
    if int(sizes.sum()) != elements.size:
        raise InternalInconsistencyError("orbit sizes do not add up to |S|")
    logger.info(
        f"Partition {generators.value}: {partition.orbit_count} orbits "
        f"({(time.perf_counter() - start) * 1000:.2f}ms)"
    )
    return partition


def is_closed(tower: FieldTower, partition: OrbitPartition) -> bool:
    """Every generator maps every element into its own class."""
    elements, labels, rank = partition.elements, partition.labels, partition.rank
    for generator in generator_maps(tower, partition.generators):
        image = rank[np.asarray(generator.apply(elements), dtype=np.int64)]
        if np.any(image < 0) or not np.array_equal(labels[image], labels):
            return False
    return True


def fixed_sets_bruteforce(tower: FieldTower, partition: OrbitPartition, subgroup: SubgroupSpec) -> int:
    """Count classes C with σ^e(C) = C by mapping each class minimum."""
    representatives = partition.representatives()
    if subgroup.is_trivial:
        return int(representatives.size)
    images = tower.frobenius(partition.elements[representatives], subgroup.exponent)
    image_index = partition.rank[np.asarray(images, dtype=np.int64)]
    return int(np.count_nonzero(partition.labels[image_index] == representatives))


def affine_sets_per_pl_set(pl: OrbitPartition, affine: OrbitPartition) -> np.ndarray:
    """For each PL class, the number of affine classes inside it."""
    affine_minima = affine.representatives()
    containing = pl.labels[affine_minima]
    counts = np.bincount(containing, minlength=pl.labels.size)
    return counts[pl.representatives()]


def dump_partition(partition: OrbitPartition, path: Path) -> Path:
    """Write the class-id handle of every S-index as little-endian u32."""
    if partition.elements.size and int(partition.elements.max()) >= (1 << 32):
        raise CapacityError(required=int(partition.elements.max()) + 1, budget=1 << 32, what="handles")
    path.parent.mkdir(parents=True, exist_ok=True)
    partition.class_ids().astype("<u4").tofile(path)
    logger.info(f"Partition {partition.generators.value} dumped to {path}")
    return path


# =============================================================================
# Verification
# =============================================================================


@dataclass(frozen=True)
class Comparison:
    quantity: str
    expected: int
    measured: int

    @property
    def passed(self) -> bool:
        return self.expected == self.measured


@dataclass(frozen=True)
class RunStats:
    elapsed_ms: int
    peak_rss_kib: int


@dataclass
class VerificationReport:
    params: TowerParams
    bound: BoundReport
    comparisons: list[Comparison]
    orbit_counts: dict[str, int]
    backend: str
    workers: int
    stats: RunStats
    dumps: list[Path] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.comparisons)

    @property
    def first_mismatch(self) -> Optional[Comparison]:
        return next((c for c in self.comparisons if not c.passed), None)


def verify_bound(
    q: int,
    n: int,
    r: int,
    settings: Optional[Settings] = None,
    budget: Optional[int] = None,
    backend: Backend = Backend.AUTO,
    workers: Optional[int] = None,
    cache_dir: Optional[Path] = None,
    dump_dir: Optional[Path] = None,
) -> VerificationReport:
    """Measure every quantity the bounds module predicts and compare exactly.

    Raises:
        CapacityError: q^{nr} above the enumeration budget.
    """
    settings = settings or get_settings()
    budget = budget if budget is not None else settings.oracle_budget
    workers = workers or settings.workers
    params = TowerParams.from_q(q, n, r)
    check_budget(params, budget)

    start = time.perf_counter()
    bound = extended_bound(q, n, r)

    # enumeration wants tables whenever they fit
    if backend is Backend.AUTO and params.order <= min(budget, LOG_TABLE_HARD_LIMIT):
        backend = Backend.LOG_TABLES
    tower_settings = settings
    if budget > settings.oracle_budget:
        tower_settings = settings.model_copy(update={"oracle_budget_bits": (budget - 1).bit_length()})
    tower = build_tower(params, backend, settings=tower_settings, cache_dir=cache_dir)

    elements = enumerate_S(tower, budget=budget, chunk_size=settings.chunk_size)
    rank = rank_table(tower, elements)
    run = dict(workers=workers, chunk_size=settings.chunk_size, rank=rank)
    affine = orbit_partition(tower, elements, GeneratorSet.AFFINE_ONLY, **run)
    pl = orbit_partition(tower, elements, GeneratorSet.PGL_ONLY, base=affine, **run)
    affine_g = orbit_partition(tower, elements, GeneratorSet.AFFINE_G, base=affine, **run)
    pl_g = orbit_partition(tower, elements, GeneratorSet.PGL_G, base=pl, **run)

    qn = params.qn
    affine_size = qn * (qn - 1)
    pl_size = qn**3 - qn
    comparisons = [
        Comparison("|S|", bound.s_size, int(elements.size)),
        Comparison("|𝔸|", bound.affine_set_count, affine.orbit_count),
        Comparison("affine sets of size q^n(q^n-1)", bound.affine_set_count, affine.size_histogram.get(affine_size, 0)),
        Comparison("|𝕆|", bound.pl_set_count, pl.orbit_count),
        Comparison("PL sets of size q^{3n}-q^n", bound.pl_set_count, pl.size_histogram.get(pl_size, 0)),
        Comparison(
            "PL sets made of q^n+1 affine sets",
            bound.pl_set_count,
            int(np.count_nonzero(affine_sets_per_pl_set(pl, affine) == qn + 1)),
        ),
    ]
    for row in bound.table.rows:
        label = row.subgroup.label
        comparisons.append(
            Comparison(f"affine sets fixed by {label}", row.fixed_affine, fixed_sets_bruteforce(tower, affine, row.subgroup))
        )
        comparisons.append(
            Comparison(f"PL sets fixed by {label}", row.fixed_pl, fixed_sets_bruteforce(tower, pl, row.subgroup))
        )
    comparisons.append(Comparison("F·G orbits (affine bound)", bound.affine_orbit_bound, affine_g.orbit_count))
    comparisons.append(Comparison("PGL·G orbits (extended bound)", bound.extended_bound, pl_g.orbit_count))

    dumps = []
    if dump_dir is not None:
        stem = f"partition-q{q}-n{n}-r{r}"
        for partition in (affine, pl, affine_g, pl_g):
            dumps.append(dump_partition(partition, dump_dir / f"{stem}-{partition.generators.value}.u32"))

    stats = RunStats(
        elapsed_ms=int((time.perf_counter() - start) * 1000),
        peak_rss_kib=int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss),
    )
    report = VerificationReport(
        params=params,
        bound=bound,
        comparisons=comparisons,
        orbit_counts={p.generators.value: p.orbit_count for p in (affine, pl, affine_g, pl_g)},
        backend=tower.backend_name,
        workers=workers,
        stats=stats,
        dumps=dumps,
    )
    mismatch = report.first_mismatch
    if mismatch is None:
        logger.info(f"Verification {params.describe()} passed ({stats.elapsed_ms}ms)")
    else:
        logger.warning(
            f"Verification {params.describe()} failed at {mismatch.quantity}: "
            f"expected {mismatch.expected}, measured {mismatch.measured}"
        )
    return report
