"""Tests for exhaustive orbit partitions and bound verification."""

import numpy as np
import pytest

from goppa_bounds.core.exceptions import CapacityError, ParameterError
from goppa_bounds.services.actions import affine_set_id, pl_set_id
from goppa_bounds.services.bounds import subgroup_by_exponent
from goppa_bounds.services.fields import TowerParams
from goppa_bounds.services.oracle import (
    GeneratorSet,
    additive_basis,
    affine_sets_per_pl_set,
    check_budget,
    dump_partition,
    enumerate_S,
    fixed_sets_bruteforce,
    is_closed,
    orbit_partition,
    rank_table,
    verify_bound,
)


# =============================================================================
# Fixtures
# =============================================================================


@pytest.fixture(scope="module")
def s_235(tower_235):
    return enumerate_S(tower_235, budget=1 << 16, chunk_size=4096)


@pytest.fixture(scope="module")
def rank_235(tower_235, s_235):
    return rank_table(tower_235, s_235)


@pytest.fixture(scope="module")
def affine_235(tower_235, s_235, rank_235):
    return orbit_partition(tower_235, s_235, GeneratorSet.AFFINE_ONLY, workers=2, chunk_size=4096, rank=rank_235)


@pytest.fixture(scope="module")
def pl_235(tower_235, s_235, rank_235, affine_235):
    return orbit_partition(
        tower_235, s_235, GeneratorSet.PGL_ONLY, workers=2, chunk_size=4096, rank=rank_235, base=affine_235
    )


# =============================================================================
# Tests
# =============================================================================


class TestEnumeration:
    """Test enumeration of S and the rank table."""

    def test_size_and_order(self, s_235):
        assert s_235.size == 32760
        assert np.all(np.diff(s_235) > 0)

    def test_rank_table(self, tower_235, s_235, rank_235):
        assert rank_235[s_235[100]] == 100
        assert rank_235[1] == -1
        assert int(np.count_nonzero(rank_235 >= 0)) == s_235.size

    def test_budget(self):
        with pytest.raises(CapacityError, match="requires 2\\^55 elements"):
            check_budget(TowerParams(p=2, t=1, n=11, r=5), 1 << 26)

    def test_additive_basis_spans(self, tower_235):
        basis = additive_basis(tower_235)
        spans = {0}
        for b in basis:
            spans |= {int(tower_235.add(x, int(b))) for x in spans}

        assert len(basis) == 3
        assert len(spans) == 8


class TestPartitions:
    """Test orbit partitions against direct orbit computation."""

    def test_affine_sets(self, tower_235, affine_235):
        assert affine_235.orbit_count == 585
        assert affine_235.size_histogram == {56: 585}
        assert is_closed(tower_235, affine_235)

    def test_pl_sets(self, tower_235, pl_235):
        assert pl_235.orbit_count == 65
        assert pl_235.size_histogram == {504: 65}

    def test_class_ids_match_direct_orbits(self, tower_235, s_235, affine_235, pl_235):
        for alpha in s_235[::4001]:
            assert affine_235.class_id(int(alpha)) == affine_set_id(tower_235, int(alpha))
            assert pl_235.class_id(int(alpha)) == pl_set_id(tower_235, int(alpha))

    def test_class_id_outside_s(self, affine_235):
        with pytest.raises(ParameterError):
            affine_235.class_id(1)

    def test_each_pl_set_holds_qn_plus_one_affine_sets(self, pl_235, affine_235):
        assert np.all(affine_sets_per_pl_set(pl_235, affine_235) == 9)

    def test_fixed_sets(self, tower_235, affine_235, pl_235):
        sigma_5 = subgroup_by_exponent(3, 5, 5)
        sigma_3 = subgroup_by_exponent(3, 5, 3)

        assert fixed_sets_bruteforce(tower_235, affine_235, sigma_5) == 15
        assert fixed_sets_bruteforce(tower_235, pl_235, sigma_5) == 5
        assert fixed_sets_bruteforce(tower_235, pl_235, sigma_3) == 0

    def test_worker_count_does_not_change_labels(self, tower_235, s_235, rank_235, pl_235):
        single = orbit_partition(tower_235, s_235, GeneratorSet.PGL_ONLY, workers=1, chunk_size=1024, rank=rank_235)
        assert np.array_equal(single.labels, pl_235.labels)

    def test_base_must_be_contained(self, tower_235, s_235, rank_235, pl_235):
        with pytest.raises(ParameterError):
            orbit_partition(tower_235, s_235, GeneratorSet.AFFINE_G, rank=rank_235, base=pl_235)

    def test_frobenius_only(self, tower_235, s_235, rank_235):
        partition = orbit_partition(tower_235, s_235, GeneratorSet.FROBENIUS_ONLY, workers=2, rank=rank_235)
        # orbits of σ on S have size 5 or 15
        assert set(partition.size_histogram) <= {5, 15}

    def test_dump(self, tmp_path, affine_235):
        path = dump_partition(affine_235, tmp_path / "affine.u32")
        values = np.fromfile(path, dtype="<u4")

        assert values.size == 32760
        assert np.array_equal(values, affine_235.class_ids())


class TestVerifyBound:
    """Test end-to-end verification."""

    @pytest.mark.parametrize("q, n, r", [(2, 3, 3), (2, 3, 5), (2, 5, 3), (3, 3, 3)])
    def test_small_parameters_pass(self, q, n, r, settings):
        report = verify_bound(q, n, r, settings=settings, workers=2)

        assert report.passed, report.first_mismatch
        assert report.orbit_counts["pgl_G"] == report.bound.extended_bound
        assert report.orbit_counts["affine_G"] == report.bound.affine_orbit_bound

    def test_comparisons_cover_table(self, settings):
        report = verify_bound(2, 3, 5, settings=settings, workers=2)
        quantities = [c.quantity for c in report.comparisons]

        assert "|S|" in quantities
        assert "PL sets fixed by ⟨σ^5⟩" in quantities
        assert quantities[-1] == "PGL·G orbits (extended bound)"
        assert report.comparisons[-1].measured == 5

    def test_over_budget(self, settings):
        with pytest.raises(CapacityError, match="requires 2\\^55 elements"):
            verify_bound(2, 11, 5, settings=settings)

    def test_dumps(self, tmp_path, settings):
        report = verify_bound(2, 3, 3, settings=settings, workers=1, dump_dir=tmp_path)

        names = sorted(path.name for path in report.dumps)
        assert names[0] == "partition-q2-n3-r3-affine_G.u32"
        assert all(path.stat().st_size == 504 * 4 for path in report.dumps)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "q, n, r, extended",
        [(2, 5, 5, 41), (2, 3, 7, 201), (5, 3, 3, None), (3, 3, 5, None)],
    )
    def test_larger_parameters_pass(self, q, n, r, extended, settings):
        report = verify_bound(q, n, r, settings=settings, budget=1 << 26, workers=4)

        assert report.passed, report.first_mismatch
        if extended is not None:
            assert report.orbit_counts["pgl_G"] == extended
