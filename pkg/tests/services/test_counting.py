"""Unit tests for cyclotomic profiles, matrix counts and F_s roots."""

import numpy as np
import pytest

from goppa_bounds.core.exceptions import CapacityError, ParameterError, UnsupportedCaseError
from goppa_bounds.services.actions import ProjectiveMap
from goppa_bounds.services.counting import (
    HypothesesNotMet,
    MatrixOrderCount,
    cyclotomic_profile,
    enumerate_matrices_of_order,
    euler_phi,
    fs_factor_degrees,
    fs_factor_degrees_observed,
    fs_root_union,
    fs_roots_in_S,
    has_irreducible_characteristic_polynomial,
    level_isomorphism,
    maps_of_order,
    matrix_order_count,
    multiplicative_order,
)
from goppa_bounds.services.fields import Level


# =============================================================================
# Fixtures
# =============================================================================


@pytest.fixture(scope="module")
def order_three_maps(tower_233):
    """Maps of projective order 3 in PGL(2, 8) with irreducible characteristic polynomial."""
    return maps_of_order(tower_233, 3)


# =============================================================================
# Tests
# =============================================================================


class TestIntegerTools:
    """Test totient and multiplicative order."""

    @pytest.mark.parametrize("k, expected", [(1, 1), (7, 6), (10, 4), (17, 16)])
    def test_euler_phi(self, k, expected):
        assert euler_phi(k) == expected

    @pytest.mark.parametrize("q, k, expected", [(2, 7, 3), (27, 7, 2), (4, 5, 2), (3, 1, 1)])
    def test_multiplicative_order(self, q, k, expected):
        assert multiplicative_order(q, k) == expected

    def test_multiplicative_order_needs_coprime(self):
        with pytest.raises(ParameterError):
            multiplicative_order(4, 6)


class TestCyclotomicProfile:
    """Test the splitting of cyclotomic polynomials."""

    def test_quadratic_splitting(self):
        profile = cyclotomic_profile(27, 7)

        assert (profile.d, profile.factor_count, profile.quadratic_count) == (2, 3, 3)
        assert profile.phi == 6

    def test_linear_splitting_has_no_quadratics(self):
        profile = cyclotomic_profile(8, 7)

        assert profile.d == 1
        assert profile.quadratic_count == 0

    def test_characteristic_dividing_k(self):
        with pytest.raises(UnsupportedCaseError):
            cyclotomic_profile(9, 6)


class TestMatrixOrderCount:
    """Test the closed-form count of order-k matrices."""

    @pytest.mark.parametrize(
        "q, k, expected",
        [
            (27, 7, 2106),
            (8, 3, 56),
            (4, 5, 24),
            (9, 10, 144),
            (16, 17, 1920),
            (27, 4, 702),
            (25, 13, 3600),
            (25, 26, 3600),
        ],
    )
    def test_closed_form(self, q, k, expected):
        outcome = matrix_order_count(q, k)

        assert isinstance(outcome, MatrixOrderCount)
        assert outcome.total == expected
        assert outcome.class_size == q * (q - 1)

    def test_hypotheses_not_met(self):
        outcome = matrix_order_count(8, 7)

        assert isinstance(outcome, HypothesesNotMet)
        assert any("Q−1" in reason for reason in outcome.reasons)

    def test_non_prime_power(self):
        with pytest.raises(ParameterError):
            matrix_order_count(12, 5)

    @pytest.mark.parametrize("q, k", [(8, 3), (4, 5), (9, 10), (16, 17), (25, 13), (25, 26)])
    def test_brute_force_agrees(self, q, k, settings):
        assert enumerate_matrices_of_order(q, k, settings=settings) == matrix_order_count(q, k).total

    @pytest.mark.slow
    def test_brute_force_q27(self, settings):
        assert enumerate_matrices_of_order(27, 7, settings=settings) == 2106

    def test_brute_force_budget(self, settings):
        with pytest.raises(CapacityError, match="matrix quadruples"):
            enumerate_matrices_of_order(64, 5, settings=settings)


class TestFsDegrees:
    """Test predicted factor degrees of F_s."""

    def test_predicted_degrees(self, order_three_maps):
        prediction = fs_factor_degrees(order_three_maps[0], 2)

        assert prediction.projective_order == 3
        assert prediction.permitted_degrees == frozenset({1, 2, 3, 6})
        assert prediction.nonlinear_degrees == frozenset({3, 6})

    def test_identity_rejected(self, tower_233):
        with pytest.raises(ParameterError):
            fs_factor_degrees(ProjectiveMap.identity(tower_233), 1)

    def test_observed_degrees_are_permitted(self, order_three_maps, tower_233):
        m = order_three_maps[0]
        observed = fs_factor_degrees_observed(tower_233, m, 1)

        assert sum(observed) == 9
        assert set(observed) <= fs_factor_degrees(m, 1).permitted_degrees

    def test_level_isomorphism_is_a_bijection(self, tower_233):
        field, to_copy = level_isomorphism(tower_233, Level.F_QN)

        assert field.order == 8
        assert sorted(to_copy.values()) == list(range(8))
        a, b = (int(x) for x in tower_233.subfield(Level.F_QN)[2:4])
        assert to_copy[tower_233.mul(a, b)] == int(field(to_copy[a]) * field(to_copy[b]))


class TestFsRoots:
    """Test roots of F_s in S."""

    def test_order_three_map_count(self, order_three_maps):
        assert len(order_three_maps) == 56
        assert all(has_irreducible_characteristic_polynomial(m) for m in order_three_maps)

    def test_each_map_has_nine_roots(self, tower_233, order_three_maps):
        assert {fs_roots_in_S(tower_233, m, 1) for m in order_three_maps} == {9}

    def test_roots_cover_s(self, tower_233, order_three_maps):
        union = fs_root_union(tower_233, order_three_maps, 1)

        assert union.size == 504
        assert np.all(tower_233.in_s(union))

    def test_empty_union(self, tower_233):
        assert fs_root_union(tower_233, [], 1).size == 0
