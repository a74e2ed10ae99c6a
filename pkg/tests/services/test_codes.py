"""Unit tests for Goppa codes, extensions and equivalence certificates."""

import numpy as np
import pytest

from goppa_bounds.core.exceptions import NotInSError, ParameterError
from goppa_bounds.services.codes import (
    CodeLocus,
    FqCoordinates,
    equivalence_witness,
    extend,
    minimum_distance,
    parity_check,
    syndrome_check,
    write_parity_matrix,
)
from goppa_bounds.services.fields import Backend, Level, TowerParams, build_tower


# =============================================================================
# Fixtures
# =============================================================================


def _first_in_s(tower) -> int:
    elements = np.arange(tower.order)
    return int(elements[tower.in_s(elements)][0])


@pytest.fixture(scope="module")
def tower_253(settings):
    """F_{2^15} with n = 5, r = 3: binary codes of length 32."""
    return build_tower(TowerParams(p=2, t=1, n=5, r=3), Backend.LOG_TABLES, settings=settings)


@pytest.fixture(scope="module")
def tower_423(settings):
    """q = 4, n = 2, r = 3: codes over F_4 of length 16."""
    return build_tower(TowerParams(p=2, t=2, n=2, r=3), Backend.LOG_TABLES, settings=settings)


@pytest.fixture(scope="module")
def alpha_253(tower_253):
    return _first_in_s(tower_253)


@pytest.fixture(scope="module")
def code_253(tower_253, alpha_253):
    return parity_check(tower_253, alpha_253)


@pytest.fixture(scope="module")
def code_423(tower_423):
    return parity_check(tower_423, _first_in_s(tower_423))


@pytest.fixture(scope="module")
def generator_32(tower_253):
    """Generator of F_32^* inside the tower."""
    return int(tower_253.pow(tower_253.primitive_element, (tower_253.order - 1) // 31))


# =============================================================================
# Tests
# =============================================================================


class TestLocusAndCoordinates:
    """Test the locus ordering and F_q coordinates."""

    def test_locus_is_subfield_in_handle_order(self, tower_253):
        locus = CodeLocus.of(tower_253)

        assert len(locus) == 32
        assert np.all(np.diff(locus.elements) > 0)
        assert list(locus.index_of(locus.elements[[3, 0]])) == [3, 0]

    def test_index_of_rejects_foreign_handles(self, tower_253, alpha_253):
        with pytest.raises(ParameterError):
            CodeLocus.of(tower_253).index_of(np.array([alpha_253]))

    def test_fq_coordinates(self, tower_423):
        coordinates = FqCoordinates(tower_423)
        field_elements = tower_423.subfield(Level.F_Q)

        assert coordinates.basis[0] == 1
        assert np.array_equal(coordinates.from_vectors(tower_423, coordinates.to_vectors(field_elements)), field_elements)

    def test_fq_coordinates_reject_outside(self, tower_423):
        with pytest.raises(ParameterError, match="outside F_q"):
            FqCoordinates(tower_423).to_vectors(np.array([tower_423.primitive_element]))


class TestParityCheck:
    """Test C(α) construction."""

    def test_binary_dimension(self, code_253):
        assert code_253.length == 32
        assert code_253.dimension >= 32 - 15
        assert code_253.parity_rows.shape == (15, 32)
        assert code_253.rank == 32 - code_253.dimension

    def test_basis_words_are_codewords(self, tower_253, code_253, alpha_253):
        for word in code_253.basis:
            assert code_253.contains(word)
            assert code_253.syndrome(word) == 0
            assert syndrome_check(tower_253, word, alpha_253)

    def test_unit_vector_is_not_a_codeword(self, tower_253, code_253, alpha_253):
        word = np.zeros(32, dtype=np.int64)
        word[0] = 1

        assert not code_253.contains(word)
        assert not syndrome_check(tower_253, word, alpha_253)

    def test_requires_alpha_in_s(self, tower_253, generator_32):
        with pytest.raises(NotInSError):
            parity_check(tower_253, generator_32)

    def test_q_four_code(self, tower_423, code_423):
        assert code_423.length == 16
        assert code_423.dimension >= 16 - 6
        assert code_423.parity_rows.shape == (12, 32)
        assert np.all(tower_423.in_level(code_423.basis, Level.F_Q))
        for word in code_423.basis:
            assert code_423.contains(word)
            assert syndrome_check(tower_423, word, code_423.alpha)

    def test_q_four_code_is_fq_linear(self, tower_423, code_423):
        w = FqCoordinates(tower_423).basis[1]
        scaled = np.asarray(tower_423.mul(code_423.basis[0], int(w)))

        assert code_423.contains(scaled)

    def test_minimum_distance(self, code_253):
        distance = minimum_distance(code_253, limit=1 << 18)

        assert distance is not None
        # binary irreducible Goppa codes of degree r correct r errors
        assert distance >= 7

    def test_minimum_distance_above_limit(self, code_253):
        assert minimum_distance(code_253, limit=16) is None


class TestSyndromeCheck:
    """Test word validation in the syndrome test."""

    def test_wrong_length(self, tower_253, alpha_253):
        with pytest.raises(ParameterError, match="word length"):
            syndrome_check(tower_253, np.zeros(31, dtype=np.int64), alpha_253)

    def test_entries_outside_fq(self, tower_253, alpha_253):
        word = np.zeros(32, dtype=np.int64)
        word[4] = 2
        with pytest.raises(ParameterError, match="outside F_q"):
            syndrome_check(tower_253, word, alpha_253)


class TestExtendedCode:
    """Test the overall-parity extension."""

    def test_extended_basis(self, tower_253, code_253):
        extended = extend(code_253)

        assert extended.length == 33
        assert extended.dimension == code_253.dimension
        for word in extended.basis:
            assert tower_253.sum(word) == 0
            assert extended.contains(word)
            assert code_253.contains(extended.puncture(word))

    def test_extended_q_four(self, tower_423, code_423):
        extended = extend(code_423)

        assert all(tower_423.sum(w) == 0 for w in extended.basis)
        # 4^10 or more codewords: not enumerated under the default limit
        assert extended.codewords() is None


class TestCertificates:
    """Test Frobenius and affine equivalence certificates."""

    def test_frobenius_permutation(self, tower_253, alpha_253):
        certificate = equivalence_witness(tower_253, alpha_253, "frobenius", i=1)
        locus = CodeLocus.of(tower_253).elements

        assert certificate.image == tower_253.frobenius(alpha_253, 1)
        assert np.array_equal(locus[list(certificate.permutation)], tower_253.frobenius(locus, 1))

    def test_frobenius_moves_codewords(self, tower_253, code_253, alpha_253):
        certificate = equivalence_witness(tower_253, alpha_253, "frobenius", i=2)
        image_code = parity_check(tower_253, certificate.image)

        for word in code_253.basis:
            moved = certificate.push_forward(word)
            assert image_code.contains(moved)
            assert np.array_equal(certificate.pull_back(moved), word)

    def test_affine(self, tower_253, alpha_253, generator_32):
        certificate = equivalence_witness(tower_253, alpha_253, "affine", a=generator_32, b=1)

        assert certificate.image == tower_253.add(tower_253.mul(generator_32, alpha_253), 1)
        assert certificate.scale == tower_253.inv(generator_32)

    def test_chaining(self, tower_253, alpha_253):
        first = equivalence_witness(tower_253, alpha_253, "frobenius", i=1)
        second = equivalence_witness(tower_253, first.image, "frobenius", i=1)
        direct = equivalence_witness(tower_253, alpha_253, "frobenius", i=2)

        chained = first.then(second, tower_253)
        assert chained.image == direct.image
        assert chained.permutation == direct.permutation

    def test_chained_scale_passes_through_frobenius(self, tower_253, alpha_253, generator_32):
        affine = equivalence_witness(tower_253, alpha_253, "affine", a=generator_32, b=1)
        sigma = equivalence_witness(tower_253, affine.image, "frobenius", i=1)

        chained = affine.then(sigma, tower_253)
        assert chained.frobenius_power == 1
        assert chained.scale == tower_253.frobenius(tower_253.inv(generator_32), 1)
        assert chained.scale != tower_253.inv(generator_32)
        source_code = parity_check(tower_253, alpha_253)
        image_code = parity_check(tower_253, chained.image)
        assert chained.columns_match(source_code, image_code)
        assert chained.verify(source_code, image_code)

    def test_chaining_requires_matching_ends(self, tower_253, alpha_253):
        first = equivalence_witness(tower_253, alpha_253, "frobenius", i=1)
        with pytest.raises(ParameterError, match="do not chain"):
            first.then(first, tower_253)

    def test_unknown_kind(self, tower_253, alpha_253):
        with pytest.raises(ParameterError):
            equivalence_witness(tower_253, alpha_253, "inversion")


class TestExport:
    """Test the parity matrix file."""

    def test_write_parity_matrix(self, tmp_path, code_253):
        path = write_parity_matrix(code_253, tmp_path / "parity.txt")
        lines = path.read_text().splitlines()

        assert lines[0].startswith("# p=2 t=1 n=5 r=3 alpha=")
        assert f"dimension={code_253.dimension}" in lines[0]
        assert len(lines) == 1 + 15
        assert all(len(line.split()) == 32 for line in lines[1:])


class TestSyndromeKernelAgreement:
    """Test the parity rows against direct syndrome evaluation at (2,3,3)."""

    def test_random_words(self, tower_233):
        rng = np.random.default_rng(17)
        elements = np.arange(tower_233.order)
        alphas = elements[tower_233.in_s(elements)][:10]

        for alpha in alphas:
            code = parity_check(tower_233, int(alpha))
            assert code.length == 8
            for word in rng.integers(0, 2, size=(100, 8)):
                assert code.contains(word) == syndrome_check(tower_233, word, int(alpha))

    def test_extended_codewords_sum_to_zero(self, tower_233):
        code = parity_check(tower_233, 2)
        words = extend(code).codewords()

        assert words is not None
        assert words.shape[1] == 9
        assert all(tower_233.sum(w) == 0 for w in words)
