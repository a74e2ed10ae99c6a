"""Unit tests for the batched union-find."""

import numpy as np
import pytest

from goppa_bounds.core.exceptions import ParameterError
from goppa_bounds.services.disjoint_set import DisjointSet


class TestDisjointSet:
    """Test unions, labels and class counts."""

    def test_singletons(self):
        dsu = DisjointSet(5)

        assert len(dsu) == 5
        assert dsu.class_count() == 5
        assert list(dsu.labels()) == [0, 1, 2, 3, 4]

    def test_labels_are_class_minima(self):
        dsu = DisjointSet(8)
        dsu.union(np.array([7, 5, 3]), np.array([5, 3, 6]))
        dsu.union(np.array([1]), np.array([4]))

        assert list(dsu.labels()) == [0, 1, 2, 3, 1, 3, 3, 3]
        assert dsu.class_count() == 4

    def test_chain_in_one_batch(self):
        size = 1000
        dsu = DisjointSet(size)
        dsu.union(np.arange(size - 1, 0, -1), np.arange(size - 2, -1, -1))

        assert dsu.class_count() == 1
        assert np.all(dsu.labels() == 0)

    def test_batch_order_does_not_matter(self):
        rng = np.random.default_rng(13)
        left = rng.integers(0, 500, size=300)
        right = rng.integers(0, 500, size=300)

        forward, backward = DisjointSet(500), DisjointSet(500)
        forward.union(left, right)
        for lo in range(300, 0, -50):
            backward.union(right[lo - 50 : lo], left[lo - 50 : lo])

        assert np.array_equal(forward.labels(), backward.labels())

    def test_find_does_not_modify(self):
        dsu = DisjointSet(4)
        dsu.union(np.array([3]), np.array([2]))
        before = dsu.parent.copy()

        assert list(dsu.find(np.array([3, 2, 1]))) == [2, 2, 1]
        assert np.array_equal(dsu.parent, before)

    def test_mismatched_edges(self):
        with pytest.raises(ParameterError):
            DisjointSet(4).union(np.array([1, 2]), np.array([3]))

    def test_negative_size(self):
        with pytest.raises(ParameterError):
            DisjointSet(-1)
