"""Disjoint Set - array-backed union-find for orbit partitions.

Unions are applied a batch of edges at a time with numpy: roots are found by
pointer jumping and the larger root is hooked under the smaller one with
``np.minimum.at``. The forest keeps ``parent[i] <= i``, so after compression
every element's label is the smallest index in its class, independent of the
order in which edge batches arrive.
"""

import logging

import numpy as np

from goppa_bounds.core.exceptions import ParameterError

logger = logging.getLogger(__name__)


class DisjointSet:
    """Union-find over the indices 0 .. size-1."""

    def __init__(self, size: int):
        if size < 0:
            raise ParameterError(f"size must be non-negative, got {size}")
        dtype = np.int32 if size < (1 << 31) else np.int64
        self.parent = np.arange(size, dtype=dtype)

    def __len__(self) -> int:
        return int(self.parent.size)

    def find(self, indices: np.ndarray) -> np.ndarray:
        """Roots of the given indices (does not modify the forest)."""
        roots = self.parent[np.asarray(indices)]
        while True:
            above = self.parent[roots]
            if np.array_equal(above, roots):
                return roots
            roots = above

    def union(self, left: np.ndarray, right: np.ndarray) -> int:
        """Merge the classes of left[i] and right[i] for every i.

        Returns:
            Number of hooking rounds needed.
        """
        left = np.asarray(left).ravel()
        right = np.asarray(right).ravel()
        if left.shape != right.shape:
            raise ParameterError("edge endpoint arrays differ in length")
        rounds = 0
        while left.size:
            a, b = self.find(left), self.find(right)
            open_edges = a != b
            if not open_edges.any():
                break
            a, b = a[open_edges], b[open_edges]
            left, right = left[open_edges], right[open_edges]
            np.minimum.at(self.parent, np.maximum(a, b), np.minimum(a, b).astype(self.parent.dtype))
            rounds += 1
        self._shorten(left)
        return rounds

    def _shorten(self, indices: np.ndarray) -> None:
        # point recently merged nodes straight at their roots
        if indices.size:
            self.parent[indices] = self.find(indices)

    def compress(self) -> np.ndarray:
        """Point every node at its root and return the label array."""
        while True:
            grand = self.parent[self.parent]
            if np.array_equal(grand, self.parent):
                return self.parent
            self.parent = grand

    def labels(self) -> np.ndarray:
        """Smallest member index of each element's class."""
        return self.compress().copy()

    def class_count(self) -> int:
        labels = self.compress()
        return int(np.count_nonzero(labels == np.arange(labels.size, dtype=labels.dtype)))
