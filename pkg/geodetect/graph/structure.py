"""
Graph Structure

Immutable simple undirected graph in compressed sparse row form: one
contiguous neighbor array plus per-vertex offsets, neighbors sorted
ascending within each row.
"""

from typing import Iterable, Tuple, Union

import numpy as np

from geodetect.core.exceptions import ParameterError

EdgeInput = Union[np.ndarray, Iterable[Tuple[int, int]]]


class Graph:
    """Compressed adjacency of a simple undirected graph."""

    __slots__ = ("_n", "_indptr", "_indices")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if indptr.shape != (n + 1,) or indptr[0] != 0 or indptr[-1] != indices.size:
            raise ParameterError("indptr does not describe the neighbor array")
        if indices.size % 2:
            raise ParameterError("neighbor array of an undirected graph must have even length")
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self._n = int(n)
        self._indptr = indptr
        self._indices = indices

    @classmethod
    def from_edge_list(cls, n: int, edges: EdgeInput) -> "Graph":
        """
        Builds the canonical graph from an edge list.

        Duplicates (in either orientation) collapse to one edge. Out-of-range
        ids and self-loops are rejected.
        """
        if n < 0:
            raise ParameterError(f"n must be non-negative, got {n}")
        if not isinstance(edges, np.ndarray):
            edges = list(edges)
        pairs = np.asarray(edges, dtype=np.int64)
        pairs = pairs.reshape(-1, 2)

        if pairs.size:
            if pairs.min() < 0 or pairs.max() >= n:
                bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
                raise ParameterError(f"edge ({bad[0]}, {bad[1]}) has an id outside [0, {n})")
            loops = pairs[:, 0] == pairs[:, 1]
            if loops.any():
                u = pairs[loops][0, 0]
                raise ParameterError(f"self-loop ({u}, {u}) is not allowed")

        low = np.minimum(pairs[:, 0], pairs[:, 1])
        high = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = np.unique(low * max(n, 1) + high)
        low, high = keys // max(n, 1), keys % max(n, 1)

        src = np.concatenate([low, high])
        dst = np.concatenate([high, low])
        order = np.lexsort((dst, src))
        indices = dst[order]
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(n, indptr, indices)

    # ==================== Accessors ====================

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._indices.size // 2

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def degree(self, vertex: int) -> int:
        return int(self._indptr[vertex + 1] - self._indptr[vertex])

    def degrees(self) -> np.ndarray:
        return np.diff(self._indptr)

    def neighbors(self, vertex: int) -> np.ndarray:
        return self._indices[self._indptr[vertex]:self._indptr[vertex + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        position = np.searchsorted(row, v)
        return bool(position < row.size and row[position] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges u < v in lexicographic order."""
        sources = np.repeat(np.arange(self._n, dtype=np.int64), self.degrees())
        forward = self._indices > sources
        return np.column_stack([sources[forward], self._indices[forward]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._n == other._n
            and np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        )

    def __hash__(self):
        return hash((self._n, self._indices.size, self._indices[:16].tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"
