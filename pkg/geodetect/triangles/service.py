"""
Triangles Service

Exact triangle enumeration (forward algorithm on a degree ordering) and the
weighted statistics built on it:

- W(G) = sum over triangles {a, b, c} of 1 / (w_a w_b w_c)
- W(a) = (n / w_a^2) * sum over triangles {a, b, c} of 1 / (w_b w_c)

Triangles are put in canonical lexicographic order. W(G) is a compensated sum
per smallest corner, merged in vertex order; W(a) sums the triangles of a in
lexicographic order. Results are bit-identical for every thread count.
"""

import logging
import time
from contextlib import contextmanager
from typing import Iterator, Tuple

import numba
import numpy as np

from geodetect.core.exceptions import ParameterError
from geodetect.graph.structure import Graph
from geodetect.triangles.kernels import (
    block_sums_parallel,
    block_sums_serial,
    compensated_total,
    corner_sums_parallel,
    corner_sums_serial,
    count_forward_parallel,
    count_forward_serial,
    count_per_source_parallel,
    count_per_source_serial,
    fill_forward_parallel,
    fill_forward_serial,
    fill_triangles_parallel,
    fill_triangles_serial,
    vertex_pair_sum,
)
from geodetect.triangles.schemas import TriangleStatistics
from geodetect.weights.schemas import WeightSequence

logger = logging.getLogger(__name__)


@contextmanager
def numba_threads(jobs: int):
    """Runs the block with ``jobs`` numba threads, capped at the configured maximum."""
    previous = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(jobs), numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(previous)


def orient_by_degree(graph: Graph, jobs: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Keeps each edge once, pointing from lower to higher rank in the order
    (degree, id). Rows stay sorted by vertex id.
    """
    degrees = np.ascontiguousarray(graph.degrees(), dtype=np.int64)
    if jobs > 1:
        with numba_threads(jobs):
            out_indptr = _offsets(count_forward_parallel(graph.indptr, graph.indices, degrees))
            out_indices = np.empty(int(out_indptr[-1]), dtype=np.int64)
            fill_forward_parallel(graph.indptr, graph.indices, degrees, out_indptr, out_indices)
    else:
        out_indptr = _offsets(count_forward_serial(graph.indptr, graph.indices, degrees))
        out_indices = np.empty(int(out_indptr[-1]), dtype=np.int64)
        fill_forward_serial(graph.indptr, graph.indices, degrees, out_indptr, out_indices)
    return out_indptr, out_indices


def enumerate_triangles(graph: Graph, jobs: int = 1) -> np.ndarray:
    """
    Every triangle exactly once as a row (a, b, c) with a < b < c, rows in
    lexicographic order.
    """
    out_indptr, out_indices = orient_by_degree(graph, jobs)
    if jobs > 1:
        with numba_threads(jobs):
            counts = count_per_source_parallel(out_indptr, out_indices)
            offsets = _offsets(counts)
            triangles = np.empty((int(offsets[-1]), 3), dtype=np.int64)
            fill_triangles_parallel(out_indptr, out_indices, offsets, triangles)
    else:
        counts = count_per_source_serial(out_indptr, out_indices)
        offsets = _offsets(counts)
        triangles = np.empty((int(offsets[-1]), 3), dtype=np.int64)
        fill_triangles_serial(out_indptr, out_indices, offsets, triangles)

    order = np.lexsort((triangles[:, 2], triangles[:, 1], triangles[:, 0]))
    return np.ascontiguousarray(triangles[order])


def iter_triangles(graph: Graph, jobs: int = 1) -> Iterator[Tuple[int, int, int]]:
    """Streams the triangles of enumerate_triangles as tuples."""
    for a, b, c in enumerate_triangles(graph, jobs).tolist():
        yield a, b, c


def weighted_triangles(graph: Graph, ws: WeightSequence, jobs: int = 1) -> float:
    _require_weights(graph, ws)
    return _global_sum(enumerate_triangles(graph, jobs), ws.values, jobs)


def localized_weighted_triangles(graph: Graph, ws: WeightSequence, a: int) -> float:
    """W(a) for a single vertex, without a global enumeration."""
    _require_weights(graph, ws)
    if not 0 <= a < graph.n:
        raise ParameterError(f"vertex {a} is outside [0, {graph.n})")
    pair_sum = vertex_pair_sum(graph.indptr, graph.indices, ws.values, a)
    w_a = float(ws.values[a])
    return float((graph.n / (w_a * w_a)) * pair_sum)


def all_localized(graph: Graph, ws: WeightSequence, jobs: int = 1) -> np.ndarray:
    """W(a) for every vertex; each vertex walks the edges inside its own neighborhood."""
    _require_weights(graph, ws)
    return _scale_corners(graph.n, ws.values, _corner_sums(graph, ws.values, jobs))


def compute_statistics(graph: Graph, ws: WeightSequence, jobs: int = 1) -> TriangleStatistics:
    """Enumeration, W(G) and every W(a) in one pass."""
    _require_weights(graph, ws)
    started = time.perf_counter()
    triangles = enumerate_triangles(graph, jobs)
    total = _global_sum(triangles, ws.values, jobs)
    per_vertex = _scale_corners(graph.n, ws.values, _corner_sums(graph, ws.values, jobs))
    runtime_ms = int(round((time.perf_counter() - started) * 1000))

    logger.info(
        f"Triangle statistics: n={graph.n}, m={graph.m}, triangles={triangles.shape[0]}, "
        f"W={float(total):.6g}, {runtime_ms} ms on {jobs} thread(s)"
    )
    return TriangleStatistics(
        n=graph.n,
        m=graph.m,
        w_global=float(total),
        triangle_count=int(triangles.shape[0]),
        per_vertex=per_vertex,
        runtime_ms=runtime_ms,
    )


# ==================== Helpers ====================


def _global_sum(triangles: np.ndarray, weights: np.ndarray, jobs: int) -> float:
    starts = np.searchsorted(triangles[:, 0], np.arange(weights.size + 1))
    if jobs > 1:
        with numba_threads(jobs):
            blocks = block_sums_parallel(triangles, starts, weights)
    else:
        blocks = block_sums_serial(triangles, starts, weights)
    return float(compensated_total(blocks))


def _corner_sums(graph: Graph, weights: np.ndarray, jobs: int) -> np.ndarray:
    if jobs > 1:
        with numba_threads(jobs):
            return corner_sums_parallel(graph.indptr, graph.indices, weights)
    return corner_sums_serial(graph.indptr, graph.indices, weights)


def _offsets(counts: np.ndarray) -> np.ndarray:
    offsets = np.zeros(counts.size + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets


def _scale_corners(n: int, weights: np.ndarray, corner: np.ndarray) -> np.ndarray:
    return (n / (weights * weights)) * corner


def _require_weights(graph: Graph, ws: WeightSequence) -> None:
    if ws.n != graph.n:
        raise ParameterError(f"weights cover {ws.n} vertices but the graph has {graph.n}")
