import time

import numba
import numpy as np
import pytest

from conftest import complete_graph, random_graph, random_weights, unit_weights
from geodetect.core.exceptions import ParameterError
from geodetect.generators.schemas import ModelParams
from geodetect.generators.service import sample_model
from geodetect.graph.structure import Graph
from geodetect.oracle.service import naive_triangle_count, naive_weighted_triangles
from geodetect.triangles.service import (
    all_localized,
    compute_statistics,
    enumerate_triangles,
    iter_triangles,
    localized_weighted_triangles,
    orient_by_degree,
    weighted_triangles,
)
from geodetect.weights.schemas import WeightSequence


def test_complete_graph_on_four_vertices(k4):
    assert enumerate_triangles(k4).tolist() == [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    assert weighted_triangles(k4, unit_weights(4)) == 4.0
    assert all_localized(k4, unit_weights(4)).tolist() == [12.0] * 4


def test_star_has_no_triangles():
    star = Graph.from_edge_list(6, [(0, v) for v in range(1, 6)])
    assert enumerate_triangles(star).shape == (0, 3)
    assert list(iter_triangles(star)) == []
    assert weighted_triangles(star, unit_weights(6)) == 0.0


def test_weighted_triangle():
    triangle = complete_graph(3)
    ws = WeightSequence(values=[1.0, 2.0, 4.0], tau=2.5, w0=1.0)
    assert weighted_triangles(triangle, unit_weights(3)) == 1.0
    assert weighted_triangles(triangle, ws) == 0.125
    # W(0) = (3 / 1) * 1 / (2 * 4)
    assert localized_weighted_triangles(triangle, ws, 0) == pytest.approx(0.375)


def test_orientation_keeps_each_edge_once(rng):
    graph = random_graph(rng, 40, 150)
    out_indptr, out_indices = orient_by_degree(graph)
    assert out_indptr[-1] == graph.m
    assert out_indices.size == graph.m


def test_orientation_points_up_the_degree_order(rng):
    graph = random_graph(rng, 60, 300)
    degrees = graph.degrees()
    out_indptr, out_indices = orient_by_degree(graph)
    for u in range(graph.n):
        for v in out_indices[out_indptr[u]:out_indptr[u + 1]]:
            assert (degrees[v], v) > (degrees[u], u)
    threaded = orient_by_degree(graph, jobs=4)
    assert np.array_equal(threaded[0], out_indptr)
    assert np.array_equal(threaded[1], out_indices)


def test_enumeration_matches_naive_triple_loop(rng):
    for _ in range(100):
        n = int(rng.integers(3, 40))
        graph = random_graph(rng, n, int(rng.integers(0, 5 * n)))
        _, triples = naive_triangle_count(graph)
        assert enumerate_triangles(graph).tolist() == [list(t) for t in triples]


def test_corner_identity(rng):
    for _ in range(100):
        n = int(rng.integers(3, 50))
        graph = random_graph(rng, n, int(rng.integers(0, 6 * n)))
        ws = random_weights(rng, n)
        localized = all_localized(graph, ws)
        total = weighted_triangles(graph, ws)
        assert np.sum(ws.values * localized) == pytest.approx(3 * n * total, rel=1e-9, abs=1e-12)


def test_single_vertex_statistic_matches_full_pass(rng):
    params = ModelParams(n=400, k=80, seed=5)
    graph, ws, _ = sample_model(params)
    localized = all_localized(graph, ws)
    for vertex in range(0, 400, 7):
        assert localized_weighted_triangles(graph, ws, vertex) == localized[vertex]


def test_results_do_not_depend_on_thread_count():
    graph, ws, _ = sample_model(ModelParams(n=3000, k=300, seed=8))
    serial = compute_statistics(graph, ws, jobs=1)
    threaded = compute_statistics(graph, ws, jobs=4)
    assert serial.w_global == threaded.w_global
    assert serial.triangle_count == threaded.triangle_count
    assert np.array_equal(serial.per_vertex, threaded.per_vertex)


def test_many_seeds_give_identical_bits_for_every_thread_count():
    for seed in range(100):
        graph, ws, _ = sample_model(ModelParams(n=300, k=0 if seed % 2 == 0 else 60, seed=seed))
        serial = compute_statistics(graph, ws, jobs=1)
        assert serial.w_global == naive_weighted_triangles(graph, ws)
        for jobs in (2, 4):
            threaded = compute_statistics(graph, ws, jobs=jobs)
            assert threaded.triangle_count == serial.triangle_count
            assert threaded.w_global == serial.w_global
            assert threaded.per_vertex.tobytes() == serial.per_vertex.tobytes()


@pytest.mark.slow
@pytest.mark.skipif(numba.config.NUMBA_NUM_THREADS < 8, reason="needs 8 numba threads")
def test_statistics_speed_up_on_eight_threads():
    graph, ws, _ = sample_model(ModelParams(n=1_000_000, k=20_000, seed=1))
    compute_statistics(graph, ws, jobs=1)
    compute_statistics(graph, ws, jobs=8)

    def fastest(jobs: int) -> float:
        timings = []
        for _ in range(5):
            start = time.perf_counter()
            compute_statistics(graph, ws, jobs=jobs)
            timings.append(time.perf_counter() - start)
        return min(timings)

    assert fastest(1) >= 3.0 * fastest(8)


def test_statistics_summary(k4):
    stats = compute_statistics(k4, unit_weights(4))
    summary = stats.summary()
    assert set(summary) == {"n", "m", "triangle_count", "W", "runtime_ms"}
    assert (summary["n"], summary["m"], summary["triangle_count"], summary["W"]) == (4, 6, 4, 4.0)
    assert "per_vertex" not in stats.model_dump()


def test_weights_must_cover_graph(k4):
    with pytest.raises(ParameterError):
        weighted_triangles(k4, unit_weights(3))
    with pytest.raises(ParameterError):
        localized_weighted_triangles(k4, unit_weights(4), 4)
