"""
Oracle Service

Independent brute-force and Monte Carlo verifiers. Expected values come from
naive loops and closed forms only; the fast triangle kernels and the edge
samplers are only ever the object under test. Generator seeds for sampled
graphs are drawn from the oracle seed domain.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from geodetect.core.exceptions import GuardError, ParameterError
from geodetect.core.seeding import DOMAIN_ORACLE, make_rng, replica_seed
from geodetect.generators.schemas import ModelParams
from geodetect.generators.service import model_weights, sample_h0, sample_h1, sample_model
from geodetect.graph.structure import Graph
from geodetect.oracle.constants import (
    DEGREE_K,
    DEGREE_N,
    DEGREE_PROBES,
    DEGREE_REPLICAS,
    DEGREE_SLACK,
    EQUIVALENCE_GRAPHS,
    EQUIVALENCE_N,
    EXACT_MEAN_MAX_N,
    EXACT_MEAN_N,
    EXACT_MEAN_REPLICAS,
    LINEARITY_GRID,
    MARGINAL_K,
    MARGINAL_REPLICAS,
    MIN_DEGREE_REPLICAS,
    MIN_MARGINAL_REPLICAS,
    NAIVE_TRIANGLE_MAX_N,
    QUICK_DEGREE_K,
    QUICK_DEGREE_N,
    QUICK_DEGREE_PROBES,
    QUICK_EXACT_MEAN_REPLICAS,
    R_SQUARED_THRESHOLD,
)
from geodetect.oracle.schemas import OracleReport
from geodetect.triangles.service import all_localized, enumerate_triangles, weighted_triangles
from geodetect.weights.schemas import WeightMode, WeightSequence

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


# ==================== Brute Force ====================


def naive_triangle_count(graph: Graph) -> Tuple[int, List[Triple]]:
    """Triple loop over sorted ids a < b < c; triples come out in lexicographic order."""
    if graph.n > NAIVE_TRIANGLE_MAX_N:
        raise GuardError(f"naive triangle count is limited to n <= {NAIVE_TRIANGLE_MAX_N}")
    adjacency = _dense_adjacency(graph)
    triples: List[Triple] = []
    for a in range(graph.n):
        for b in range(a + 1, graph.n):
            if not adjacency[a, b]:
                continue
            closing = np.flatnonzero(adjacency[a, b + 1:] & adjacency[b, b + 1:]) + b + 1
            triples.extend((a, b, int(c)) for c in closing)
    return len(triples), triples


def naive_weighted_triangles(graph: Graph, ws: WeightSequence) -> float:
    """
    W(G) from the naive triple list: a compensated sum per smallest corner
    in lexicographic order, then a compensated sum of those in vertex order.
    """
    weights = ws.values.tolist()
    _, triples = naive_triangle_count(graph)
    blocks: List[List[float]] = [[] for _ in range(graph.n)]
    for a, b, c in triples:
        blocks[a].append(1.0 / (weights[a] * weights[b] * weights[c]))
    return _compensated_sum(_compensated_sum(block) for block in blocks)


def naive_localized(graph: Graph, ws: WeightSequence) -> np.ndarray:
    """W(a) for every vertex from the naive triple list."""
    weights = ws.values.tolist()
    _, triples = naive_triangle_count(graph)
    terms: List[List[float]] = [[] for _ in range(graph.n)]
    for a, b, c in triples:
        terms[a].append(1.0 / (weights[b] * weights[c]))
        terms[b].append(1.0 / (weights[a] * weights[c]))
        terms[c].append(1.0 / (weights[a] * weights[b]))
    return np.array(
        [(graph.n / (w * w)) * _compensated_sum(row) for w, row in zip(weights, terms)],
        dtype=np.float64,
    )


def exact_expected_w_h0(ws: WeightSequence, mu: float) -> float:
    """
    Exact mean of W under the null model, unordered triangles.

    With M_ij = p_ij / sqrt(w_i w_j) and a zero diagonal, trace(M^3) sums
    p_ab p_bc p_ca / (w_a w_b w_c) over ordered triples of distinct vertices.
    """
    n = ws.n
    if n > EXACT_MEAN_MAX_N:
        raise GuardError(f"exact mean is limited to n <= {EXACT_MEAN_MAX_N}, got {n}")
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    w = ws.values
    probabilities = np.minimum(np.outer(w, w) / (mu * n), 1.0)
    np.fill_diagonal(probabilities, 0.0)
    scaled = probabilities / np.sqrt(np.outer(w, w))
    return float(np.trace(scaled @ scaled @ scaled) / 6.0)


# ==================== Marginal Connection Probability ====================


def marginal_prob_exact(w_i: float, w_j: float, params: ModelParams) -> float:
    """
    Closed-form probability that two community vertices connect, averaged
    over their positions.

    With x = 2^d w_i w_j / scale: factor for x >= 1; below it
    factor * (x + (x - x^gamma) / (gamma - 1)), or factor * x for the
    threshold rule.
    """
    x = 2 ** params.d * w_i * w_j / params.geometric_scale
    factor = params.correction
    if x >= 1.0:
        return factor
    if params.threshold_rule:
        return factor * x
    return factor * (x + (x - x ** params.gamma) / (params.gamma - 1.0))


def check_marginal_prob(
    w_i: float,
    w_j: float,
    params: ModelParams,
    replicas: int = MARGINAL_REPLICAS,
    seed: int = 0,
    name: Optional[str] = None,
) -> OracleReport:
    """
    Edge frequency of community pairs in sampled graphs against the closed form.

    ``replicas`` is the number of observed pairs; see community_pair_frequency.
    """
    if replicas < MIN_MARGINAL_REPLICAS:
        raise GuardError(f"marginal check needs >= {MIN_MARGINAL_REPLICAS} replicas")
    observed, pairs = community_pair_frequency(
        w_i, w_j, params, replicas, make_rng(seed, DOMAIN_ORACLE, 1)
    )
    expected = marginal_prob_exact(w_i, w_j, params)
    stderr = math.sqrt(expected * (1.0 - expected) / pairs)
    x = 2 ** params.d * w_i * w_j / params.geometric_scale
    label = name or f"marginal_prob[{'supercritical' if x >= 1 else 'subcritical'},x={x:.3g}]"
    return OracleReport.from_estimate(label, observed, expected, stderr)


def check_marginal_linearity(
    params: ModelParams,
    grid: Sequence[float] = LINEARITY_GRID,
    replicas: int = MARGINAL_REPLICAS,
    seed: int = 0,
) -> OracleReport:
    """
    R^2 of a straight-line fit of sampled edge frequencies against
    w_i w_j / k over subcritical grid points x = 2^d w_i w_j / scale.
    """
    if replicas < MIN_MARGINAL_REPLICAS:
        raise GuardError(f"linearity check needs >= {MIN_MARGINAL_REPLICAS} replicas")
    products = np.array([x * params.geometric_scale / 2 ** params.d for x in grid])
    if np.any(2 ** params.d * products / params.geometric_scale >= 1.0):
        raise ParameterError("linearity grid must stay subcritical (x < 1)")
    rng = make_rng(seed, DOMAIN_ORACLE, 2)
    frequencies = np.array([
        community_pair_frequency(math.sqrt(p), math.sqrt(p), params, replicas, rng)[0]
        for p in products
    ])
    fit = stats.linregress(products / max(params.k, 1), frequencies)
    r_squared = float(fit.rvalue ** 2)
    logger.info(f"Marginal linearity: slope={fit.slope:.6g} +- {fit.stderr:.2g}, R^2={r_squared:.5f}")
    return OracleReport(
        name="marginal_prob[subcritical_linearity]",
        observed=r_squared,
        expected=1.0,
        stderr=float(fit.stderr),
        z_score=0.0,
        passed=r_squared >= R_SQUARED_THRESHOLD,
        kind="r_squared",
        threshold=R_SQUARED_THRESHOLD,
    )


def community_pair_frequency(
    w_i: float,
    w_j: float,
    params: ModelParams,
    replicas: int,
    rng: np.random.Generator,
) -> Tuple[float, int]:
    """
    Fraction of connected (w_i, w_j) pairs in graphs drawn by sample_h1.

    The community holds k/2 vertices of weight w_i followed by the rest at
    w_j; non-community vertices sit at w0. Only pairs across the two halves
    are counted. Positions are uniform and independent, so these pairs are
    pairwise independent and the binomial standard error applies. Graphs are
    drawn until at least ``replicas`` pairs were observed.

    Returns:
        (frequency, number of observed pairs)
    """
    if params.k < 2:
        raise ParameterError("marginal check needs a community of at least two vertices")
    if min(w_i, w_j) < params.w0:
        raise ParameterError(f"pair weights must be >= w0={params.w0}")
    half = params.k // 2
    community = WeightSequence(
        values=np.concatenate([np.full(half, w_i), np.full(params.k - half, w_j)]),
        tau=params.tau,
        w0=params.w0,
    )
    rest = None
    if params.n > params.k:
        rest = WeightSequence(
            values=np.full(params.n - params.k, params.w0), tau=params.tau, w0=params.w0
        )

    per_graph = half * (params.k - half)
    graphs = -(-replicas // per_graph)
    connected = 0
    for generator_seed in rng.integers(0, 2 ** 32, size=graphs):
        graph, _ = sample_h1(community, rest, params.model_copy(update={"seed": int(generator_seed)}))
        edges = graph.edges()
        across = (edges[:, 0] < half) & (edges[:, 1] >= half) & (edges[:, 1] < params.k)
        connected += int(np.count_nonzero(across))
    return connected / (graphs * per_graph), graphs * per_graph


# ==================== Expected Degrees ====================


def check_expected_degrees(
    params: ModelParams,
    probe_weights: Sequence[float] = DEGREE_PROBES,
    vertex_types: Sequence[str] = ("A",),
    replicas: int = DEGREE_REPLICAS,
    seed: int = 0,
    slack: float = DEGREE_SLACK,
) -> List[OracleReport]:
    """
    Mean degree of chosen vertices over sampled graphs against their weight.

    For every target weight and vertex type the vertex whose weight is
    closest to the target is followed; its actual weight is the expected
    degree. Each replica is one complete graph from sample_h0 (k = 0) or
    sample_h1 with fixed weights and a fresh generator seed, so positions and
    all edges are redrawn. The pass band is |mean - w| <= slack * w + 3 stderr.

    Args:
        params: Model record; k = 0 checks the null model
        probe_weights: Target weights
        vertex_types: "A" (outside the community) and/or "B" (community), ignored for k = 0
        replicas: Number of sampled graphs
        seed: Oracle seed; generator seeds are drawn from its stream
        slack: Relative band for the o(1) term

    Returns:
        One OracleReport per (vertex type, target weight), types in the given order
    """
    if replicas < MIN_DEGREE_REPLICAS:
        raise GuardError(f"degree check needs >= {MIN_DEGREE_REPLICAS} replicas")
    types = ("H0",) if params.k == 0 else tuple(vertex_types)
    for vertex_type in types:
        if vertex_type not in ("H0", "A", "B"):
            raise ParameterError(f"vertex_type must be A or B, got {vertex_type!r}")
    community, rest = model_weights(params)

    suffix = "" if params.apply_correction else "_uncorrected"
    names, vertices, weights = [], [], []
    for vertex_type in types:
        pool = community if vertex_type == "B" else rest
        if pool is None:
            raise ParameterError(f"no vertex of type {vertex_type} to probe")
        offset = params.k if vertex_type == "A" else 0
        label = "H0" if vertex_type == "H0" else f"H1_{vertex_type}"
        for target in probe_weights:
            index = int(np.argmin(np.abs(pool.values - target)))
            names.append(f"expected_degree[{label}{suffix},w={target:g}]")
            vertices.append(offset + index)
            weights.append(float(pool.values[index]))

    degrees = sampled_degrees(params, community, rest, np.array(vertices), replicas, seed)
    reports = []
    for column, (name, weight) in enumerate(zip(names, weights)):
        observed = float(np.mean(degrees[:, column]))
        stderr = float(np.std(degrees[:, column], ddof=1) / math.sqrt(replicas))
        reports.append(OracleReport.from_estimate(name, observed, weight, stderr, slack=slack))
    return reports


def sampled_degrees(
    params: ModelParams,
    community: Optional[WeightSequence],
    rest: Optional[WeightSequence],
    vertices: np.ndarray,
    replicas: int,
    seed: int,
) -> np.ndarray:
    """Degrees of ``vertices`` in ``replicas`` generated graphs, shape (replicas, len(vertices))."""
    rng = make_rng(seed, DOMAIN_ORACLE, 3)
    degrees = np.empty((replicas, vertices.size), dtype=np.float64)
    for replica, generator_seed in enumerate(rng.integers(0, 2 ** 32, size=replicas)):
        sampled = params.model_copy(update={"seed": int(generator_seed)})
        if community is None:
            graph = sample_h0(rest, sampled)
        else:
            graph, _ = sample_h1(community, rest, sampled)
        degrees[replica] = graph.degrees()[vertices]
    return degrees


# ==================== Fast-Path Checks ====================


def check_triangle_equivalence(
    seed: int = 0, graphs: int = EQUIVALENCE_GRAPHS, n: int = EQUIVALENCE_N
) -> OracleReport:
    """
    Fast enumeration, W(G) and W(a) against the naive versions on random
    graphs, alternating null and planted samples. observed counts mismatching
    graphs; the check needs zero.
    """
    mismatches = 0
    for index in range(graphs):
        k = 0 if index % 2 == 0 else max(3, n // 4)
        params = ModelParams(n=n, k=k, seed=replica_seed(seed, index), gamma=5.0, d=2)
        graph, ws, _ = sample_model(params)
        count, triples = naive_triangle_count(graph)
        fast = enumerate_triangles(graph)
        same_set = fast.shape[0] == count and fast.tolist() == [list(t) for t in triples]
        same_w = weighted_triangles(graph, ws) == naive_weighted_triangles(graph, ws)
        same_local = np.array_equal(all_localized(graph, ws), naive_localized(graph, ws))
        if not (same_set and same_w and same_local):
            mismatches += 1
            logger.warning(f"Triangle mismatch on graph {index} ({params.canonical()})")
    return OracleReport.from_estimate("triangle_equivalence", float(mismatches), 0.0, 0.0)


def check_exact_mean_h0(
    seed: int = 0, n: int = EXACT_MEAN_N, replicas: int = EXACT_MEAN_REPLICAS
) -> OracleReport:
    """Monte Carlo mean of W over null samples against exact_expected_w_h0."""
    base = ModelParams(n=n, weight_mode=WeightMode.DETERMINISTIC_QUANTILE, seed=seed)
    _, ws = model_weights(base)
    expected = exact_expected_w_h0(ws, base.mu)
    values = np.array([
        weighted_triangles(sample_h0(ws, base.model_copy(update={"seed": replica_seed(seed, r)})), ws)
        for r in range(replicas)
    ])
    stderr = float(np.std(values, ddof=1) / math.sqrt(replicas))
    return OracleReport.from_estimate("exact_mean_h0", float(values.mean()), expected, stderr)


# ==================== Suite ====================


def run_suite(seed: int = 0, quick: bool = False) -> List[OracleReport]:
    """Runs the pre-registered checks in a fixed order."""
    reports = [
        check_triangle_equivalence(seed, graphs=10 if quick else EQUIVALENCE_GRAPHS),
        check_exact_mean_h0(seed, replicas=QUICK_EXACT_MEAN_REPLICAS if quick else EXACT_MEAN_REPLICAS),
    ]
    reports.extend(_marginal_checks(seed))
    reports.extend(_degree_checks(seed, quick))
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        logger.info(f"{status} {report.name}: observed={report.observed:.6g} expected={report.expected:.6g}")
    return reports


def _marginal_checks(seed: int) -> List[OracleReport]:
    soft = ModelParams(n=MARGINAL_K, k=MARGINAL_K, d=2, gamma=5.0)
    hard = soft.model_copy(update={"gamma": math.inf})

    def weight_for(x: float, params: ModelParams) -> float:
        return math.sqrt(x * params.geometric_scale / 2 ** params.d)

    checks = []
    for x, params, tag in ((2.0, soft, "supercritical"), (0.2, soft, "subcritical"),
                           (1.5, hard, "threshold_supercritical"), (0.3, hard, "threshold_subcritical")):
        w = weight_for(x, params)
        checks.append(check_marginal_prob(w, w, params, seed=seed, name=f"marginal_prob[{tag}]"))
    checks.append(check_marginal_linearity(soft, seed=seed))
    return checks


def _degree_checks(seed: int, quick: bool) -> List[OracleReport]:
    deterministic = WeightMode.DETERMINISTIC_QUANTILE
    if quick:
        null = ModelParams(n=QUICK_DEGREE_N, weight_mode=deterministic, seed=seed)
        reports = check_expected_degrees(null, QUICK_DEGREE_PROBES, seed=seed)
    else:
        null = ModelParams(n=DEGREE_N, weight_mode=deterministic, seed=seed)
        full = ModelParams(n=DEGREE_N, k=DEGREE_K, weight_mode=deterministic, seed=seed)
        reports = check_expected_degrees(null, DEGREE_PROBES, seed=seed)
        reports += check_expected_degrees(full, DEGREE_PROBES, ("A", "B"), seed=seed)

    # negative control: uncorrected type-B degrees sit far above w
    planted = ModelParams(n=QUICK_DEGREE_N, k=QUICK_DEGREE_K, weight_mode=deterministic, seed=seed)
    uncorrected = planted.model_copy(update={"apply_correction": False})
    control = check_expected_degrees(uncorrected, (30.0,), ("B",), seed=seed)[0]
    reports.append(control.inverted("expected_degree[negative_control_uncorrected_B,w=30]"))
    return reports


# ==================== Helpers ====================


def _dense_adjacency(graph: Graph) -> np.ndarray:
    adjacency = np.zeros((graph.n, graph.n), dtype=bool)
    edges = graph.edges()
    adjacency[edges[:, 0], edges[:, 1]] = True
    adjacency[edges[:, 1], edges[:, 0]] = True
    return adjacency


def _compensated_sum(terms) -> float:
    """Neumaier summation in iteration order."""
    total = 0.0
    compensation = 0.0
    for term in terms:
        result = total + term
        if abs(total) >= abs(term):
            compensation += (total - result) + term
        else:
            compensation += (term - result) + total
        total = result
    return total + compensation
