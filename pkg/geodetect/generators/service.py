"""
Generators Service

Samples graphs under the null model (inhomogeneous random graph) and under
the alternative (planted geometric community).

- connection_prob: the pair probability for every connection context
- sample_h0 / sample_h0_naive: skip sampling and the O(n^2) reference
- sample_h1: community on ids 0..k-1 with torus positions
- sample_model: weights + graph for a ModelParams record
"""

import logging
from typing import Optional, Tuple

import numpy as np

from geodetect.core.exceptions import GuardError, ParameterError
from geodetect.core.seeding import (
    DOMAIN_COMMUNITY_EDGES,
    DOMAIN_CROSS_THINNING,
    DOMAIN_NAIVE_EDGES,
    DOMAIN_NONGEO_EDGES,
    DOMAIN_WEIGHTS_ALL,
    DOMAIN_WEIGHTS_COMMUNITY,
    DOMAIN_WEIGHTS_REST,
    kernel_seed,
    make_rng,
)
from geodetect.generators.constants import INITIAL_EDGE_CAPACITY, NAIVE_MAX_N
from geodetect.generators.geometry import sample_positions
from geodetect.generators.kernels import community_edges, skip_sample_edges
from geodetect.generators.schemas import ConnectionContext, GroundTruth, ModelParams
from geodetect.graph.structure import Graph
from geodetect.weights.schemas import WeightSequence
from geodetect.weights.service import generate_weights

logger = logging.getLogger(__name__)


# ==================== Pair Probabilities ====================


def connection_prob(
    w_i: float,
    w_j: float,
    ctx: ConnectionContext,
    params: ModelParams,
    dist: Optional[float] = None,
) -> float:
    """
    Connection probability of one pair.

    Args:
        w_i, w_j: Pair weights
        ctx: h0, h1_nongeo, h1_geo or h1_sparse_geo
        params: Model record providing mu, C1 and the correction factor
        dist: Torus distance, required for the geometric contexts

    Returns:
        Probability in [0, 1]
    """
    ctx = ConnectionContext(ctx)
    if ctx is ConnectionContext.H0:
        return min(w_i * w_j / (params.mu * params.n), 1.0)
    if ctx is ConnectionContext.H1_NONGEO:
        return params.correction * min(w_i * w_j / (params.mu * params.n), 1.0)

    if dist is None:
        raise ParameterError(f"dist is required for context {ctx.value}")
    if ctx is ConnectionContext.H1_GEO:
        return params.correction * _geometric_factor(
            w_i * w_j / (params.mu * params.k), dist, params
        )
    # sparse community: no correction factor
    return _geometric_factor(w_i * w_j / (params.mu * params.n), dist, params)


def _geometric_factor(reach: float, dist: float, params: ModelParams) -> float:
    volume = dist ** params.d
    if volume <= reach:
        return 1.0
    if params.threshold_rule:
        return 0.0
    return (reach / volume) ** params.gamma


# ==================== Samplers ====================


def sample_h0(ws: WeightSequence, params: ModelParams) -> Graph:
    """Null model: every pair independently with min(w_i w_j / (mu n), 1)."""
    _require_length(ws, params.n, "weights")
    left, right = _skip_sample(ws.values, params.mu * params.n, params.seed)
    graph = Graph.from_edge_list(params.n, np.column_stack([left, right]))
    logger.info(f"Sampled H0 graph: n={graph.n}, m={graph.m}")
    return graph


def sample_h0_naive(ws: WeightSequence, params: ModelParams) -> Graph:
    """Reference O(n^2) null-model sampler, independent of the skip sampler."""
    _require_length(ws, params.n, "weights")
    if params.n > NAIVE_MAX_N:
        raise GuardError(f"naive sampling is limited to n <= {NAIVE_MAX_N}, got {params.n}")
    rows, cols = np.triu_indices(params.n, k=1)
    probabilities = np.minimum(ws.values[rows] * ws.values[cols] / (params.mu * params.n), 1.0)
    rng = make_rng(params.seed, DOMAIN_NAIVE_EDGES)
    keep = rng.random(rows.size) < probabilities
    return Graph.from_edge_list(params.n, np.column_stack([rows[keep], cols[keep]]))


def sample_h1(
    ws_community: WeightSequence,
    ws_rest: Optional[WeightSequence],
    params: ModelParams,
) -> Tuple[Graph, GroundTruth]:
    """
    Alternative model with the community on ids 0..k-1.

    Non-community pairs follow the null rule, community/non-community pairs
    the null rule times the correction factor, and community pairs the
    geometric rule. With ``correct_type_a_pairs`` the factor also applies to
    non-community pairs.
    """
    if params.k == 0:
        raise ParameterError("k = 0 has no community; use sample_h0 for the null model")
    _require_length(ws_community, params.k, "community weights")
    if ws_rest is None:
        if params.n != params.k:
            raise ParameterError("non-community weights are required when k < n")
        weights = np.array(ws_community.values)
    else:
        _require_length(ws_rest, params.n - params.k, "non-community weights")
        weights = np.concatenate([ws_community.values, ws_rest.values])

    k = params.k
    positions = sample_positions(k, params.d, params.seed)

    # Null-rule pairs, then thin by the correction factor where it applies
    left, right = _skip_sample(weights, params.mu * params.n, params.seed)
    in_community_left = left < k
    in_community_right = right < k
    cross = in_community_left != in_community_right
    outside = ~in_community_left & ~in_community_right

    thinning_rng = make_rng(params.seed, DOMAIN_CROSS_THINNING)
    survive = thinning_rng.random(left.size) < params.correction
    if params.correct_type_a_pairs:
        keep = (cross | outside) & survive
    else:
        keep = outside | (cross & survive)

    geo_left, geo_right = community_edges(
        ws_community.values,
        positions,
        params.geometric_scale,
        float(params.gamma) if not params.threshold_rule else 0.0,
        params.threshold_rule,
        params.correction,
        kernel_seed(params.seed, DOMAIN_COMMUNITY_EDGES),
        INITIAL_EDGE_CAPACITY,
    )

    edges = np.column_stack(
        [np.concatenate([left[keep], geo_left]), np.concatenate([right[keep], geo_right])]
    )
    graph = Graph.from_edge_list(params.n, edges)
    truth = GroundTruth(community=frozenset(range(k)), positions=positions)
    logger.info(
        f"Sampled H1 graph: n={graph.n}, k={k}, m={graph.m}, community edges={geo_left.size}"
    )
    return graph, truth


def model_weights(
    params: ModelParams,
) -> Tuple[Optional[WeightSequence], Optional[WeightSequence]]:
    """
    Weight sequences for a model record.

    Returns (None, all weights) for the null model and (community, rest)
    otherwise, each drawn from its own seed domain.
    """
    if params.is_null:
        return None, generate_weights(
            params.n, params.tau, params.w0, params.weight_mode, params.seed, DOMAIN_WEIGHTS_ALL
        )
    community = generate_weights(
        params.k, params.tau, params.w0, params.weight_mode, params.seed, DOMAIN_WEIGHTS_COMMUNITY
    )
    rest = None
    if params.n > params.k:
        rest = generate_weights(
            params.n - params.k, params.tau, params.w0, params.weight_mode, params.seed,
            DOMAIN_WEIGHTS_REST,
        )
    return community, rest


def sample_model(params: ModelParams) -> Tuple[Graph, WeightSequence, Optional[GroundTruth]]:
    """Generates weights and a graph; ground truth is None under the null model."""
    community, rest = model_weights(params)
    if community is None:
        return sample_h0(rest, params), rest, None
    graph, truth = sample_h1(community, rest, params)
    return graph, (community if rest is None else community.concat(rest)), truth


# ==================== Helpers ====================


def _skip_sample(weights: np.ndarray, total: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    if weights.size < 2:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    order = np.argsort(-weights, kind="stable")
    sorted_weights = np.ascontiguousarray(weights[order])
    left, right = skip_sample_edges(
        sorted_weights, float(total), kernel_seed(seed, DOMAIN_NONGEO_EDGES), INITIAL_EDGE_CAPACITY
    )
    return order[left], order[right]


def _require_length(ws: WeightSequence, expected: int, label: str) -> None:
    if ws.n != expected:
        raise ParameterError(f"{label}: expected {expected} values, got {ws.n}")

