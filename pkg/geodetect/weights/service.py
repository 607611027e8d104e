"""
Weights Service

Power-law weight sequences and their moment constants.

- generate_weights: deterministic quantiles or i.i.d. Pareto draws
- moments / empirical_moments: mean weight and mean inverse weight
- tail_deviation: finite-n check of the tail law 1 - F(x) = C x^(1 - tau)
"""

import logging
import math
from typing import Optional

import numpy as np

from geodetect.core.exceptions import ParameterError
from geodetect.core.seeding import DOMAIN_WEIGHTS_ALL, make_rng
from geodetect.weights.constants import TAIL_GRID_POINTS, TAIL_LOWER_FACTOR
from geodetect.weights.schemas import (
    MomentConstants,
    WeightMode,
    WeightSequence,
    validate_power_law,
)

logger = logging.getLogger(__name__)


def generate_weights(
    count: int,
    tau: float,
    w0: float,
    mode: WeightMode = WeightMode.IID_PARETO,
    seed: int = 0,
    domain: int = DOMAIN_WEIGHTS_ALL,
) -> WeightSequence:
    """
    Generates a power-law weight sequence.

    Args:
        count: Number of vertices
        tau: Tail exponent in (2, 3)
        w0: Minimum weight
        mode: deterministic_quantile gives w_i = w0 * (count / i)^(1/(tau-1)) for
            rank i = 1..count; iid_pareto draws P(X > x) = (w0/x)^(tau-1)
        seed: Run seed (iid_pareto only)
        domain: Seed domain, so community and rest sequences use disjoint streams

    Returns:
        WeightSequence
    """
    validate_power_law(tau, w0)
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")

    mode = WeightMode(mode)
    if mode is WeightMode.DETERMINISTIC_QUANTILE:
        ranks = np.arange(1, count + 1, dtype=np.float64)
        values = w0 * (count / ranks) ** (1.0 / (tau - 1.0))
    else:
        rng = make_rng(seed, domain)
        # numpy's pareto is the Lomax law; shifting by one gives the classic Pareto
        values = w0 * (1.0 + rng.pareto(tau - 1.0, size=count))

    logger.debug(f"Generated {count} weights ({mode.value}, tau={tau}, w0={w0})")
    return WeightSequence(values=values, tau=tau, w0=w0)


def moments(tau: float, w0: float) -> MomentConstants:
    """Population mean weight and mean inverse weight with C = w0^(tau-1)."""
    validate_power_law(tau, w0)
    return MomentConstants(mu=w0 * (tau - 1.0) / (tau - 2.0), nu=(tau - 1.0) / (tau * w0))


def empirical_moments(ws: WeightSequence) -> MomentConstants:
    return MomentConstants(mu=float(np.mean(ws.values)), nu=float(np.mean(1.0 / ws.values)))


def tail_window(ws: WeightSequence) -> tuple:
    """Range [2 w0, n^(1/(tau-1)) / log n] on which the tail law is checked."""
    n = ws.n
    lower = TAIL_LOWER_FACTOR * ws.w0
    upper = n ** (1.0 / (ws.tau - 1.0)) / math.log(n) if n > 1 else lower
    return lower, upper


def tail_deviation(ws: WeightSequence, grid: Optional[np.ndarray] = None) -> float:
    """
    Maximum of |(1 - F_n(x)) x^(tau-1) / C - 1| over the grid.

    The default grid is log-spaced over tail_window(ws). Returns 0.0 when the
    window is empty.
    """
    if grid is None:
        lower, upper = tail_window(ws)
        if upper <= lower:
            return 0.0
        grid = np.geomspace(lower, upper, TAIL_GRID_POINTS)
    grid = np.asarray(grid, dtype=np.float64)

    ordered = np.sort(ws.values)
    above = ws.n - np.searchsorted(ordered, grid, side="right")
    survival = above / ws.n
    ratio = survival * grid ** (ws.tau - 1.0) / ws.c_const
    return float(np.max(np.abs(ratio - 1.0)))
