"""
Torus Geometry

Positions on the d-dimensional unit torus with the sup-norm of per-coordinate
circular distances.
"""

from typing import Union

import numpy as np

from geodetect.core.exceptions import ParameterError
from geodetect.core.seeding import DOMAIN_POSITIONS, make_counter_rng
from geodetect.generators.schemas import TorusPoint

PointLike = Union[TorusPoint, np.ndarray]


def _coords(point: PointLike) -> np.ndarray:
    if isinstance(point, TorusPoint):
        return np.asarray(point.coords, dtype=np.float64)
    return np.asarray(point, dtype=np.float64)


def torus_distance(x: PointLike, y: PointLike) -> float:
    """max_i min(|x_i - y_i|, 1 - |x_i - y_i|), a value in [0, 1/2]."""
    a, b = _coords(x), _coords(y)
    if a.shape != b.shape:
        raise ParameterError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    delta = np.abs(a - b)
    return float(np.max(np.minimum(delta, 1.0 - delta)))


def sample_positions(k: int, d: int, seed: int) -> np.ndarray:
    """
    Uniform positions for vertices 0..k-1.

    Drawn from a counter-based stream: row v consumes draws v*d .. v*d+d-1, so
    a vertex's position depends only on (seed, v, d).
    """
    rng = make_counter_rng(seed, DOMAIN_POSITIONS)
    return rng.random((k, d))
