import math
from enum import Enum
from typing import FrozenSet, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from geodetect.weights.schemas import WeightMode, validate_power_law
from geodetect.weights.service import moments


class ConnectionContext(str, Enum):
    H0 = "h0"
    H1_NONGEO = "h1_nongeo"
    H1_GEO = "h1_geo"
    H1_SPARSE_GEO = "h1_sparse_geo"


class ModelParams(BaseModel):
    """
    Full parameter record of one model instance.

    Single source of truth for the derived constants mu and C1. k = 0 means
    the null model.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    k: int = 0
    tau: float = 2.5
    w0: float = 1.0
    d: int = 2
    gamma: float = 5.0
    seed: int = 0
    sparse_mode: bool = False
    weight_mode: WeightMode = WeightMode.IID_PARETO
    apply_correction: bool = True
    correct_type_a_pairs: bool = False

    @field_validator("gamma", mode="before")
    @classmethod
    def _parse_gamma(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞"):
            return math.inf
        return value

    @model_validator(mode="after")
    def _check(self) -> "ModelParams":
        validate_power_law(self.tau, self.w0)
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 0 <= k <= n, got k={self.k}, n={self.n}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1 or inf, got {self.gamma}")
        return self

    @field_serializer("gamma")
    def _serialize_gamma(self, gamma: float):
        return "inf" if math.isinf(gamma) else gamma

    # ==================== Derived Constants ====================

    @property
    def is_null(self) -> bool:
        return self.k == 0

    @property
    def threshold_rule(self) -> bool:
        return math.isinf(self.gamma)

    @property
    def mu(self) -> float:
        return moments(self.tau, self.w0).mu

    @property
    def c1(self) -> float:
        """C1 = (1 + 1/(gamma - 1)) 2^d, which is 2^d for the threshold rule."""
        if self.threshold_rule:
            return float(2 ** self.d)
        return (1.0 + 1.0 / (self.gamma - 1.0)) * 2 ** self.d

    @property
    def correction(self) -> float:
        """
        Down-scaling 1/(1 + C1) of community/non-community pairs.

        1 when disabled and in sparse mode: there the cross pairs (h1_nongeo)
        keep the plain null probability, not divided by 1 + C1.
        """
        if not self.apply_correction or self.sparse_mode:
            return 1.0
        return 1.0 / (1.0 + self.c1)

    @property
    def geometric_scale(self) -> float:
        """mu k for the localized community, mu n for the sparse variant."""
        return self.mu * (self.n if self.sparse_mode else self.k)

    def canonical(self) -> str:
        gamma = "inf" if self.threshold_rule else repr(float(self.gamma))
        return (
            f"n={self.n};k={self.k};tau={self.tau!r};w0={self.w0!r};d={self.d};gamma={gamma};"
            f"seed={self.seed};sparse={int(self.sparse_mode)};weights={self.weight_mode.value};"
            f"correction={int(self.apply_correction)};correct_aa={int(self.correct_type_a_pairs)}"
        )


class TorusPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...]

    @field_validator("coords")
    @classmethod
    def _in_unit_cube(cls, coords):
        if not coords:
            raise ValueError("a torus point needs at least one coordinate")
        if any(not (0.0 <= x < 1.0) for x in coords):
            raise ValueError(f"coordinates must lie in [0, 1), got {coords}")
        return coords

    @property
    def d(self) -> int:
        return len(self.coords)


class GroundTruth(BaseModel):
    """Community ids 0..k-1 and their torus positions (row v = vertex v)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    community: FrozenSet[int]
    positions: np.ndarray

    @field_validator("positions", mode="before")
    @classmethod
    def _as_array(cls, value):
        array = np.array(value, dtype=np.float64, copy=True)
        if array.ndim != 2:
            raise ValueError("positions must be a (k, d) array")
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self) -> "GroundTruth":
        k = len(self.community)
        if self.positions.shape[0] != k:
            raise ValueError(f"{self.positions.shape[0]} positions for a community of {k}")
        if self.community != frozenset(range(k)):
            raise ValueError("community vertices must occupy ids 0..k-1")
        return self

    @property
    def k(self) -> int:
        return len(self.community)

    def membership(self, n: int) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        mask[: self.k] = True
        return mask
