from typing import Any, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class TriangleStatistics(BaseModel):
    """Global statistic W(G), triangle count and the per-vertex statistics W(a)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    m: int
    w_global: float
    triangle_count: int
    per_vertex: np.ndarray = Field(exclude=True, repr=False)
    runtime_ms: int = 0

    @model_validator(mode="after")
    def _check(self) -> "TriangleStatistics":
        if self.w_global < 0 or (self.w_global == 0) != (self.triangle_count == 0):
            raise ValueError("W must be positive exactly when triangles exist")
        if self.per_vertex.shape != (self.n,) or np.any(self.per_vertex < 0):
            raise ValueError("per-vertex statistics must be n non-negative values")
        return self

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "triangle_count": self.triangle_count,
            "W": self.w_global,
            "runtime_ms": self.runtime_ms,
        }
