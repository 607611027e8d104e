from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from geodetect.core.exceptions import ParameterError
from geodetect.weights.constants import TAU_MIN, TAU_MAX, TYPE_B


class WeightMode(str, Enum):
    DETERMINISTIC_QUANTILE = "deterministic_quantile"
    IID_PARETO = "iid_pareto"


def validate_power_law(tau: float, w0: float) -> None:
    """Raises ParameterError unless tau is in (2, 3) and w0 > 0."""
    if not (TAU_MIN < tau < TAU_MAX):
        raise ParameterError(f"tau must lie in ({TAU_MIN:g}, {TAU_MAX:g}), got {tau}")
    if not w0 > 0:
        raise ParameterError(f"w0 must be positive, got {w0}")


class MomentConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float
    nu: float


class WeightSequence(BaseModel):
    """
    Vertex weights with their power-law tail metadata.

    ``values`` is a read-only float64 array; vertex i has weight values[i].
    The tail constant is fixed to C = w0^(tau - 1).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    tau: float
    w0: float

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value):
        array = np.array(value, dtype=np.float64, copy=True).reshape(-1)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self) -> "WeightSequence":
        validate_power_law(self.tau, self.w0)
        if self.values.size == 0:
            raise ValueError("weight sequence must contain at least one value")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("weights must be finite")
        smallest = float(self.values.min())
        if smallest < self.w0:
            raise ValueError(f"every weight must be >= w0={self.w0}, found {smallest}")
        return self

    @property
    def c_const(self) -> float:
        return self.w0 ** (self.tau - 1.0)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def concat(self, other: "WeightSequence") -> "WeightSequence":
        """Community weights followed by the rest: ids 0..k-1 stay the community."""
        if other.tau != self.tau or other.w0 != self.w0:
            raise ValueError("cannot concatenate sequences with different tau or w0")
        return WeightSequence(
            values=np.concatenate([self.values, other.values]), tau=self.tau, w0=self.w0
        )


class WeightFileContents(BaseModel):
    """Parsed weights or ground-truth file, rows ordered by vertex id."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    values: np.ndarray
    types: Optional[List[str]] = None
    positions: Optional[np.ndarray] = None
    header: Optional[str] = None

    @property
    def community(self) -> Optional[List[int]]:
        if self.types is None:
            return None
        return [vertex for vertex, kind in enumerate(self.types) if kind == TYPE_B]
