from enum import Enum
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class FMode(str, Enum):
    LOG_N = "log_n"
    SQRT_N = "sqrt_n"
    CUSTOM = "custom"


class Decision(str, Enum):
    REJECT_H0 = "reject_H0"
    KEEP_H0 = "keep_H0"


class DetectionReport(BaseModel):
    n: int
    w_value: float
    f_mode: FMode
    threshold: float
    decision: Decision

    @model_validator(mode="after")
    def _consistent(self) -> "DetectionReport":
        expected = Decision.REJECT_H0 if self.w_value >= self.threshold else Decision.KEEP_H0
        if self.decision is not expected:
            raise ValueError("decision must be reject_H0 exactly when W >= threshold")
        return self


class IdentificationReport(BaseModel):
    """
    Identified vertices and the t_n-restricted view.

    The per-vertex arrays are excluded from JSON; rows() yields them for CSV.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    threshold_constant: float
    t_n: float
    identified: List[int]
    restricted_identified: List[int]
    restricted_truth: Optional[List[int]] = None
    risk: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    caveat: Optional[str] = None

    weights: np.ndarray = Field(exclude=True, repr=False)
    w_local: np.ndarray = Field(exclude=True, repr=False)
    flags: np.ndarray = Field(exclude=True, repr=False)
    truth: Optional[np.ndarray] = Field(default=None, exclude=True, repr=False)

    def rows(self) -> Iterator[Tuple]:
        """(vertex, weight, W_a, flag[, truth]) per vertex."""
        for vertex in range(self.n):
            row = (
                vertex,
                float(self.weights[vertex]),
                float(self.w_local[vertex]),
                int(self.flags[vertex]),
            )
            if self.truth is not None:
                row = row + (int(self.truth[vertex]),)
            yield row


class SizeEstimateReport(BaseModel):
    tau: float
    m_requested: int
    m_used: int
    order_stats: List[float]
    estimates: List[float]
    warning: Optional[str] = None

    @model_validator(mode="after")
    def _check(self) -> "SizeEstimateReport":
        if len(self.order_stats) != self.m_used or len(self.estimates) != self.m_used:
            raise ValueError("one order statistic and one estimate per m")
        if any(a < b for a, b in zip(self.order_stats, self.order_stats[1:])):
            raise ValueError("order statistics must be non-increasing")
        return self


class CalibrationReport(BaseModel):
    threshold_constant: float
    t_n: float
    restricted_size: int
    restricted_community: int
    errors: int
    min_precision: float
    precision: Optional[float] = None
    recall: Optional[float] = None


class PipelineReport(BaseModel):
    detection: DetectionReport
    identification: IdentificationReport
    size_estimate: SizeEstimateReport
