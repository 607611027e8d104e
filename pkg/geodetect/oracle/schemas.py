import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from geodetect.oracle.constants import Z_THRESHOLD


class OracleReport(BaseModel):
    """
    Outcome of one check.

    kind "z": pass iff |z_score| <= threshold. kind "r_squared": observed is R^2
    and pass iff observed >= threshold. kind "negative_control": pass iff
    |z_score| > threshold.
    """

    model_config = ConfigDict(populate_by_name=True)

    name: str
    observed: float
    expected: float
    stderr: float
    z_score: float
    passed: bool = Field(alias="pass")
    kind: Literal["z", "r_squared", "negative_control"] = "z"
    threshold: float = Z_THRESHOLD

    @model_validator(mode="after")
    def _consistent(self) -> "OracleReport":
        if self.kind == "z":
            should_pass = abs(self.z_score) <= self.threshold
        elif self.kind == "negative_control":
            should_pass = abs(self.z_score) > self.threshold
        else:
            should_pass = self.observed >= self.threshold
        if self.passed != should_pass:
            raise ValueError(f"{self.name}: pass flag disagrees with its statistic")
        return self

    @classmethod
    def from_estimate(
        cls,
        name: str,
        observed: float,
        expected: float,
        stderr: float,
        slack: float = 0.0,
        threshold: float = Z_THRESHOLD,
    ) -> "OracleReport":
        """
        z = excess / stderr with excess = max(|observed - expected| - slack * |expected|, 0).

        A zero stderr gives z = 0 for an (almost) exact match and inf otherwise.
        """
        excess = max(abs(observed - expected) - slack * abs(expected), 0.0)
        if stderr > 0:
            z_score = excess / stderr
        else:
            z_score = 0.0 if excess <= 1e-12 * max(1.0, abs(expected)) else math.inf
        if observed < expected:
            z_score = -z_score
        return cls(
            name=name,
            observed=observed,
            expected=expected,
            stderr=stderr,
            z_score=z_score,
            passed=abs(z_score) <= threshold,
            threshold=threshold,
        )

    def inverted(self, name: str) -> "OracleReport":
        """Negative control: passes exactly when this check fails."""
        return OracleReport(
            name=name,
            observed=self.observed,
            expected=self.expected,
            stderr=self.stderr,
            z_score=self.z_score,
            passed=abs(self.z_score) > self.threshold,
            kind="negative_control",
            threshold=self.threshold,
        )
