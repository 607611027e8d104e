from enum import Enum
from pathlib import Path
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from geodetect.generators.schemas import ModelParams
from geodetect.inference.schemas import FMode


class ExperimentKind(str, Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"
    CUSTOM = "custom"


class Scale(str, Enum):
    DESK = "desk"
    PAPER = "paper"


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    experiment: ExperimentKind
    scale: Scale = Scale.DESK
    params: ModelParams
    replicas: int
    output_dir: Path
    ks: List[int] = Field(default_factory=list)
    t_n: Optional[float] = None
    calib_c: Optional[float] = None
    M: int = 20
    f_mode: FMode = FMode.LOG_N
    f_custom: Optional[float] = None
    jobs: int = 1

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if self.replicas < 1:
            raise ValueError(f"replicas must be >= 1, got {self.replicas}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")
        if self.experiment is ExperimentKind.FIG1 and not self.ks:
            raise ValueError("fig1 needs at least one community size in ks")
        if self.experiment is not ExperimentKind.FIG1 and self.params.k == 0:
            raise ValueError(f"{self.experiment.value} needs a community (k >= 1)")
        return self

    def run_key(self) -> str:
        ks = ",".join(str(k) for k in self.ks)
        return (
            f"{self.experiment.value};scale={self.scale.value};replicas={self.replicas};ks={ks};"
            f"t_n={self.t_n!r};calib_c={self.calib_c!r};M={self.M};f={self.f_mode.value}:{self.f_custom!r};"
            f"{self.params.canonical()}"
        )


class ReplicaOutcome(BaseModel):
    """Result of one replica; failed replicas carry the error and no values."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    hypothesis: str
    k: int
    replica: int
    seed: int
    status: str
    w_value: Optional[float] = None
    triangle_count: Optional[int] = None
    error: Optional[str] = None
    payload: Any = Field(default=None, exclude=True, repr=False)
