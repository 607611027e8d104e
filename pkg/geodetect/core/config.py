from typing import Optional
import logging
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    PROJECT_NAME: str = "geodetect"
    LOG_LEVEL: str = "INFO"

    # Run control
    SEED: int = 0
    JOBS: int = 1
    OUT: str = "out"

    # Model defaults
    TAU: float = 2.5
    W0: float = 1.0
    D: int = 2
    GAMMA: float = 5.0
    WEIGHT_MODE: str = "iid_pareto"

    # Inference defaults
    F_MODE: str = "log_n"
    F_CUSTOM: Optional[float] = None
    CALIB_C: float = 1.0
    T_N: Optional[float] = None
    M: int = 20

    # Results ledger, relative to OUT
    RESULTS_DB: str = "experiments.db"

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="GEODETECT_", case_sensitive=True, extra="ignore"
    )


def load_settings(config_path: Optional[str] = None, **overrides) -> Settings:
    """
    Builds the run settings.

    Precedence: explicit overrides (CLI flags) > config file > environment > defaults.
    Overrides passed as None are treated as not given.
    """
    init_kwargs = {key: value for key, value in overrides.items() if value is not None}
    if config_path:
        loaded = Settings(_env_file=config_path, **init_kwargs)
    else:
        loaded = Settings(**init_kwargs)

    logger.debug("=" * 50)
    logger.debug("Configuration loaded:")
    logger.debug(f"CONFIG FILE: {config_path or 'NOT SET'}")
    logger.debug(f"SEED: {loaded.SEED}  JOBS: {loaded.JOBS}  OUT: {loaded.OUT}")
    logger.debug(f"MODEL: tau={loaded.TAU} w0={loaded.W0} d={loaded.D} gamma={loaded.GAMMA}")
    logger.debug("=" * 50)
    return loaded

