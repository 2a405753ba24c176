"""Runtime settings read from the environment."""

import logging
import os
from typing import Optional

from pydantic import BaseModel, Field

from .arith import DEFAULT_ZERO_TOLERANCE


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class ToolkitSettings(BaseModel):
    """Process-wide knobs; CLI flags take precedence over these."""

    threads: int = Field(default=1, ge=1, description="Worker cap for batch work")
    zero_tolerance: float = Field(
        default=DEFAULT_ZERO_TOLERANCE, gt=0, description="Float-backend zero tolerance"
    )
    sweep_tolerance: float = Field(
        default=1e-7, gt=0, description="Zero tolerance for float sweeps over random trees"
    )
    oracle_max_n: int = Field(
        default=60, ge=0, description="Largest n cross-checked against the Sturm oracle"
    )
    log_level: str = Field(default="INFO", description="Logging level name")

    @classmethod
    def from_env(cls) -> "ToolkitSettings":
        return cls(
            threads=int(os.getenv("TREESPECTRA_THREADS", "1")),
            zero_tolerance=float(
                os.getenv("TREESPECTRA_ZERO_TOLERANCE", str(DEFAULT_ZERO_TOLERANCE))
            ),
            sweep_tolerance=float(os.getenv("TREESPECTRA_SWEEP_TOLERANCE", "1e-7")),
            oracle_max_n=int(os.getenv("TREESPECTRA_ORACLE_MAX_N", "60")),
            log_level=os.getenv("LOG_LEVEL", "INFO"),
        )


def configure_logging(level: Optional[str] = None) -> None:
    """Install the toolkit's log format on the root logger."""
    logging.basicConfig(
        level=(level or os.getenv("LOG_LEVEL", "INFO")).upper(),
        format=LOG_FORMAT,
    )
