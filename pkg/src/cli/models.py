"""Data models for command-line invocations."""

from enum import Enum, IntEnum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from ..treespectra.arith import BackendMode


SCHEMA_VERSION = "1"


class ExitCode(IntEnum):
    """Process exit codes."""
    OK = 0
    USAGE = 2
    INVARIANT = 3
    CERTIFICATION = 4
    VERIFICATION = 5


class OutputFormat(str, Enum):
    """How command results are rendered on stdout."""
    JSON = "json"
    TEXT = "text"


class ProbeTarget(str, Enum):
    """Trees the probe command knows how to build."""
    S7_7 = "S7-7"
    S7_8 = "S7-8"
    S7_9 = "S7-9"
    FOREST = "forest-T1T3"


class CommandConfig(BaseModel):
    """Validated settings of one invocation."""

    subcommand: str = Field(..., description="diag, realize, verify, probe or charpoly")
    matrix_path: Optional[str] = Field(default=None, description="Matrix JSON input")
    spec_path: Optional[str] = Field(default=None, description="UnfoldingSpec JSON input")
    at: Optional[str] = Field(default=None, description="Point lambda as a fraction string")
    x: Optional[str] = Field(default=None, description="Diagonal shift as a fraction string")
    backend: BackendMode = Field(default=BackendMode.EXACT, description="Scalar backend")
    tolerance: Optional[float] = Field(default=None, ge=0, description="Zero or clustering tolerance")
    rng_seed: int = Field(default=0, description="Base seed for random draws")
    samples: Optional[int] = Field(default=None, ge=0, description="Sample or instance count")
    threads: int = Field(default=1, ge=1, description="Worker cap")
    output_format: OutputFormat = Field(default=OutputFormat.JSON, description="Output rendering")
    candidates: Optional[List[str]] = Field(default=None, description="Candidate eigenvalues")

    @model_validator(mode="after")
    def _check_point(self) -> "CommandConfig":
        if self.subcommand == "diag" and (self.at is None) == (self.x is None):
            raise ValueError("diag needs exactly one of --at or --x")
        if self.backend == BackendMode.FLOAT and self.subcommand == "charpoly":
            raise ValueError("charpoly runs on exact rationals only")
        return self
