"""Data models for verification reports."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class EntryDistribution(str, Enum):
    """Named sampling distributions for probe matrices."""
    EIGHTHS = "eighths-v1"  # diagonals k/8, k in [-16, 16]; squared weights k/8, k in [1, 16]


class SuiteReport(BaseModel):
    """Outcome of one verification suite."""
    suite: str = Field(..., description="Suite name")
    passed: bool = Field(..., description="True when no check failed")
    checks: int = Field(default=0, ge=0, description="Number of checks run")
    failures: List[Dict[str, Any]] = Field(
        default_factory=list, description="First failing instances, serialized"
    )
    evidence_only: bool = Field(default=False, description="Empirical rather than exact evidence")
    details: Dict[str, Any] = Field(default_factory=dict, description="Suite-specific summary")


class ProbeReport(BaseModel):
    """Distinct-eigenvalue histogram over random matrices on one tree or forest."""
    tree_id: str
    n: int = Field(..., ge=0, description="Vertex count")
    samples: int = Field(..., ge=0, description="Number of sampled matrices")
    rng_seed: int
    distribution: EntryDistribution = Field(default=EntryDistribution.EIGHTHS)
    clustering_tolerance: float = Field(..., ge=0, description="Relative gap threshold")
    histogram: Dict[str, int] = Field(
        default_factory=dict, description="Distinct count -> number of samples"
    )
    min_distinct_found: Optional[int] = Field(default=None, description="Smallest key of histogram")
    floor: int = Field(..., ge=1, description="Fewest distinct eigenvalues any matrix can have")
    floor_respected: bool = True
    designed_sample_distinct: Optional[int] = Field(
        default=None, description="Distinct count of the certified matrix on this tree"
    )
    evidence_only: bool = True

    @model_validator(mode="after")
    def _check_histogram(self) -> "ProbeReport":
        if sum(self.histogram.values()) != self.samples:
            raise ValueError(f"Histogram covers {sum(self.histogram.values())} of {self.samples} samples")
        smallest = min((int(k) for k in self.histogram), default=None)
        if smallest != self.min_distinct_found:
            raise ValueError(f"min_distinct_found {self.min_distinct_found} != smallest key {smallest}")
        return self


class ExclusivityReport(BaseModel):
    """Result of checking that the two pairing identities contradict the trace identity."""
    passed: bool
    samples: int = Field(..., ge=0)
    rng_seed: int
    symbolic: Dict[str, str] = Field(
        default_factory=dict, description="Forced difference per pairing, as a linear form"
    )
    satisfying_samples: int = Field(default=0, description="Samples obeying the trace identity")
    violations_flagged: int = Field(default=0, description="Samples where the pairing forced a repeat")
    counterexamples: List[List[str]] = Field(default_factory=list)


class PropertyCReport(BaseModel):
    """Forest whose distinct-eigenvalue minimum exceeds each component's."""
    component_distinct: Dict[str, int] = Field(
        ..., description="Exact distinct count of each component's witness matrix"
    )
    union_distinct: int = Field(..., description="Exact distinct count of the witness forest")
    floor: int = Field(default=6)
    probe: ProbeReport
    exclusivity: ExclusivityReport
    passed: bool
