"""Data models for realization panels and certificates."""

from fractions import Fraction
from typing import Dict

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from ..treespectra.models import SeedId, SeedPartKind, SEED_PART_KIND, UnfoldingSpec


MAX_DISTINCT = 8


class PanelWeights(BaseModel):
    """
    Diagonal entries and squared-weight numerators of every block.

    A squared weight ``c`` on a group of g sibling edges is stored as ``c / g``
    on each of them.
    """

    model_config = ConfigDict(frozen=True)

    # first-family branch
    t1_leaf: PositiveInt = Field(default=1, description="Leaf edges below u_i, over t_i")
    t1_child: PositiveInt = Field(default=8, description="Root-to-u_i edges, over p")

    # second-family branch
    t2_root_diag: int = Field(default=-1, description="Diagonal at the branch root")
    t2_pendant_diag: int = Field(default=-1, description="Diagonal at root pendants")
    t2_pendant: PositiveInt = Field(default=1, description="Pendant edges, over t0")
    t2_child_diag: int = Field(default=1, description="Diagonal at u_i")
    t2_child: PositiveInt = Field(default=5, description="Root-to-u_i edges, over p")
    t2_leaf: PositiveInt = Field(default=2, description="Leaf edges below u_i, over t_i")

    # central part, one panel per seed
    p2_root_diag: int = Field(default=2, description="Centre diagonal with pendants only")
    p2_leaf: PositiveInt = Field(default=3, description="Pendant edges, over s0")
    p3_root_diag: int = Field(default=-1, description="Centre diagonal with children only")
    p3_child_diag: int = Field(default=-2, description="Diagonal at w_i")
    p3_child: PositiveInt = Field(default=18, description="Centre-to-w_i edges, over p")
    p3_leaf_diag: int = Field(default=-1, description="Diagonal at leaves below w_i")
    p3_leaf: PositiveInt = Field(default=2, description="Leaf edges below w_i, over s_i")
    p4_root_diag: int = Field(default=0, description="Centre diagonal with pendants and children")
    p4_pendant: PositiveInt = Field(default=1, description="Pendant edges, over s0")
    p4_child_diag: int = Field(default=-2, description="Diagonal at w_i")
    p4_child: PositiveInt = Field(default=12, description="Centre-to-w_i edges, over p")
    p4_leaf_diag: int = Field(default=-1, description="Diagonal at leaves below w_i")
    p4_leaf: PositiveInt = Field(default=2, description="Leaf edges below w_i, over s_i")

    # centre-to-first-family couplings, over q1
    coupling_p2: PositiveInt = Field(default=5, description="Coupling with a pendant-only centre")
    coupling_p3: PositiveInt = Field(default=8, description="Coupling with a children-only centre")
    coupling_p4: PositiveInt = Field(default=7, description="Coupling with a mixed centre")

    def coupling(self, seed: SeedId) -> int:
        kind = SEED_PART_KIND[SeedId(seed)]
        return {
            SeedPartKind.P2: self.coupling_p2,
            SeedPartKind.P3: self.coupling_p3,
            SeedPartKind.P4: self.coupling_p4,
        }[kind]

    def coupling_sq(self, seed: SeedId, q1: int) -> Fraction:
        return Fraction(self.coupling(seed), q1)


class RealizationCertificate(BaseModel):
    """Evidence that an assembled matrix has at most eight distinct eigenvalues."""

    spec: UnfoldingSpec
    n: PositiveInt = Field(..., description="Vertex count")
    coupling2: str = Field(default="1", description="Entry on the centre-to-second-family edges")
    rational_multiplicities: Dict[str, int] = Field(
        ..., description="Multiplicity at each of -3, -1, 0, 1, 2, 3"
    )
    count_above_3: int = Field(..., ge=0, description="Eigenvalues strictly above 3")
    count_below_neg3: int = Field(..., ge=0, description="Eigenvalues strictly below -3")
    distinct_count_bound: int = Field(..., ge=0, description="Upper bound on distinct eigenvalues")
    gershgorin_bound: PositiveInt = Field(..., description="Integer above every |eigenvalue|")
    oracle_checked: bool = Field(default=False, description="Counts confirmed by Sturm sequences")

    @model_validator(mode="after")
    def _check_accounting(self) -> "RealizationCertificate":
        accounted = sum(self.rational_multiplicities.values()) + self.count_above_3 + self.count_below_neg3
        if accounted != self.n:
            raise ValueError(f"Certificate accounts for {accounted} of {self.n} eigenvalues")
        present = sum(1 for m in self.rational_multiplicities.values() if m > 0)
        if self.distinct_count_bound != present + self.count_above_3 + self.count_below_neg3:
            raise ValueError("distinct_count_bound does not match the multiplicities")
        if self.distinct_count_bound > MAX_DISTINCT:
            raise ValueError(f"Bound {self.distinct_count_bound} exceeds {MAX_DISTINCT}")
        return self
