"""Data models for unfolding specifications."""

from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, PositiveInt, model_validator


class SeedId(str, Enum):
    """Defective diameter-7 seeds with explicit realizations."""
    S7_7 = "S7-7"
    S7_8 = "S7-8"
    S7_9 = "S7-9"


class SeedPartKind(str, Enum):
    """Shape of the part hanging at the central vertex besides the two branch families."""
    P2 = "P2"  # pendant leaves
    P3 = "P3"  # children carrying leaves
    P4 = "P4"  # pendant leaves plus children carrying leaves


SEED_PART_KIND = {
    SeedId.S7_8: SeedPartKind.P2,
    SeedId.S7_9: SeedPartKind.P3,
    SeedId.S7_7: SeedPartKind.P4,
}


class Branch1Params(BaseModel):
    """Parameters of a first-family branch: leaf counts below its p children."""
    t: List[PositiveInt] = Field(..., min_length=1, description="Leaf counts t_1..t_p")

    @property
    def p(self) -> int:
        return len(self.t)


class Branch2Params(BaseModel):
    """Parameters of a second-family branch."""
    t0: PositiveInt = Field(..., description="Pendant leaves at the branch root")
    t: List[PositiveInt] = Field(..., min_length=1, description="Leaf counts t_1..t_p")

    @property
    def p(self) -> int:
        return len(self.t)


class SeedPartParams(BaseModel):
    """Parameters of the central part: ``s0`` pendant leaves and/or children with ``s`` leaves."""
    s0: Optional[PositiveInt] = Field(default=None, description="Pendant leaves at the centre")
    s: Optional[List[PositiveInt]] = Field(default=None, description="Leaf counts s_1..s_p")

    @property
    def p(self) -> int:
        return len(self.s) if self.s else 0

    def size(self) -> int:
        """Vertices of the central part, centre included."""
        return 1 + (self.s0 or 0) + self.p + sum(self.s or [])


class UnfoldingSpec(BaseModel):
    """Canonical description of one unfolding of a supported seed."""
    seed: SeedId
    q1: PositiveInt = Field(..., description="Number of first-family branches")
    q2: PositiveInt = Field(..., description="Number of second-family branches")
    branch1_params: List[Branch1Params]
    branch2_params: List[Branch2Params]
    s0_params: SeedPartParams

    @model_validator(mode="after")
    def _check_consistency(self) -> "UnfoldingSpec":
        if len(self.branch1_params) != self.q1:
            raise ValueError(f"q1={self.q1} but {len(self.branch1_params)} branch1 entries")
        if len(self.branch2_params) != self.q2:
            raise ValueError(f"q2={self.q2} but {len(self.branch2_params)} branch2 entries")
        kind = SEED_PART_KIND[self.seed]
        part = self.s0_params
        if part.s is not None and len(part.s) == 0:
            raise ValueError("s must list at least one leaf count when given")
        needs_s0 = kind in (SeedPartKind.P2, SeedPartKind.P4)
        needs_s = kind in (SeedPartKind.P3, SeedPartKind.P4)
        if needs_s0 != (part.s0 is not None):
            raise ValueError(f"Seed {self.seed.value} {'requires' if needs_s0 else 'forbids'} s0")
        if needs_s != (part.s is not None):
            raise ValueError(f"Seed {self.seed.value} {'requires' if needs_s else 'forbids'} s")
        return self

    @property
    def seed_part(self) -> SeedPartKind:
        return SEED_PART_KIND[self.seed]

    @classmethod
    def build(
        cls,
        seed: Union[SeedId, str],
        branch1: Sequence[Sequence[int]],
        branch2: Sequence[Tuple[int, Sequence[int]]],
        s0: Optional[int] = None,
        s: Optional[Sequence[int]] = None,
    ) -> "UnfoldingSpec":
        """Shorthand: ``branch1=[(2, 2)]``, ``branch2=[(1, (2, 2))]``."""
        return cls(
            seed=SeedId(seed),
            q1=len(branch1),
            q2=len(branch2),
            branch1_params=[Branch1Params(t=list(t)) for t in branch1],
            branch2_params=[Branch2Params(t0=t0, t=list(t)) for t0, t in branch2],
            s0_params=SeedPartParams(s0=s0, s=list(s) if s is not None else None),
        )
