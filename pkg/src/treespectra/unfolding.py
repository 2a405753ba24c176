"""Seed templates, canonical unfoldings and the counterexample trees."""

import logging
from typing import Dict, Optional, Sequence

from .models import (
    SeedId,
    SeedPartKind,
    SeedPartParams,
    SEED_PART_KIND,
    UnfoldingSpec,
)
from .trees import InvalidTreeError, RootedForest, ShapeNode, diameter


logger = logging.getLogger(__name__)

UNFOLDING_DIAMETER = 7


def _leaves(count: int) -> list:
    return [ShapeNode(label="leaf") for _ in range(count)]


def t1_shape(t: Sequence[int]) -> ShapeNode:
    """Root ``v1`` with p children, the i-th carrying ``t[i]`` leaves."""
    return ShapeNode(
        label="v1",
        children=[ShapeNode(label="u", children=_leaves(ti)) for ti in t],
    )


def t2_shape(t0: int, t: Sequence[int]) -> ShapeNode:
    """Root ``v2`` with ``t0`` pendant leaves and p children carrying leaves."""
    pendants = [ShapeNode(label="pendant") for _ in range(t0)]
    return ShapeNode(
        label="v2",
        children=pendants + [ShapeNode(label="u", children=_leaves(ti)) for ti in t],
    )


def seed_part_shape(seed: SeedId, params: SeedPartParams) -> ShapeNode:
    """The central vertex together with the part of the unfolding it owns."""
    kind = SEED_PART_KIND[SeedId(seed)]
    children = []
    if kind in (SeedPartKind.P2, SeedPartKind.P4):
        children.extend(ShapeNode(label="pendant") for _ in range(params.s0 or 0))
    if kind in (SeedPartKind.P3, SeedPartKind.P4):
        children.extend(ShapeNode(label="w", children=_leaves(si)) for si in params.s or [])
    return ShapeNode(label="v", children=children)


def compose_unfolding(
    centre: ShapeNode, first: Sequence[ShapeNode], second: Sequence[ShapeNode]
) -> ShapeNode:
    """Hang both branch families at the central vertex, after its own children."""
    return ShapeNode(
        label=centre.label,
        children=list(centre.children) + list(first) + list(second),
        payload=centre.payload,
    )


def unfolding_shape(spec: UnfoldingSpec) -> ShapeNode:
    return compose_unfolding(
        seed_part_shape(spec.seed, spec.s0_params),
        [t1_shape(b.t) for b in spec.branch1_params],
        [t2_shape(b.t0, b.t) for b in spec.branch2_params],
    )


def realize_unfolding(spec: UnfoldingSpec) -> RootedForest:
    """
    Build the tree described by ``spec``, rooted at the central vertex.

    Args:
        spec: Validated unfolding specification

    Returns:
        Tree whose root is the central vertex (id ``n - 1``)
    """
    tree = RootedForest.from_shapes([unfolding_shape(spec)])
    found = diameter(tree)
    if found != UNFOLDING_DIAMETER:
        raise InvalidTreeError(f"Unfolding has diameter {found}, expected {UNFOLDING_DIAMETER}")
    logger.debug(f"Realized {spec.seed.value} unfolding with {tree.n} vertices")
    return tree


def unfolding_vertex_count(spec: UnfoldingSpec) -> int:
    """Closed-form vertex count, independent of tree construction."""
    count = spec.s0_params.size()
    count += sum(1 + b.p + sum(b.t) for b in spec.branch1_params)
    count += sum(1 + b.t0 + b.p + sum(b.t) for b in spec.branch2_params)
    return count


def seed_spec(seed: SeedId) -> UnfoldingSpec:
    """All parameters 1: the seed itself."""
    seed = SeedId(seed)
    kind = SEED_PART_KIND[seed]
    s0: Optional[int] = 1 if kind in (SeedPartKind.P2, SeedPartKind.P4) else None
    s = [1] if kind in (SeedPartKind.P3, SeedPartKind.P4) else None
    return UnfoldingSpec.build(seed, branch1=[[1]], branch2=[(1, [1])], s0=s0, s=s)


_COUNTEREXAMPLE_PARTS: Dict[SeedId, Dict[str, Optional[list]]] = {
    SeedId.S7_8: {"s0": 1, "s": None},
    SeedId.S7_9: {"s0": None, "s": [1]},
    SeedId.S7_7: {"s0": 1, "s": [1]},
}


def counterexample_spec(seed: SeedId) -> UnfoldingSpec:
    """
    Unfolding with two copies of each 7- and 8-vertex branch.

    Realizes the non-diminimal trees on 32, 33 and 34 vertices.
    """
    seed = SeedId(seed)
    part = _COUNTEREXAMPLE_PARTS[seed]
    return UnfoldingSpec.build(
        seed,
        branch1=[[2, 2], [2, 2]],
        branch2=[(1, [2, 2]), (1, [2, 2])],
        s0=part["s0"],  # type: ignore[arg-type]
        s=part["s"],
    )


def build_counterexample(seed: SeedId) -> RootedForest:
    return realize_unfolding(counterexample_spec(seed))
