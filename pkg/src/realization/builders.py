"""Matrices for the branch families, the central panels and their assembly."""

import logging
from fractions import Fraction
from typing import Any, Optional, Sequence

from ..treespectra.arith import TreeSpectraError, parse_rational
from ..treespectra.matrix import Entry, WeightedTreeMatrix
from ..treespectra.models import SeedId, SeedPartKind, SeedPartParams, SEED_PART_KIND, UnfoldingSpec
from ..treespectra.trees import ShapeNode
from ..treespectra.unfolding import compose_unfolding, realize_unfolding, seed_part_shape, t1_shape, t2_shape
from .models import PanelWeights


logger = logging.getLogger(__name__)

DEFAULT_WEIGHTS = PanelWeights()


class RealizationError(TreeSpectraError, ValueError):
    """Raised for parameters no realization accepts."""
    pass


def _check_counts(name: str, values: Sequence[int]) -> None:
    if not values:
        raise RealizationError(f"{name} must list at least one count")
    if any(not isinstance(v, int) or v < 1 for v in values):
        raise RealizationError(f"{name} must contain positive integers, got {list(values)}")


def t1_branch(t: Sequence[int], weights: PanelWeights = DEFAULT_WEIGHTS) -> ShapeNode:
    """First-family branch shape with matrix entries; the root carries no edge weight yet."""
    _check_counts("t", t)
    root = t1_shape(t)
    p = len(t)
    root.payload = Entry(Fraction(0))
    for u, ti in zip(root.children, t):
        u.payload = Entry(Fraction(0), Fraction(weights.t1_child, p))
        for leaf in u.children:
            leaf.payload = Entry(Fraction(0), Fraction(weights.t1_leaf, ti))
    return root


def t2_branch(t0: int, t: Sequence[int], weights: PanelWeights = DEFAULT_WEIGHTS) -> ShapeNode:
    _check_counts("t", t)
    _check_counts("t0", [t0])
    root = t2_shape(t0, t)
    p = len(t)
    root.payload = Entry(Fraction(weights.t2_root_diag))
    u_children = [child for child in root.children if child.label == "u"]
    for child in root.children:
        if child.label == "pendant":
            child.payload = Entry(Fraction(weights.t2_pendant_diag), Fraction(weights.t2_pendant, t0))
    for u, ti in zip(u_children, t):
        u.payload = Entry(Fraction(weights.t2_child_diag), Fraction(weights.t2_child, p))
        for leaf in u.children:
            leaf.payload = Entry(Fraction(0), Fraction(weights.t2_leaf, ti))
    return root


def seed_part_branch(
    seed: SeedId, params: SeedPartParams, weights: PanelWeights = DEFAULT_WEIGHTS
) -> ShapeNode:
    """The central panel of ``seed``: pendants and/or children carrying leaves."""
    kind = SEED_PART_KIND[SeedId(seed)]
    if kind in (SeedPartKind.P2, SeedPartKind.P4):
        _check_counts("s0", [params.s0] if params.s0 is not None else [])
    if kind in (SeedPartKind.P3, SeedPartKind.P4):
        _check_counts("s", params.s or [])

    root = seed_part_shape(seed, params)
    if kind == SeedPartKind.P2:
        root_diag, pendant_w2 = weights.p2_root_diag, Fraction(weights.p2_leaf, params.s0 or 1)
    elif kind == SeedPartKind.P3:
        root_diag, pendant_w2 = weights.p3_root_diag, None
    else:
        root_diag, pendant_w2 = weights.p4_root_diag, Fraction(weights.p4_pendant, params.s0 or 1)
    if kind == SeedPartKind.P3:
        child_diag, child_num = weights.p3_child_diag, weights.p3_child
        leaf_diag, leaf_num = weights.p3_leaf_diag, weights.p3_leaf
    else:
        child_diag, child_num = weights.p4_child_diag, weights.p4_child
        leaf_diag, leaf_num = weights.p4_leaf_diag, weights.p4_leaf

    root.payload = Entry(Fraction(root_diag))
    w_children = [child for child in root.children if child.label == "w"]
    for child in root.children:
        if child.label == "pendant":
            child.payload = Entry(Fraction(0), pendant_w2)
    for w, si in zip(w_children, params.s or []):
        w.payload = Entry(Fraction(child_diag), Fraction(child_num, len(w_children)))
        for leaf in w.children:
            leaf.payload = Entry(Fraction(leaf_diag), Fraction(leaf_num, si))
    return root


def build_T1_matrix(t: Sequence[int], weights: Optional[PanelWeights] = None) -> WeightedTreeMatrix:
    """
    First-family branch matrix rooted at ``v1``.

    All diagonals are 0; leaf edges below ``u_i`` carry ``1/t_i`` and the
    root edges ``8/p`` (squared).
    """
    return WeightedTreeMatrix.from_shapes([t1_branch(t, weights or DEFAULT_WEIGHTS)])


def build_T2_matrix(
    t0: int, t: Sequence[int], weights: Optional[PanelWeights] = None
) -> WeightedTreeMatrix:
    return WeightedTreeMatrix.from_shapes([t2_branch(t0, t, weights or DEFAULT_WEIGHTS)])


def build_T0_matrix(
    seed: SeedId, params: SeedPartParams, weights: Optional[PanelWeights] = None
) -> WeightedTreeMatrix:
    return WeightedTreeMatrix.from_shapes([seed_part_branch(seed, params, weights or DEFAULT_WEIGHTS)])


def seed_part_matrix(spec: UnfoldingSpec, weights: Optional[PanelWeights] = None) -> WeightedTreeMatrix:
    """The central panel an unfolding spec selects."""
    return build_T0_matrix(spec.seed, spec.s0_params, weights)


def coerce_coupling(value: Any) -> Fraction:
    """Read a coupling entry (fraction string or number); zero is rejected."""
    if value is None:
        return Fraction(1)
    if isinstance(value, float):
        raise RealizationError(f"Coupling must be rational, got float {value!r}")
    coupling = parse_rational(value) if isinstance(value, str) else Fraction(value)
    if coupling == 0:
        logger.error("Rejected zero coupling for the second-family edges")
        raise RealizationError("coupling2 must be non-zero")
    return coupling


def assemble(
    spec: UnfoldingSpec,
    coupling2: Any = None,
    weights: Optional[PanelWeights] = None,
) -> WeightedTreeMatrix:
    """
    Block matrix of an unfolding, coupled at the central vertex.

    Args:
        spec: Validated unfolding specification
        coupling2: Entry on every centre-to-second-family edge (default 1)
        weights: Panel constants (defaults reproduce the certified panels)

    Returns:
        Matrix whose underlying tree is ``realize_unfolding(spec)``
    """
    weights = weights or DEFAULT_WEIGHTS
    entry2 = coerce_coupling(coupling2)
    first_sq = weights.coupling_sq(spec.seed, spec.q1)

    first = []
    for params in spec.branch1_params:
        root = t1_branch(params.t, weights)
        root.payload = root.payload._replace(w2=first_sq)
        first.append(root)
    second = []
    for params in spec.branch2_params:
        root = t2_branch(params.t0, params.t, weights)
        root.payload = root.payload._replace(w2=entry2 * entry2)
        second.append(root)
    centre = seed_part_branch(spec.seed, spec.s0_params, weights)

    matrix = WeightedTreeMatrix.from_shapes([compose_unfolding(centre, first, second)])
    if matrix.forest.parents != realize_unfolding(spec).parents:
        raise RealizationError("Assembled matrix does not sit on the unfolding tree")
    logger.debug(f"Assembled {spec.seed.value} matrix with n={matrix.n}, coupling2={entry2}")
    return matrix
