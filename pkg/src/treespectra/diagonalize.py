"""
Bottom-up congruence diagonalization of tree matrices and eigenvalue location.

``diagonalize(M, x)`` produces a diagonal matrix congruent to ``M + xI``; by
Sylvester's law of inertia its zero, positive and negative entries count the
eigenvalues of M equal to, above and below ``-x``.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from .arith import Scalar, ScalarBackend, TreeSpectraError, format_rational
from .matrix import WeightedTreeMatrix
from .trees import InvalidTreeError


logger = logging.getLogger(__name__)

ZeroChildChooser = Callable[[Sequence[int]], int]


class LevelRangeError(TreeSpectraError, ValueError):
    """Raised when a truncation level is outside ``0..k``."""
    pass


class LocateResult(NamedTuple):
    """Eigenvalue counts relative to a point."""
    below: int
    mult: int
    above: int


@dataclass(frozen=True)
class DiagOutcome:
    """
    Final diagonal of one diagonalization run.

    ``inertia`` is ``(positive, negative, zero)``.
    """

    d: Tuple[Scalar, ...]
    inertia: Tuple[int, int, int]
    zeros_by_level: Dict[int, int]
    deleted_edges: Tuple[Tuple[int, int], ...]
    root_values: Dict[int, Scalar]
    zero_vertices: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.inertia) != len(self.d):
            raise TreeSpectraError(f"Inertia {self.inertia} does not account for {len(self.d)} entries")
        if sum(self.zeros_by_level.values()) != self.inertia[2]:
            raise TreeSpectraError("Per-level zero counts disagree with the zero count")

    @property
    def n_pos(self) -> int:
        return self.inertia[0]

    @property
    def n_neg(self) -> int:
        return self.inertia[1]

    @property
    def n_zero(self) -> int:
        return self.inertia[2]

    def to_dict(self, exact: bool = True) -> Dict[str, Any]:
        def render(value: Scalar) -> Any:
            if exact and isinstance(value, Fraction):
                return format_rational(value)
            return float(value)

        return {
            "d": [render(value) for value in self.d],
            "inertia": {"positive": self.n_pos, "negative": self.n_neg, "zero": self.n_zero},
            "zeros_by_level": {str(level): count for level, count in sorted(self.zeros_by_level.items())},
            "deleted_edges": [list(edge) for edge in self.deleted_edges],
            "root_values": {str(root): render(value) for root, value in sorted(self.root_values.items())},
            "zero_vertices": list(self.zero_vertices),
        }


def _scalars(M: WeightedTreeMatrix, backend: ScalarBackend) -> Tuple[List[Scalar], List[Optional[Scalar]]]:
    if backend.is_exact:
        diag = [backend.coerce(value) for value in M.diag]
        weights = [None if w2 is None else backend.coerce(w2) for w2 in M.sq_weight]
    else:
        diag = [float(value) for value in M.diag]
        weights = [None if w2 is None else float(w2) for w2 in M.sq_weight]
    return diag, weights


def diagonalize(
    M: WeightedTreeMatrix,
    x: Any,
    backend: Optional[ScalarBackend] = None,
    choose_zero_child: ZeroChildChooser = min,
) -> DiagOutcome:
    """
    Diagonalize ``M + xI`` along the forest, leaves first.

    Args:
        M: Tree (or forest) matrix
        x: Shift added to the diagonal
        backend: Exact rationals (default) or floats with a zero tolerance
        choose_zero_child: Picks one vertex among the zero-valued children

    Returns:
        The final diagonal with its inertia and per-level zero counts
    """
    backend = backend or ScalarBackend.exact()
    shift = backend.coerce(x)
    diag, weights = _scalars(M, backend)
    forest = M.forest

    d: List[Scalar] = [value + shift for value in diag]
    remaining: List[Set[int]] = [set(kids) for kids in forest.children]
    deleted: List[Tuple[int, int]] = []

    for k in forest.order:
        kids = remaining[k]
        if not kids:
            continue
        zero_kids = sorted(c for c in kids if backend.is_zero(d[c]))
        if not zero_kids:
            d[k] = d[k] - sum((weights[c] / d[c] for c in sorted(kids)), 0)  # type: ignore[operator]
            continue
        j = choose_zero_child(zero_kids)
        if j not in zero_kids:
            raise TreeSpectraError(f"Zero-child chooser returned {j}, not one of {zero_kids}")
        d[k] = -weights[j] / 2  # type: ignore[operator]
        d[j] = backend.coerce(2)
        parent = forest.parents[k]
        if parent is not None:
            remaining[parent].discard(k)
            deleted.append((k, parent))

    levels = forest.levels
    signs = [backend.sign(value) for value in d]
    zero_vertices = tuple(v for v, s in enumerate(signs) if s == 0)
    zeros_by_level = {level: 0 for level in range(forest.height + 1)} if forest.n else {}
    for v in zero_vertices:
        zeros_by_level[levels[v]] += 1
    inertia = (signs.count(1), signs.count(-1), len(zero_vertices))
    logger.debug(f"Diagonalized n={forest.n} at x={x}: inertia {inertia}")
    return DiagOutcome(
        d=tuple(d),
        inertia=inertia,
        zeros_by_level=zeros_by_level,
        deleted_edges=tuple(deleted),
        root_values={r: d[r] for r in forest.roots},
        zero_vertices=zero_vertices,
    )


def locate(M: WeightedTreeMatrix, lam: Any, backend: Optional[ScalarBackend] = None) -> LocateResult:
    """Counts of eigenvalues below, equal to and above ``lam``."""
    backend = backend or ScalarBackend.exact()
    outcome = diagonalize(M, -backend.coerce(lam), backend)
    return LocateResult(below=outcome.n_neg, mult=outcome.n_zero, above=outcome.n_pos)


def level_zero_table(
    M: WeightedTreeMatrix, j: int, lam: Any, backend: Optional[ScalarBackend] = None
) -> Dict[int, int]:
    """
    Zero counts per level when diagonalizing the truncation to levels ``0..j`` at ``-lam``.

    Returns:
        Map from each level ``0..j`` to its zero count
    """
    height = M.forest.height
    if not isinstance(j, int) or not 0 <= j <= height:
        logger.error(f"Level {j} requested on a forest of depth {height}")
        raise LevelRangeError(f"Level {j} outside 0..{height}")
    backend = backend or ScalarBackend.exact()
    sub, mapping = M.truncate(j)
    outcome = diagonalize(sub, -backend.coerce(lam), backend)
    original_levels = M.forest.levels
    table = {level: 0 for level in range(j + 1)}
    for v in outcome.zero_vertices:
        table[original_levels[mapping[v]]] += 1
    return table


def root_zero_distance(
    M: WeightedTreeMatrix, lam: Any, backend: Optional[ScalarBackend] = None
) -> Optional[int]:
    """Smallest depth of a zero-valued vertex, or ``None`` when ``lam`` is not an eigenvalue."""
    if not M.forest.is_tree:
        raise InvalidTreeError("Root distance needs a single rooted tree")
    backend = backend or ScalarBackend.exact()
    outcome = diagonalize(M, -backend.coerce(lam), backend)
    if not outcome.zero_vertices:
        return None
    return min(M.forest.depth[v] for v in outcome.zero_vertices)


def _distinct(candidates: Iterable[Any], backend: ScalarBackend) -> List[Scalar]:
    return sorted({backend.coerce(value) for value in candidates})


def count_N(
    M: WeightedTreeMatrix, candidates: Iterable[Any], backend: Optional[ScalarBackend] = None
) -> int:
    """
    Number of candidates leaving a zero at level ``k-1`` of the depth-``k-1`` truncation.

    The result is exact only if ``candidates`` contains every such value.
    """
    backend = backend or ScalarBackend.exact()
    k = M.forest.height
    if k == 0:
        return 0
    return sum(
        1 for lam in _distinct(candidates, backend) if level_zero_table(M, k - 1, lam, backend)[k - 1] > 0
    )


def root_zero_count(
    M: WeightedTreeMatrix, candidates: Iterable[Any], backend: Optional[ScalarBackend] = None
) -> int:
    """Number of candidates whose run leaves a zero at level ``k``."""
    backend = backend or ScalarBackend.exact()
    k = M.forest.height
    count = 0
    for lam in _distinct(candidates, backend):
        outcome = diagonalize(M, -lam, backend)
        if outcome.zeros_by_level.get(k, 0) > 0:
            count += 1
    return count


def extreme_root_check(M: WeightedTreeMatrix, backend: Optional[ScalarBackend] = None) -> bool:
    """
    Check that at the smallest and largest eigenvalue the root is the only zero.

    The extreme eigenvalues come from ``M.eigenvalues()``, so the check runs
    on the float backend.
    """
    root = M.forest.root
    backend = backend if backend is not None and not backend.is_exact else ScalarBackend.floating(1e-7)
    spectrum = M.eigenvalues()
    for lam in (float(spectrum[0]), float(spectrum[-1])):
        outcome = diagonalize(M, -lam, backend)
        if outcome.zero_vertices != (root,):
            logger.debug(f"Extreme eigenvalue {lam}: zeros at {outcome.zero_vertices}, root {root}")
            return False
    return True
