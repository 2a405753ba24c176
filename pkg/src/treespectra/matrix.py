"""Symmetric matrices supported on a rooted forest, stored by squared off-diagonals."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .arith import Scalar, ScalarBackend, TreeSpectraError, format_rational
from .trees import RootedForest, ShapeNode, flatten_shapes


logger = logging.getLogger(__name__)


class MatrixFormatError(TreeSpectraError, ValueError):
    """Raised for unreadable matrix JSON."""
    pass


class InvalidMatrixError(TreeSpectraError, ValueError):
    """Raised when matrix data breaks a structural invariant."""
    pass


class Entry(NamedTuple):
    """Diagonal value and squared weight of the edge to the parent."""
    diag: Scalar
    w2: Optional[Scalar] = None


@dataclass(frozen=True)
class WeightedTreeMatrix:
    """
    Matrix with diagonal ``diag`` and one squared off-diagonal entry per edge.

    ``sq_weight[v]`` belongs to the edge between ``v`` and its parent and is
    ``None`` exactly at roots.
    """

    forest: RootedForest
    diag: Tuple[Scalar, ...]
    sq_weight: Tuple[Optional[Scalar], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "diag", tuple(self.diag))
        object.__setattr__(self, "sq_weight", tuple(self.sq_weight))
        n = self.forest.n
        if len(self.diag) != n or len(self.sq_weight) != n:
            raise InvalidMatrixError(
                f"Forest has {n} vertices but got {len(self.diag)} diagonal "
                f"and {len(self.sq_weight)} weight entries"
            )
        for v, p in enumerate(self.forest.parents):
            w2 = self.sq_weight[v]
            if p is None:
                if w2 is not None:
                    raise InvalidMatrixError(f"Root {v} cannot carry an edge weight")
            elif w2 is None or not w2 > 0:
                raise InvalidMatrixError(f"Edge ({v}, {p}) needs a positive squared weight, got {w2}")

    @property
    def n(self) -> int:
        return self.forest.n

    @classmethod
    def from_shapes(cls, roots: Sequence[ShapeNode]) -> "WeightedTreeMatrix":
        """Shapes must carry an ``Entry`` payload on every node."""
        forest, nodes = flatten_shapes(roots)
        diag = []
        weights = []
        for v, node in enumerate(nodes):
            if not isinstance(node.payload, Entry):
                raise InvalidMatrixError(f"Shape node {node.label or v} has no matrix entry")
            diag.append(node.payload.diag)
            weights.append(node.payload.w2 if forest.parents[v] is not None else None)
        return cls(forest, tuple(diag), tuple(weights))

    @classmethod
    def from_edges(
        cls,
        diag: Sequence[Scalar],
        edges: Sequence[Tuple[int, int, Scalar]],
        roots: Sequence[int],
    ) -> "WeightedTreeMatrix":
        """Orient undirected ``(u, v, w2)`` edges away from the given roots."""
        n = len(diag)
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        weight_of: Dict[frozenset, Scalar] = {}
        for u, v, w2 in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidMatrixError(f"Edge ({u}, {v}) leaves the vertex range 0..{n - 1}")
            key = frozenset((u, v))
            if key in weight_of or u == v:
                raise InvalidMatrixError(f"Repeated or looped edge ({u}, {v})")
            weight_of[key] = w2
            graph.add_edge(u, v)
        if n and not nx.is_forest(graph):
            raise InvalidMatrixError("Edges contain a cycle")

        parents: List[Optional[int]] = [None] * n
        seen = set()
        for r in roots:
            if not 0 <= r < n or r in seen:
                raise InvalidMatrixError(f"Root {r} is invalid or shares a component")
            component = nx.node_connected_component(graph, r)
            if component & seen:
                raise InvalidMatrixError(f"Root {r} shares a component with another root")
            seen |= component
            for child, parent in nx.bfs_predecessors(graph, r):
                parents[child] = parent
        if len(seen) != n:
            raise InvalidMatrixError(f"{n - len(seen)} vertices are not reachable from the roots")
        weights = [None if p is None else weight_of[frozenset((v, p))] for v, p in enumerate(parents)]
        return cls(RootedForest(tuple(parents)), tuple(diag), tuple(weights))

    @classmethod
    def from_json(
        cls, data: Dict[str, Any], backend: Optional[ScalarBackend] = None
    ) -> "WeightedTreeMatrix":
        """
        Read ``{diag: [...], edges: [{u, v, w2}], root: i}``.

        Exact backends accept fraction strings and integers; float backends
        also accept JSON numbers. Forests list ``roots`` instead of ``root``.
        """
        backend = backend or ScalarBackend.exact()
        try:
            diag = [backend.coerce(value) for value in data["diag"]]
            edges = [
                (int(edge["u"]), int(edge["v"]), backend.coerce(edge["w2"]))
                for edge in data.get("edges", [])
            ]
            if "root" in data:
                roots = [int(data["root"])]
            else:
                roots = [int(r) for r in data["roots"]]
        except TreeSpectraError as e:
            raise MatrixFormatError(f"Invalid matrix JSON: {e}") from e
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"Matrix JSON rejected: {e!r}")
            raise MatrixFormatError(f"Invalid matrix JSON: missing or malformed {e}") from e
        return cls.from_edges(diag, edges, roots)

    def to_json(self) -> Dict[str, Any]:
        def render(value: Scalar) -> Any:
            return format_rational(value) if isinstance(value, Fraction) else float(value)

        data: Dict[str, Any] = {
            "diag": [render(value) for value in self.diag],
            "edges": [
                {"u": v, "v": p, "w2": render(self.sq_weight[v])} for v, p in self.forest.edges
            ],
        }
        if self.forest.is_tree:
            data["root"] = self.forest.root
        else:
            data["roots"] = list(self.forest.roots)
        return data

    def restrict(self, vertices: Sequence[int]) -> Tuple["WeightedTreeMatrix", Tuple[int, ...]]:
        """Principal submatrix on ``vertices`` plus its new-to-old id map."""
        forest, mapping = self.forest.restrict(vertices)
        diag = tuple(self.diag[old] for old in mapping)
        weights = tuple(
            self.sq_weight[old] if forest.parents[new] is not None else None
            for new, old in enumerate(mapping)
        )
        return WeightedTreeMatrix(forest, diag, weights), mapping

    def truncate(self, level: int) -> Tuple["WeightedTreeMatrix", Tuple[int, ...]]:
        """Restriction to levels ``0..level``."""
        levels = self.forest.levels
        return self.restrict([v for v in range(self.n) if levels[v] <= level])

    def delete_vertex(self, v: int) -> Tuple["WeightedTreeMatrix", Tuple[int, ...]]:
        self.forest.check_vertex(v)
        return self.restrict([u for u in range(self.n) if u != v])

    def to_numpy(self, signs: Optional[Sequence[int]] = None) -> np.ndarray:
        """Dense symmetric matrix with off-diagonal entries ``±sqrt(w2)``."""
        dense = np.diag(np.array([float(value) for value in self.diag], dtype=float))
        for v, p in self.forest.edges:
            entry = math.sqrt(float(self.sq_weight[v]))  # type: ignore[arg-type]
            if signs is not None:
                entry *= signs[v]
            dense[v, p] = dense[p, v] = entry
        return dense

    def eigenvalues(self) -> np.ndarray:
        """Ascending float eigenvalues from LAPACK."""
        if self.n == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh(self.to_numpy())
