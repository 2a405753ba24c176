"""Rooted forests, levels, diameter, branches and branch duplication."""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .arith import TreeSpectraError


logger = logging.getLogger(__name__)


class InvalidTreeError(TreeSpectraError, ValueError):
    """Raised when parent links do not describe a rooted forest."""
    pass


class TreeFormatError(TreeSpectraError, ValueError):
    """Raised for malformed tree text or JSON."""
    pass


class DiameterChangeError(TreeSpectraError):
    """Raised when a branch duplication would change the diameter."""
    pass


@dataclass
class ShapeNode:
    """Nested description of a rooted tree; ``payload`` is free for callers."""

    children: List["ShapeNode"] = field(default_factory=list)
    label: str = ""
    payload: Any = None


@dataclass(frozen=True)
class RootedForest:
    """
    Vertices ``0..n-1`` with parent links.

    Levels run bottom-up inside each component: the root of a component of
    height h sits at level h and its deepest leaves at level 0.
    """

    parents: Tuple[Optional[int], ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        parents = tuple(self.parents)
        object.__setattr__(self, "parents", parents)
        n = len(parents)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise InvalidTreeError(f"Expected {n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)
        for v, p in enumerate(parents):
            if p is None:
                continue
            if not isinstance(p, int) or not 0 <= p < n or p == v:
                raise InvalidTreeError(f"Vertex {v} has invalid parent {p!r}")

        depth = [-1] * n
        root_of = [-1] * n
        for v in range(n):
            path: List[int] = []
            on_path = set()
            u: Optional[int] = v
            while u is not None and depth[u] < 0:
                if u in on_path:
                    raise InvalidTreeError(f"Parent links contain a cycle through vertex {u}")
                on_path.add(u)
                path.append(u)
                u = parents[u]
            if u is None:
                base, root = -1, path[-1]
            else:
                base, root = depth[u], root_of[u]
            for w in reversed(path):
                base += 1
                depth[w] = base
                root_of[w] = root
        object.__setattr__(self, "_depth", tuple(depth))
        object.__setattr__(self, "_root_of", tuple(root_of))

    @classmethod
    def from_parents(
        cls, parents: Sequence[Optional[int]], labels: Optional[Sequence[str]] = None
    ) -> "RootedForest":
        return cls(tuple(parents), tuple(labels) if labels is not None else None)

    @classmethod
    def from_shapes(cls, roots: Sequence[ShapeNode]) -> "RootedForest":
        return flatten_shapes(roots)[0]

    @property
    def n(self) -> int:
        return len(self.parents)

    @property
    def depth(self) -> Tuple[int, ...]:
        return self._depth  # type: ignore[attr-defined]

    @property
    def root_of(self) -> Tuple[int, ...]:
        return self._root_of  # type: ignore[attr-defined]

    @cached_property
    def roots(self) -> Tuple[int, ...]:
        return tuple(v for v, p in enumerate(self.parents) if p is None)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def heights(self) -> Dict[int, int]:
        """Height of each component, keyed by its root."""
        heights = {r: 0 for r in self.roots}
        for v in range(self.n):
            r = self.root_of[v]
            heights[r] = max(heights[r], self.depth[v])
        return heights

    @cached_property
    def levels(self) -> Tuple[int, ...]:
        return tuple(self.heights[self.root_of[v]] - self.depth[v] for v in range(self.n))

    @property
    def height(self) -> int:
        """Largest level present (the depth k of a single tree)."""
        return max(self.levels) if self.n else 0

    @cached_property
    def order(self) -> Tuple[int, ...]:
        """Bottom-up processing order: every child precedes its parent."""
        levels = self.levels
        return tuple(sorted(range(self.n), key=lambda v: (levels[v], v)))

    @cached_property
    def level_sets(self) -> Tuple[Tuple[int, ...], ...]:
        buckets: List[List[int]] = [[] for _ in range(self.height + 1)]
        for v in range(self.n):
            buckets[self.levels[v]].append(v)
        return tuple(tuple(b) for b in buckets)

    @property
    def is_tree(self) -> bool:
        return len(self.roots) == 1

    @property
    def root(self) -> int:
        if not self.is_tree:
            raise InvalidTreeError(f"Expected a single tree, found {len(self.roots)} roots")
        return self.roots[0]

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Tree edges as ``(child, parent)`` pairs."""
        return tuple((v, p) for v, p in enumerate(self.parents) if p is not None)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise InvalidTreeError(f"Vertex {v!r} is not in a forest of {self.n} vertices")

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def restrict(self, vertices: Sequence[int]) -> Tuple["RootedForest", Tuple[int, ...]]:
        """
        Induced sub-forest on ``vertices``.

        Returns:
            The sub-forest (ids renumbered by increasing old id) and the
            new-to-old id map
        """
        keep = sorted(set(vertices))
        for v in keep:
            self.check_vertex(v)
        new_id = {old: i for i, old in enumerate(keep)}
        parents = []
        for old in keep:
            p = self.parents[old]
            parents.append(new_id.get(p) if p is not None else None)
        labels = tuple(self.labels[old] for old in keep) if self.labels else None
        return RootedForest(tuple(parents), labels), tuple(keep)

    def relabel_bottom_up(self) -> Tuple["RootedForest", Tuple[int, ...]]:
        """Renumber so ids follow the processing order; returns the old-to-new map."""
        order = self.order
        old_to_new = [0] * self.n
        for new, old in enumerate(order):
            old_to_new[old] = new
        parents: List[Optional[int]] = [None] * self.n
        for old, p in enumerate(self.parents):
            parents[old_to_new[old]] = old_to_new[p] if p is not None else None
        labels = None
        if self.labels:
            labels = tuple(self.labels[old] for old in order)
        return RootedForest(tuple(parents), labels), tuple(old_to_new)

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"parents": list(self.parents)}
        if self.is_tree:
            data["root"] = self.root
        else:
            data["roots"] = list(self.roots)
        if self.labels:
            data["labels"] = list(self.labels)
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "RootedForest":
        """Accepts ``{parents: [...], root: i}`` (or ``roots`` for forests)."""
        try:
            parents = [None if p is None else int(p) for p in data["parents"]]
        except (KeyError, TypeError, ValueError) as e:
            raise TreeFormatError(f"Invalid tree JSON: {e}") from e
        forest = cls(tuple(parents), tuple(data["labels"]) if data.get("labels") else None)
        if "root" in data and forest.roots != (data["root"],):
            raise TreeFormatError(
                f"Declared root {data['root']} does not match parentless vertices {forest.roots}"
            )
        if "roots" in data and tuple(sorted(data["roots"])) != forest.roots:
            raise TreeFormatError(f"Declared roots {data['roots']} do not match {forest.roots}")
        return forest


def flatten_shapes(roots: Sequence[ShapeNode]) -> Tuple[RootedForest, List[ShapeNode]]:
    """
    Turn nested shapes into a forest with bottom-up ids.

    Ids are assigned by level, then by breadth-first discovery order, so a
    single tree's root gets id ``n - 1``.

    Returns:
        The forest and the shape node behind each id
    """
    discovered: List[Tuple[ShapeNode, Optional[int], int, int]] = []
    queue = deque((node, None, 0, index) for index, node in enumerate(roots))
    while queue:
        node, parent, depth, tree = queue.popleft()
        position = len(discovered)
        discovered.append((node, parent, depth, tree))
        for child in node.children:
            queue.append((child, position, depth + 1, tree))

    heights: Dict[int, int] = {}
    for _, _, depth, tree in discovered:
        heights[tree] = max(heights.get(tree, 0), depth)
    ranking = sorted(
        range(len(discovered)),
        key=lambda i: (heights[discovered[i][3]] - discovered[i][2], i),
    )
    new_id = [0] * len(discovered)
    for new, i in enumerate(ranking):
        new_id[i] = new

    parents: List[Optional[int]] = [None] * len(discovered)
    nodes: List[ShapeNode] = [ShapeNode()] * len(discovered)
    for i, (node, parent, _, _) in enumerate(discovered):
        parents[new_id[i]] = new_id[parent] if parent is not None else None
        nodes[new_id[i]] = node
    labels = None
    if any(node.label for node in nodes):
        labels = tuple(node.label for node in nodes)
    return RootedForest(tuple(parents), labels), nodes


def diameter(tree: RootedForest) -> int:
    """Number of vertices on a longest path."""
    if tree.n == 0 or not tree.is_tree:
        raise InvalidTreeError("Diameter is defined for a single connected tree")
    if tree.n == 1:
        return 1
    graph = tree.to_networkx()
    first = nx.single_source_shortest_path_length(graph, tree.root)
    far = max(first, key=lambda v: (first[v], -v))
    second = nx.single_source_shortest_path_length(graph, far)
    return max(second.values()) + 1


def _branch_parts(tree: RootedForest, v: int) -> List[List[Tuple[int, Optional[int]]]]:
    """Components of T - v as BFS ``(vertex, parent)`` lists rooted at v's neighbours."""
    tree.check_vertex(v)
    if not tree.is_tree:
        raise InvalidTreeError("Branches are defined on a single connected tree")
    graph = tree.to_networkx()
    neighbours = sorted(graph.neighbors(v))
    graph.remove_node(v)
    parts = []
    for u in neighbours:
        part: List[Tuple[int, Optional[int]]] = [(u, None)]
        part.extend((child, parent) for child, parent in _bfs_pairs(graph, u))
        parts.append(part)
    return parts


def _bfs_pairs(graph: nx.Graph, source: int) -> List[Tuple[int, int]]:
    return [(child, parent) for child, parent in nx.bfs_predecessors(graph, source)]


def branches_at(tree: RootedForest, v: int) -> List[RootedForest]:
    """Each component of T - v, rooted at the neighbour of v it contains."""
    branches = []
    for part in _branch_parts(tree, v):
        local = {vertex: i for i, (vertex, _) in enumerate(part)}
        parents = [None if p is None else local[p] for _, p in part]
        labels = [tree.labels[vertex] for vertex, _ in part] if tree.labels else None
        branch, _ = RootedForest.from_parents(parents, labels).relabel_bottom_up()
        branches.append(branch)
    return branches


def cbd(tree: RootedForest, v: int, branch_index: int, s: int) -> RootedForest:
    """
    Append ``s`` copies of a branch at ``v``.

    Existing vertices keep their ids; copies take fresh ids after them, and
    each copy's root becomes a child of ``v``.

    Args:
        tree: Single rooted tree
        v: Attachment vertex
        branch_index: Index into ``branches_at(tree, v)``
        s: Number of copies (>= 1)

    Returns:
        The enlarged tree with the same diameter
    """
    parts = _branch_parts(tree, v)
    if not 0 <= branch_index < len(parts):
        raise InvalidTreeError(f"Vertex {v} has {len(parts)} branches, not index {branch_index}")
    if s < 1:
        raise InvalidTreeError(f"Copy count must be positive, got {s}")
    part = parts[branch_index]
    parents: List[Optional[int]] = list(tree.parents)
    labels = list(tree.labels) if tree.labels else None
    for _ in range(s):
        copy_of: Dict[int, int] = {}
        for vertex, parent in part:
            copy_of[vertex] = len(parents)
            parents.append(v if parent is None else copy_of[parent])
            if labels is not None:
                labels.append(tree.labels[vertex])  # type: ignore[index]
    result = RootedForest(tuple(parents), tuple(labels) if labels is not None else None)

    before, after = diameter(tree), diameter(result)
    if before != after:
        logger.error(f"Rejected {s}-CBD at vertex {v}: diameter {before} -> {after}")
        raise DiameterChangeError(
            f"{s}-CBD of branch {branch_index} at vertex {v} changes diameter {before} -> {after}"
        )
    logger.debug(f"{s}-CBD at vertex {v}: {tree.n} -> {result.n} vertices")
    return result


def _render(forest: RootedForest, canonical: bool) -> str:
    text = [""] * forest.n
    for v in forest.order:
        parts = [text[c] for c in forest.children[v]]
        if canonical:
            parts.sort()
        text[v] = "(" + "".join(parts) + ")"
    roots = [text[r] for r in forest.roots]
    if canonical:
        roots.sort()
    return "".join(roots)


def serialize(forest: RootedForest) -> str:
    """Balanced-parenthesis text; children appear in id order."""
    return _render(forest, canonical=False)


def canonical_form(forest: RootedForest) -> str:
    """Parenthesis text with sorted subtrees; equal exactly for isomorphic rooted forests."""
    return _render(forest, canonical=True)


def parse_tree(text: str) -> RootedForest:
    """Parse parenthesis text into a forest with bottom-up ids."""
    parents: List[Optional[int]] = []
    stack: List[int] = []
    for position, char in enumerate(text):
        if char.isspace():
            continue
        if char == "(":
            parents.append(stack[-1] if stack else None)
            stack.append(len(parents) - 1)
        elif char == ")":
            if not stack:
                raise TreeFormatError(f"Unbalanced ')' at position {position}")
            stack.pop()
        else:
            raise TreeFormatError(f"Unexpected character {char!r} at position {position}")
    if stack:
        raise TreeFormatError(f"{len(stack)} unclosed '(' in tree text")
    if not parents:
        raise TreeFormatError("Empty tree text")
    forest, _ = RootedForest(tuple(parents)).relabel_bottom_up()
    return forest
