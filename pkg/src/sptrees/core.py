"""Core types for two-terminal series-parallel graphs.

A series-parallel graph is represented by its decomposition tree: leaves
are single edges, S nodes chain subgraphs end to end, P nodes merge
subgraphs that share both terminals.  Every node has a source and a
target label; leaves carry a global index assigned in depth-first
preorder, so edge subsets can be stored as bitmasks over leaf indices.

All types here are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterator, Union

_LABEL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_"
)


def is_valid_label(text: str) -> bool:
    """True if `text` is a nonempty token over [A-Za-z0-9_]."""
    return bool(text) and set(text) <= _LABEL_CHARS


@dataclass(frozen=True)
class Leaf:
    """A single edge, oriented source -> target by the ambient terminals."""

    source: str
    target: str
    index: int = 0

    @property
    def children(self) -> tuple[Node, ...]:
        return ()

    @property
    def span(self) -> tuple[int, int]:
        return (self.index, self.index + 1)


@dataclass(frozen=True)
class Series:
    """Chain of subgraphs; child i's target is child i+1's source."""

    children: tuple[Node, ...]

    @cached_property
    def source(self) -> str:
        return self.children[0].source

    @cached_property
    def target(self) -> str:
        return self.children[-1].target

    @cached_property
    def span(self) -> tuple[int, int]:
        return (self.children[0].span[0], self.children[-1].span[1])


@dataclass(frozen=True)
class Parallel:
    """Bundle of subgraphs sharing both terminals."""

    children: tuple[Node, ...]

    @cached_property
    def source(self) -> str:
        return self.children[0].source

    @cached_property
    def target(self) -> str:
        return self.children[0].target

    @cached_property
    def span(self) -> tuple[int, int]:
        return (self.children[0].span[0], self.children[-1].span[1])


Node = Union[Leaf, Series, Parallel]


def edge(source: str, target: str, index: int = 0) -> Leaf:
    return Leaf(source, target, index)


def series(*children: Node) -> Series:
    return Series(tuple(children))


def parallel(*children: Node) -> Parallel:
    return Parallel(tuple(children))


def iter_leaves(node: Node) -> Iterator[Leaf]:
    """Yield the leaves of `node` in depth-first preorder."""
    if isinstance(node, Leaf):
        yield node
        return
    for child in node.children:
        yield from iter_leaves(child)


def leaf_count(node: Node) -> int:
    return sum(1 for _ in iter_leaves(node))


def vertex_labels(node: Node) -> frozenset[str]:
    out: set[str] = set()
    for lf in iter_leaves(node):
        out.add(lf.source)
        out.add(lf.target)
    return frozenset(out)


def vertex_count(node: Node) -> int:
    """Number of vertices of the underlying graph of a valid tree."""
    if isinstance(node, Leaf):
        return 2
    k = len(node.children)
    total = sum(vertex_count(c) for c in node.children)
    if isinstance(node, Series):
        return total - (k - 1)
    return total - 2 * (k - 1)


@dataclass(frozen=True, eq=False)
class OrientedSP:
    """A series-parallel graph with an ordered (source, sink) terminal pair.

    Two oriented graphs are equal when their underlying labeled graphs
    coincide and their terminals match in order.  Swapping the terminals
    yields a different oriented graph in general.
    """

    tree: Node

    @property
    def source(self) -> str:
        return self.tree.source

    @property
    def target(self) -> str:
        return self.tree.target

    def _key(self) -> tuple:
        g = underlying_graph(self.tree)
        return (g.vertices, frozenset(g.edges), self.source, self.target)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedSP):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True, eq=False)
class SemiorientedSP:
    """A series-parallel graph with an unordered terminal set {s, t}."""

    tree: Node

    @property
    def terminals(self) -> frozenset[str]:
        return frozenset((self.tree.source, self.tree.target))

    def _key(self) -> tuple:
        g = underlying_graph(self.tree)
        return (g.vertices, frozenset(g.edges), self.terminals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemiorientedSP):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True)
class LabeledGraph:
    """Simple labeled graph; edge i is the leaf with preorder index i."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[tuple[str, str], int]:
        return {pair: i for i, pair in enumerate(self.edges)}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(nb) for v, nb in adj.items()}

    def index_of(self, u: str, v: str) -> int:
        return self.edge_index[(u, v) if u <= v else (v, u)]


@dataclass(frozen=True)
class EdgeSet:
    """Subset of global leaf indices stored as a bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, indices) -> EdgeSet:
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(mask)

    @cached_property
    def cardinality(self) -> int:
        return self.mask.bit_count()

    def indices(self) -> tuple[int, ...]:
        out = []
        mask = self.mask
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def union(self, other: EdgeSet) -> EdgeSet:
        return EdgeSet(self.mask | other.mask)

    def contains(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def within(self, m: int) -> bool:
        return self.mask >> m == 0

    def mapped(self, leaf_map: dict[int, int]) -> EdgeSet:
        """Image under a leaf-index bijection."""
        mask = 0
        for i in self.indices():
            mask |= 1 << leaf_map[i]
        return EdgeSet(mask)


class Classification(Enum):
    SPANNING_TREE = "spanning_tree"
    NEAR_TREE = "near_tree"
    OTHER = "other"


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with a path to the offending node."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class InvalidTreeError(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def validate(node: Node) -> list[Violation]:
    """Check every decomposition-tree invariant.

    Returns one entry per violation (empty list means valid).  Checks
    label syntax, self-loops, series chaining, shared parallel
    terminals, child arity, alternation of S and P levels, simplicity
    (at most one bare edge per parallel node), disjointness of interior
    vertices across sibling branches, and preorder leaf indices.
    """
    out = _structural_violations(node)
    out.extend(_alternation_violations(node, "root"))
    leaves = list(iter_leaves(node))
    if [lf.index for lf in leaves] != list(range(len(leaves))):
        out.append(Violation("root", "leaf indices are not preorder 0..m-1"))
    return out


def _structural_violations(node: Node) -> list[Violation]:
    """All invariants except alternation and leaf indexing.

    These are the checks that must hold even before `normalize` has
    flattened the tree and reassigned indices.
    """
    out: list[Violation] = []
    _walk_structural(node, "root", out)
    return out


def _walk_structural(node: Node, path: str, out: list[Violation]) -> None:
    if isinstance(node, Leaf):
        for label in (node.source, node.target):
            if not is_valid_label(label):
                out.append(Violation(path, f"bad vertex label {label!r}"))
        if node.source == node.target:
            out.append(Violation(path, "self-loop at leaf"))
        return

    kind = "series" if isinstance(node, Series) else "parallel"
    kids = node.children
    if len(kids) < 2:
        out.append(Violation(path, f"{kind} node needs at least 2 children"))
        for i, child in enumerate(kids):
            _walk_structural(child, f"{path}[{i}]", out)
        return

    for i, child in enumerate(kids):
        _walk_structural(child, f"{path}[{i}]", out)

    vsets = [vertex_labels(c) for c in kids]

    if isinstance(node, Series):
        for i in range(len(kids) - 1):
            if kids[i].target != kids[i + 1].source:
                out.append(
                    Violation(
                        path,
                        f"series chain mismatch {kids[i].target} != "
                        f"{kids[i + 1].source} between children {i} and {i + 1}",
                    )
                )
        if node.source == node.target:
            out.append(Violation(path, "series terminals coincide"))
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                allowed = {kids[i].target} if j == i + 1 else set()
                extra = (vsets[i] & vsets[j]) - allowed
                if extra:
                    out.append(
                        Violation(
                            path,
                            f"children {i} and {j} share vertices "
                            f"{sorted(extra)} beyond the chain terminal",
                        )
                    )
    else:
        s, t = node.source, node.target
        for i, child in enumerate(kids):
            if (child.source, child.target) != (s, t):
                out.append(
                    Violation(
                        path,
                        f"parallel child {i} has terminals "
                        f"({child.source},{child.target}), expected ({s},{t})",
                    )
                )
        if sum(1 for c in kids if isinstance(c, Leaf)) > 1:
            out.append(Violation(path, "parallel multi-edge"))
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                extra = (vsets[i] & vsets[j]) - {s, t}
                if extra:
                    out.append(
                        Violation(
                            path,
                            f"children {i} and {j} share interior vertices "
                            f"{sorted(extra)}",
                        )
                    )


def _alternation_violations(node: Node, path: str) -> list[Violation]:
    out: list[Violation] = []
    if isinstance(node, Leaf):
        return out
    for i, child in enumerate(node.children):
        if type(child) is type(node):
            kind = "series under series" if isinstance(node, Series) else "parallel under parallel"
            out.append(Violation(f"{path}[{i}]", kind))
        out.extend(_alternation_violations(child, f"{path}[{i}]"))
    return out


def normalize(node: Node) -> Node:
    """Flatten same-kind nestings and reassign preorder leaf indices.

    The result represents the same graph, alternates S and P levels, and
    is a fixed point of `normalize`.  Raises InvalidTreeError when the
    input breaks any invariant other than alternation or indexing.
    """
    bad = _structural_violations(node)
    if bad:
        raise InvalidTreeError(bad)
    flat = _flatten(node)
    bad = _structural_violations(flat)
    if bad:
        raise InvalidTreeError(bad)
    reindexed, _ = _reindex(flat, 0)
    return reindexed


def _flatten(node: Node) -> Node:
    if isinstance(node, Leaf):
        return node
    kids = []
    for child in node.children:
        child = _flatten(child)
        if type(child) is type(node):
            kids.extend(child.children)
        else:
            kids.append(child)
    return type(node)(tuple(kids))


def _reindex(node: Node, next_index: int) -> tuple[Node, int]:
    if isinstance(node, Leaf):
        return Leaf(node.source, node.target, next_index), next_index + 1
    kids = []
    for child in node.children:
        child, next_index = _reindex(child, next_index)
        kids.append(child)
    return type(node)(tuple(kids)), next_index


def underlying_graph(node: Node) -> LabeledGraph:
    """Labeled graph of a valid normalized tree; edge i is leaf i."""
    edges = []
    vertices: set[str] = set()
    for lf in iter_leaves(node):
        u, v = lf.source, lf.target
        vertices.add(u)
        vertices.add(v)
        edges.append((u, v) if u <= v else (v, u))
    return LabeledGraph(tuple(sorted(vertices)), tuple(edges))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; False if already together."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def classify_edge_set(graph: LabeledGraph, es: EdgeSet) -> Classification:
    """Classify an edge subset of `graph`.

    A spanning tree has n - 1 acyclic edges covering every vertex; a
    near tree has n - 2 acyclic edges.  Anything else is OTHER.
    """
    if not es.within(graph.m):
        return Classification.OTHER
    card = es.cardinality
    if card not in (graph.n - 1, graph.n - 2):
        return Classification.OTHER
    uf = _UnionFind(graph.n)
    vidx = graph.vertex_index
    for i in es.indices():
        u, v = graph.edges[i]
        if not uf.union(vidx[u], vidx[v]):
            return Classification.OTHER
    if card == graph.n - 1:
        return Classification.SPANNING_TREE
    return Classification.NEAR_TREE


def separates_terminals(graph: LabeledGraph, es: EdgeSet, s: str, t: str) -> bool:
    """True if `es` leaves s and t in different components."""
    uf = _UnionFind(graph.n)
    vidx = graph.vertex_index
    for i in es.indices():
        u, v = graph.edges[i]
        uf.union(vidx[u], vidx[v])
    return uf.find(vidx[s]) != uf.find(vidx[t])
