"""Canonical codes and explicit isomorphisms for oriented SP graphs.

Two oriented series-parallel graphs are oriented-isomorphic (there is a
vertex bijection preserving adjacency and fixing source and sink) if
and only if their normalized decomposition trees agree up to reordering
P children.  The canonical code makes that decidable and totally
ordered: a leaf encodes as "E", a series node concatenates its child
codes in order, and a parallel node concatenates them sorted.  Token
order is S < P < E < "(" < ")".

On top of the codes this module extracts explicit leaf bijections
(`iso_map`), partitions a P node's children into oriented isomorphism
classes (`partition_classes`), and detects the terminal-exchanging
symmetry that distinguishes the semioriented automorphism group from
the oriented one (`mirror_pairing`).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Leaf, Node, OrientedSP, Parallel, Series

_TOKEN_KEY = str.maketrans("SPE()", "ABCDE")


def code_sort_key(code: str) -> str:
    """Translate a code into a string whose natural order matches S < P < E < ( < )."""
    return code.translate(_TOKEN_KEY)


def _tree_of(g) -> Node:
    return g.tree if isinstance(g, (OrientedSP,)) else g


def canonical_code(g) -> str:
    """Code identifying an oriented SP graph up to oriented isomorphism."""
    node = _tree_of(g)
    if isinstance(node, Leaf):
        return "E"
    parts = [canonical_code(c) for c in node.children]
    if isinstance(node, Series):
        return "S(" + "".join(parts) + ")"
    parts.sort(key=code_sort_key)
    return "P(" + "".join(parts) + ")"


def reversal_code(g) -> str:
    """Canonical code of the same graph with source and sink exchanged."""
    node = _tree_of(g)
    if isinstance(node, Leaf):
        return "E"
    if isinstance(node, Series):
        parts = [reversal_code(c) for c in reversed(node.children)]
        return "S(" + "".join(parts) + ")"
    parts = sorted((reversal_code(c) for c in node.children), key=code_sort_key)
    return "P(" + "".join(parts) + ")"


def reverse_tree(node: Node) -> tuple[Node, dict[int, int]]:
    """Terminal-exchanged copy of a normalized tree.

    Returns the reversed tree (freshly preorder-indexed) and the map
    from old leaf indices to new ones.
    """
    leaf_map: dict[int, int] = {}
    counter = [0]

    def build(nd: Node) -> Node:
        if isinstance(nd, Leaf):
            out = Leaf(nd.target, nd.source, counter[0])
            leaf_map[nd.index] = counter[0]
            counter[0] += 1
            return out
        if isinstance(nd, Series):
            return Series(tuple(build(c) for c in reversed(nd.children)))
        return Parallel(tuple(build(c) for c in nd.children))

    return build(node), leaf_map


def iso_map(a, b) -> dict[int, int] | None:
    """Leaf bijection realizing an oriented isomorphism, or None.

    None exactly when the canonical codes differ.  Series children are
    matched positionally; parallel children are matched within
    equal-code groups in child storage order, which makes the maps
    compose coherently across chains of isomorphic trees.  The returned
    map is verified to induce a consistent vertex bijection fixing both
    terminals.
    """
    ta, tb = _tree_of(a), _tree_of(b)
    if canonical_code(ta) != canonical_code(tb):
        return None
    mapping: dict[int, int] = {}
    _match(ta, tb, mapping)
    _verify_leaf_bijection(ta, tb, mapping)
    return mapping


def _match(a: Node, b: Node, mapping: dict[int, int]) -> None:
    if isinstance(a, Leaf):
        mapping[a.index] = b.index
        return
    if isinstance(a, Series):
        for ca, cb in zip(a.children, b.children):
            _match(ca, cb, mapping)
        return
    groups_a: dict[str, list[Node]] = {}
    groups_b: dict[str, list[Node]] = {}
    for child in a.children:
        groups_a.setdefault(canonical_code(child), []).append(child)
    for child in b.children:
        groups_b.setdefault(canonical_code(child), []).append(child)
    for code, members_a in groups_a.items():
        for ca, cb in zip(members_a, groups_b[code]):
            _match(ca, cb, mapping)


def _verify_leaf_bijection(a: Node, b: Node, mapping: dict[int, int]) -> None:
    """Check that a leaf map is edge preserving and terminal fixing."""
    leaves_b = {lf.index: lf for lf in _leaves(b)}
    if sorted(mapping.values()) != sorted(leaves_b):
        raise RuntimeError("leaf map is not a bijection onto the target leaves")
    vmap: dict[str, str] = {}
    inverse: dict[str, str] = {}
    for lf in _leaves(a):
        img = leaves_b[mapping[lf.index]]
        for x, y in ((lf.source, img.source), (lf.target, img.target)):
            if vmap.setdefault(x, y) != y or inverse.setdefault(y, x) != x:
                raise RuntimeError("leaf map does not induce a vertex bijection")
    if vmap.get(a.source) != b.source or vmap.get(a.target) != b.target:
        raise RuntimeError("leaf map moves a terminal")


def _leaves(node: Node) -> list[Leaf]:
    if isinstance(node, Leaf):
        return [node]
    out: list[Leaf] = []
    for child in node.children:
        out.extend(_leaves(child))
    return out


def invert_map(mapping: dict[int, int]) -> dict[int, int]:
    return {v: k for k, v in mapping.items()}


@dataclass
class IsoClass:
    """One oriented isomorphism class of a P node's children.

    `members` holds child positions in storage order; the first member
    is the class representative.  `to_rep[pos]` maps a member's leaf
    indices onto the representative's.
    """

    code: str
    members: tuple[int, ...]
    to_rep: dict[int, dict[int, int]]

    @property
    def representative(self) -> int:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class IsoClassPartition:
    classes: tuple[IsoClass, ...]


def partition_classes(p: Parallel) -> IsoClassPartition:
    """Group a P node's children into oriented isomorphism classes.

    Children are bucketed by canonical code (linear in total child
    size, no pairwise comparisons), classes are ordered by descending
    code, and each member gets an explicit verified bijection onto the
    class representative.
    """
    if not isinstance(p, Parallel):
        raise TypeError("partition_classes expects a Parallel node")
    buckets: dict[str, list[int]] = {}
    for pos, child in enumerate(p.children):
        buckets.setdefault(canonical_code(child), []).append(pos)
    classes = []
    for code in sorted(buckets, key=code_sort_key, reverse=True):
        members = tuple(buckets[code])
        rep = p.children[members[0]]
        to_rep = {}
        for pos in members:
            mapping = iso_map(p.children[pos], rep)
            assert mapping is not None
            to_rep[pos] = mapping
        classes.append(IsoClass(code, members, to_rep))
    return IsoClassPartition(tuple(classes))


@dataclass
class MirrorPairing:
    """Witness that a terminal-exchanging symmetry of the node's shape exists.

    For a series node, `series_maps[i]` reverses child i onto child
    k-1-i (maps for the upper half are inverses of the lower half; an
    odd middle child maps onto itself).  For a parallel node,
    `class_pairs` lists (forward class, backward class, bijection from
    the forward representative onto the backward one realizing the
    reversal), each unordered pair once, self-pairs allowed.
    """

    kind: str
    series_maps: tuple[dict[int, int], ...] | None = None
    class_pairs: tuple[tuple[int, int, dict[int, int]], ...] | None = None


def reversal_map(x: Node, y: Node) -> dict[int, int] | None:
    """Leaf bijection realizing x == reversed y, or None."""
    reversed_y, new_of_old = reverse_tree(y)
    phi = iso_map(x, reversed_y)
    if phi is None:
        return None
    old_of_new = invert_map(new_of_old)
    return {leaf: old_of_new[img] for leaf, img in phi.items()}


def mirror_pairing(node: Node) -> MirrorPairing | None:
    """Detect the terminal-exchanging symmetry of a normalized node.

    Returns None exactly when no automorphism of the graph can exchange
    the terminals, in which case the semioriented automorphism group
    equals the oriented one.  A leaf is trivially self-paired.
    """
    if isinstance(node, Leaf):
        return MirrorPairing(kind="leaf")
    if isinstance(node, Series):
        kids = node.children
        k = len(kids)
        maps: list[dict[int, int] | None] = [None] * k
        for i in range(k):
            j = k - 1 - i
            if i > j:
                maps[i] = invert_map(maps[j])
                continue
            r = reversal_map(kids[i], kids[j])
            if r is None:
                return None
            maps[i] = r
        return MirrorPairing(kind="series", series_maps=tuple(maps))

    part = partition_classes(node)
    by_code = {cls.code: idx for idx, cls in enumerate(part.classes)}
    pairs: list[tuple[int, int, dict[int, int]]] = []
    for idx, cls in enumerate(part.classes):
        rep = node.children[cls.representative]
        partner_code = reversal_code(rep)
        other = by_code.get(partner_code)
        if other is None or part.classes[other].size != cls.size:
            return None
        if other < idx:
            continue
        other_rep = node.children[part.classes[other].representative]
        r = reversal_map(rep, other_rep)
        assert r is not None
        pairs.append((idx, other, r))
    return MirrorPairing(kind="parallel", class_pairs=tuple(pairs))
