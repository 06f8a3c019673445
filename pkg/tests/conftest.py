"""Shared instance builders and oracle helpers for the test suite."""

from __future__ import annotations

import random

import pytest

from sptrees import (
    EdgeSet,
    OrientedSP,
    RandomSpParams,
    SemiorientedSP,
    parse_sp,
    random_sp,
    underlying_graph,
)
from sptrees.core import Leaf, Node, Parallel, Series, normalize

DIAMOND_TEXT = "P(e(2,3),S(e(2,1),e(1,3)),S(e(2,4),e(4,3)))"
THETA_TEXT = "P(e(s,t),S(e(s,a),e(a,b),e(b,t)),S(e(s,c),e(c,d),e(d,t)))"


@pytest.fixture
def diamond() -> Node:
    return parse_sp(DIAMOND_TEXT)


@pytest.fixture
def theta() -> Node:
    return parse_sp(THETA_TEXT)


def chain(k: int) -> Node:
    """Series chain of k edges through v0, v1, ..., vk."""
    if k == 1:
        return parse_sp("e(v0,v1)")
    return parse_sp("S(" + ",".join(f"e(v{i},v{i + 1})" for i in range(k)) + ")")


def small_corpus(count: int, max_vertices: int = 10, start_seed: int = 0):
    """Deterministic random instances with at most `max_vertices` vertices."""
    out = []
    seed = start_seed
    while len(out) < count:
        tree = random_sp(
            RandomSpParams(seed=seed, max_depth=3, max_children=3, leaf_bias=0.45)
        )
        seed += 1
        if underlying_graph(tree).n <= max_vertices:
            out.append(tree)
    return out


def orbit_exactly_once(fast: list[EdgeSet], report) -> bool:
    """True iff `fast` hits every orbit of `report` exactly once."""
    lookup = {}
    for orbit_id, (_, members) in enumerate(report.orbits):
        for member in members:
            lookup[member] = orbit_id
    hit = set()
    for es in fast:
        orbit_id = lookup.get(es)
        if orbit_id is None or orbit_id in hit:
            return False
        hit.add(orbit_id)
    return len(hit) == report.orbit_count


# ---------------------------------------------------------------------------
# Mirror-symmetric instance generation
# ---------------------------------------------------------------------------


def _allocator():
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"w{counter[0]}"

    return fresh


def _rand_block(rng, fresh, depth, src, tgt, kind):
    k = rng.randint(2, 3)
    if kind == "S":
        mids = [fresh() for _ in range(k - 1)]
        ends = [src] + mids + [tgt]
        kids = []
        for i in range(k):
            a, b = ends[i], ends[i + 1]
            if depth - 1 < 2 or rng.random() < 0.5:
                kids.append(Leaf(a, b))
            else:
                kids.append(_rand_block(rng, fresh, depth - 1, a, b, "P"))
        return Series(tuple(kids))
    kids = []
    for i in range(k):
        if i == 0 and rng.random() < 0.4:
            kids.append(Leaf(src, tgt))
        else:
            kids.append(_rand_block(rng, fresh, depth - 1, src, tgt, "S"))
    return Parallel(tuple(kids))


def reversed_relabeled(node: Node, fresh, src: str, tgt: str) -> Node:
    """Terminal-reversed copy of `node` with fresh interior labels."""
    if isinstance(node, Leaf):
        return Leaf(src, tgt)
    if isinstance(node, Series):
        k = len(node.children)
        ends = [src] + [fresh() for _ in range(k - 1)] + [tgt]
        kids = [
            reversed_relabeled(child, fresh, ends[i], ends[i + 1])
            for i, child in enumerate(reversed(node.children))
        ]
        return Series(tuple(kids))
    return Parallel(tuple(reversed_relabeled(c, fresh, src, tgt) for c in node.children))


def mirror_symmetric(seed: int, max_trees: int = 4000) -> Node:
    """Random instance that admits a terminal-exchanging symmetry.

    Retries derived seeds until the oriented spanning count is small
    enough for enumeration-based checks to stay fast.
    """
    from sptrees import OrientedSP, count_oriented

    for attempt in range(64):
        tree = _mirror_symmetric_raw(seed * 64 + attempt)
        if count_oriented(OrientedSP(tree)).spanning <= max_trees:
            return tree
    raise AssertionError("no small mirror-symmetric instance found")


def _mirror_symmetric_raw(seed: int) -> Node:
    rng = random.Random(seed)
    fresh = _allocator()
    s, t = "s", "t"
    if rng.random() < 0.5:
        half = rng.randint(1, 2)
        bounds = [s] + [fresh() for _ in range(half)]
        kids = []
        for i in range(half):
            a, b = bounds[i], bounds[i + 1]
            if rng.random() < 0.4:
                kids.append(Leaf(a, b))
            else:
                kids.append(_rand_block(rng, fresh, 2, a, b, "P"))
        middle = []
        join = bounds[-1]
        if rng.random() < 0.5:
            nxt = fresh()
            middle = [Leaf(join, nxt)]
            join = nxt
        ends = [join] + [fresh() for _ in range(half - 1)] + [t]
        right = [
            reversed_relabeled(child, fresh, ends[i], ends[i + 1])
            for i, child in enumerate(reversed(kids))
        ]
        return normalize(Series(tuple(kids + middle + right)))
    kids = []
    if rng.random() < 0.4:
        kids.append(Leaf(s, t))
    for _ in range(rng.randint(1, 2)):
        block = _rand_block(rng, fresh, rng.randint(2, 3), s, t, "S")
        kids.append(block)
        kids.append(reversed_relabeled(block, fresh, s, t))
    return normalize(Parallel(tuple(kids)))


def relabeled_shuffled_copy(tree: Node, seed: int) -> Node:
    """Oriented-isomorphic copy: interior labels renamed, P children shuffled."""
    rng = random.Random(seed)
    interior = sorted(
        v for v in underlying_graph(tree).vertices if v not in (tree.source, tree.target)
    )
    new_names = [f"z{i}" for i in range(len(interior))]
    rng.shuffle(new_names)
    mapping = dict(zip(interior, new_names))
    mapping[tree.source] = tree.source
    mapping[tree.target] = tree.target

    def walk(node: Node) -> Node:
        if isinstance(node, Leaf):
            return Leaf(mapping[node.source], mapping[node.target])
        kids = [walk(c) for c in node.children]
        if isinstance(node, Parallel):
            rng.shuffle(kids)
            return Parallel(tuple(kids))
        return Series(tuple(kids))

    return normalize(walk(tree))


def oriented(tree: Node) -> OrientedSP:
    return OrientedSP(tree)


def semioriented(tree: Node) -> SemiorientedSP:
    return SemiorientedSP(tree)
