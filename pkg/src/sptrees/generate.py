"""Oriented enumeration and counting of nonequivalent spanning trees.

Everything here works up to the terminal-fixing automorphisms of the
graph.  The composition rules follow the decomposition tree:

  * series node, spanning: one spanning tree per child, all unions;
  * series node, near: pick the child that carries the break, a near
    tree there, spanning trees elsewhere;
  * parallel node, near: one near tree per child, where children in the
    same oriented isomorphism class are interchangeable, so a class of
    size c with r nonequivalent near trees contributes the C(r+c-1, c)
    multisets of representative trees, placed on members through the
    stored class bijections;
  * parallel node, spanning: exactly one class carries a spanning tree
    on one member (the representative's trees, placed on the first
    member) plus a size c-1 near multiset on the rest.

"Near tree" throughout means a two-component spanning forest that
separates the terminals; those are the objects that compose (a forest
keeping the terminals connected would close a cycle when a sibling
branch supplies the through path, and every subset brute force can
build from these compositions separates the terminals at every level).

The enumeration order is deterministic: classes descend by canonical
code, assignment indices count near multisets first then spanning
choices, and tuples advance lexicographically.  `spanning_tree_index`
and `near_tree_index` invert the order: they take any spanning or near
tree edge set and return the position of its orbit's representative.

Lists are materialized bottom-up; the `iter_*` variants stream the root
composition from the same child lists so large outputs never have to be
held in memory at once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .canonical import canonical_code, invert_map, partition_classes
from .core import EdgeSet, Leaf, Node, OrientedSP, Series


class ImageNotFound(ValueError):
    """An edge set could not be located in the enumeration order.

    Raised by the index operations when the input is not a valid
    spanning or near tree of the graph; reaching it from inside the
    library signals a broken index-stability invariant.
    """


@dataclass(frozen=True)
class CountPair:
    spanning: int
    near: int


# ---------------------------------------------------------------------------
# Multisets
# ---------------------------------------------------------------------------


def multiset_coefficient(m: int, k: int) -> int:
    """Number of size-k multisets over m items, C(m+k-1, k)."""
    if k < 0:
        return 0
    if k == 0:
        return 1
    if m <= 0:
        return 0
    return math.comb(m + k - 1, k)


def multiset_enumerate(m: int, k: int) -> list[tuple[int, ...]]:
    """All nondecreasing k-tuples over range(m), lexicographic."""
    return list(itertools.combinations_with_replacement(range(m), k))


def multiset_rank(seq: tuple[int, ...], m: int) -> int:
    """Position of a nondecreasing tuple in `multiset_enumerate(m, len(seq))`."""
    k = len(seq)
    rank = 0
    prev = 0
    for i, v in enumerate(seq):
        rank += multiset_coefficient(m - prev, k - i) - multiset_coefficient(m - v, k - i)
        prev = v
    return rank


# ---------------------------------------------------------------------------
# Enumeration plans
# ---------------------------------------------------------------------------


@dataclass
class _ClassPlan:
    """Per-class data at a parallel node."""

    members: tuple[int, ...]
    rep_plan: "_Plan"
    to_rep: tuple[dict[int, int], ...]
    place: tuple[dict[int, int], ...]
    nc: int = 0
    sc: int = 0
    near_sets: list[EdgeSet] | None = None
    span_sets: list[EdgeSet] | None = None

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class _Plan:
    node: Node
    st: int
    nt: int
    n: int
    children: tuple["_Plan", ...] = ()
    classes: tuple[_ClassPlan, ...] = ()
    sp_cache: list[EdgeSet] | None = None
    nt_cache: list[EdgeSet] | None = None

    @property
    def kind(self) -> str:
        if isinstance(self.node, Leaf):
            return "leaf"
        return "series" if isinstance(self.node, Series) else "parallel"


def build_plan(g) -> _Plan:
    """Precompute classes, bijections, and counts for a normalized tree."""
    node = g.tree if isinstance(g, OrientedSP) else g
    return _build(node)


def _build(node: Node) -> _Plan:
    if isinstance(node, Leaf):
        return _Plan(node, st=1, nt=1, n=2)
    if isinstance(node, Series):
        children = tuple(_build(c) for c in node.children)
        st = math.prod(c.st for c in children)
        nt = sum(
            c.nt * math.prod(d.st for d in children if d is not c) for c in children
        )
        n = sum(c.n for c in children) - (len(children) - 1)
        return _Plan(node, st=st, nt=nt, n=n, children=children)

    part = partition_classes(node)
    classes = []
    for cls in part.classes:
        rep_plan = _build(node.children[cls.representative])
        to_rep = tuple(cls.to_rep[pos] for pos in cls.members)
        place = tuple(invert_map(m) for m in to_rep)
        cp = _ClassPlan(cls.members, rep_plan, to_rep, place)
        cp.nc = multiset_coefficient(rep_plan.nt, cp.size)
        cp.sc = rep_plan.st * multiset_coefficient(rep_plan.nt, cp.size - 1)
        classes.append(cp)
    nt = math.prod(cp.nc for cp in classes)
    st = sum(
        cp.sc * math.prod(other.nc for other in classes if other is not cp)
        for cp in classes
    )
    n = sum(cp.rep_plan.n * cp.size for cp in classes) - 2 * (len(node.children) - 1)
    return _Plan(node, st=st, nt=nt, n=n, classes=tuple(classes))


def _class_near_sets(cp: _ClassPlan) -> list[EdgeSet]:
    """Edge sets of the class's near assignments, in multiset order."""
    if cp.near_sets is None:
        rep_near = _near_list(cp.rep_plan)
        out = []
        for mu in itertools.combinations_with_replacement(range(len(rep_near)), cp.size):
            mask = 0
            for p, tree_idx in enumerate(mu):
                mask |= rep_near[tree_idx].mapped(cp.place[p]).mask
            out.append(EdgeSet(mask))
        cp.near_sets = out
    return cp.near_sets


def _class_span_sets(cp: _ClassPlan) -> list[EdgeSet]:
    """Edge sets of the class's spanning assignments, ordered by (tree, multiset).

    The spanning tree goes on the first member, the near multiset on the
    rest; up to the swap automorphisms within the class the choice of
    carrier does not matter.
    """
    if cp.span_sets is None:
        rep_span = _spanning_list(cp.rep_plan)
        rep_near = _near_list(cp.rep_plan)
        out = []
        for s_idx in range(len(rep_span)):
            head = rep_span[s_idx].mapped(cp.place[0]).mask
            for mu in itertools.combinations_with_replacement(
                range(len(rep_near)), cp.size - 1
            ):
                mask = head
                for p, tree_idx in enumerate(mu):
                    mask |= rep_near[tree_idx].mapped(cp.place[p + 1]).mask
                out.append(EdgeSet(mask))
        cp.span_sets = out
    return cp.span_sets


def _spanning_list(plan: _Plan) -> list[EdgeSet]:
    if plan.sp_cache is None:
        plan.sp_cache = list(_iter_spanning(plan))
    return plan.sp_cache


def _near_list(plan: _Plan) -> list[EdgeSet]:
    if plan.nt_cache is None:
        plan.nt_cache = list(_iter_near(plan))
    return plan.nt_cache


def _iter_spanning(plan: _Plan):
    """Stream the spanning-tree list; child lists are materialized once."""
    if plan.kind == "leaf":
        yield EdgeSet(1 << plan.node.index)
        return
    if plan.kind == "series":
        lists = [_spanning_list(c) for c in plan.children]
        for combo in itertools.product(*lists):
            mask = 0
            for es in combo:
                mask |= es.mask
            yield EdgeSet(mask)
        return
    for a in range(len(plan.classes)):
        factor_lists = [
            _class_span_sets(cp) if j == a else _class_near_sets(cp)
            for j, cp in enumerate(plan.classes)
        ]
        for combo in itertools.product(*factor_lists):
            mask = 0
            for es in combo:
                mask |= es.mask
            yield EdgeSet(mask)


def _iter_near(plan: _Plan):
    if plan.kind == "leaf":
        yield EdgeSet(0)
        return
    if plan.kind == "series":
        span_lists = [_spanning_list(c) for c in plan.children]
        for j, child in enumerate(plan.children):
            factor_lists = list(span_lists)
            factor_lists[j] = _near_list(child)
            for combo in itertools.product(*factor_lists):
                mask = 0
                for es in combo:
                    mask |= es.mask
                yield EdgeSet(mask)
        return
    factor_lists = [_class_near_sets(cp) for cp in plan.classes]
    for combo in itertools.product(*factor_lists):
        mask = 0
        for es in combo:
            mask |= es.mask
        yield EdgeSet(mask)


# ---------------------------------------------------------------------------
# Public enumeration surface
# ---------------------------------------------------------------------------


def oriented_spanning(g: OrientedSP) -> list[EdgeSet]:
    """Nonequivalent spanning trees of (G, s, t), in enumeration order."""
    return list(_spanning_list(build_plan(g)))


def oriented_both(g: OrientedSP) -> tuple[list[EdgeSet], list[EdgeSet]]:
    """Spanning and near lists; the spanning part matches `oriented_spanning`."""
    plan = build_plan(g)
    return list(_spanning_list(plan)), list(_near_list(plan))


def iter_oriented_spanning(g: OrientedSP):
    """Pull-based variant of `oriented_spanning`, identical sequence."""
    return _iter_spanning(build_plan(g))


def iter_oriented_near(g: OrientedSP):
    return _iter_near(build_plan(g))


# ---------------------------------------------------------------------------
# Counting (no enumeration, arbitrary precision)
# ---------------------------------------------------------------------------


def _count_pair(node: Node) -> tuple[int, int]:
    if isinstance(node, Leaf):
        return 1, 1
    if isinstance(node, Series):
        pairs = [_count_pair(c) for c in node.children]
        st = math.prod(p[0] for p in pairs)
        nt = 0
        for j in range(len(pairs)):
            nt += pairs[j][1] * math.prod(p[0] for i, p in enumerate(pairs) if i != j)
        return st, nt
    groups: dict[str, list[Node]] = {}
    for child in node.children:
        groups.setdefault(canonical_code(child), []).append(child)
    stats = []
    for members in groups.values():
        rst, rnt = _count_pair(members[0])
        c = len(members)
        stats.append((rst, rnt, c))
    nt = math.prod(multiset_coefficient(rnt, c) for _, rnt, c in stats)
    st = 0
    for i, (rst, rnt, c) in enumerate(stats):
        term = rst * multiset_coefficient(rnt, c - 1)
        for j, (_, ont, oc) in enumerate(stats):
            if j != i:
                term *= multiset_coefficient(ont, oc)
        st += term
    return st, nt


def count_oriented(g: OrientedSP) -> CountPair:
    """Lengths of the oriented lists, computed by recurrence alone."""
    node = g.tree if isinstance(g, OrientedSP) else g
    st, nt = _count_pair(node)
    return CountPair(st, nt)


def _count_total(node: Node) -> tuple[int, int]:
    if isinstance(node, Leaf):
        return 1, 1
    pairs = [_count_total(c) for c in node.children]
    if isinstance(node, Series):
        tau = math.prod(p[0] for p in pairs)
        nu = 0
        for j in range(len(pairs)):
            nu += pairs[j][1] * math.prod(p[0] for i, p in enumerate(pairs) if i != j)
        return tau, nu
    nu = math.prod(p[1] for p in pairs)
    tau = 0
    for j in range(len(pairs)):
        tau += pairs[j][0] * math.prod(p[1] for i, p in enumerate(pairs) if i != j)
    return tau, nu


def count_total(g: OrientedSP) -> CountPair:
    """Spanning and near counts with no automorphism reduction."""
    node = g.tree if isinstance(g, OrientedSP) else g
    tau, nu = _count_total(node)
    return CountPair(tau, nu)


# ---------------------------------------------------------------------------
# Orbit indexing (inverse of the enumeration order)
# ---------------------------------------------------------------------------


def _span_mask(node: Node) -> int:
    lo, hi = node.span
    return ((1 << hi) - 1) ^ ((1 << lo) - 1)


def _mapped_mask(mask: int, leaf_map: dict[int, int]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << leaf_map[low.bit_length() - 1]
        mask ^= low
    return out


def _span_index(plan: _Plan, mask: int) -> int:
    if plan.kind == "leaf":
        if mask != 1 << plan.node.index:
            raise ImageNotFound("not the leaf's spanning tree")
        return 0
    if plan.kind == "series":
        rank = 0
        for child in plan.children:
            digit = _span_index(child, mask & _span_mask(child.node))
            rank = rank * child.st + digit
        return rank
    digits, span_class = _parallel_digits(plan, mask)
    if span_class is None:
        raise ImageNotFound("no branch carries a spanning tree")
    rank = 0
    for a in range(span_class):
        rank += plan.classes[a].sc * math.prod(
            cp.nc for j, cp in enumerate(plan.classes) if j != a
        )
    inner = 0
    for j, cp in enumerate(plan.classes):
        radix = cp.sc if j == span_class else cp.nc
        inner = inner * radix + digits[j]
    return rank + inner


def _near_index(plan: _Plan, mask: int) -> int:
    if plan.kind == "leaf":
        if mask != 0:
            raise ImageNotFound("a leaf's near tree is empty")
        return 0
    if plan.kind == "series":
        parts = [mask & _span_mask(c.node) for c in plan.children]
        break_at = None
        for j, (child, part) in enumerate(zip(plan.children, parts)):
            bits = part.bit_count()
            if bits == child.n - 2:
                if break_at is not None:
                    raise ImageNotFound("two branches carry the break")
                break_at = j
            elif bits != child.n - 1:
                raise ImageNotFound("branch edge count fits neither kind")
        if break_at is None:
            raise ImageNotFound("no branch carries the break")
        rank = 0
        for j in range(break_at):
            rank += plan.children[j].nt * math.prod(
                c.st for i, c in enumerate(plan.children) if i != j
            )
        inner = 0
        for j, (child, part) in enumerate(zip(plan.children, parts)):
            if j == break_at:
                inner = inner * child.nt + _near_index(child, part)
            else:
                inner = inner * child.st + _span_index(child, part)
        return rank + inner
    digits, span_class = _parallel_digits(plan, mask)
    if span_class is not None:
        raise ImageNotFound("a near tree cannot contain a spanning branch")
    rank = 0
    for cp, digit in zip(plan.classes, digits):
        rank = rank * cp.nc + digit
    return rank


def _parallel_digits(plan: _Plan, mask: int) -> tuple[list[int], int | None]:
    """Per-class assignment digits for an edge set at a parallel node.

    Exactly one member over all classes may carry a spanning tree; the
    returned digit for that class indexes its spanning assignments, all
    other digits index near assignments.
    """
    digits: list[int] = []
    span_class: int | None = None
    for idx, cp in enumerate(plan.classes):
        rep = cp.rep_plan
        span_tree_idx: int | None = None
        near_indices: list[int] = []
        for p, member_pos in enumerate(cp.members):
            child_node = plan.node.children[member_pos]
            part = mask & _span_mask(child_node)
            rep_mask = _mapped_mask(part, cp.to_rep[p])
            bits = rep_mask.bit_count()
            if bits == rep.n - 1:
                if span_tree_idx is not None or span_class is not None:
                    raise ImageNotFound("two branches carry spanning trees")
                span_tree_idx = _span_index(rep, rep_mask)
            elif bits == rep.n - 2:
                near_indices.append(_near_index(rep, rep_mask))
            else:
                raise ImageNotFound("branch edge count fits neither kind")
        near_indices.sort()
        if span_tree_idx is not None:
            span_class = idx
            digit = span_tree_idx * multiset_coefficient(rep.nt, cp.size - 1)
            digit += multiset_rank(tuple(near_indices), rep.nt)
        else:
            digit = multiset_rank(tuple(near_indices), rep.nt)
        digits.append(digit)
    return digits, span_class


def spanning_tree_index(g: OrientedSP, es: EdgeSet) -> int:
    """Enumeration position of the orbit containing a spanning tree `es`."""
    return _span_index(build_plan(g), es.mask)


def near_tree_index(g: OrientedSP, es: EdgeSet) -> int:
    """Enumeration position of the orbit containing a near tree `es`."""
    return _near_index(build_plan(g), es.mask)
