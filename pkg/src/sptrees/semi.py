"""Semioriented enumeration: spanning trees up to terminal exchange.

When no automorphism can exchange the terminals, the semioriented
output is bit-identical to the oriented one.  Otherwise the oriented
enumeration produces the surviving trees in pairs related by the
reversal symmetry, and a top-level lexicographic filter keeps exactly
one of each pair: a candidate (as its tuple of per-child tree indices,
or per-class assignment indices) is emitted iff it compares >= its
partner under the reversal-induced index permutations.  The comparison
uses the full tuple, including the middle child of an odd series chain
and self-paired parallel classes, so a candidate whose outer positions
are palindromic is still paired off through its middle entry.  All
recursive calls below the top level stay oriented.

Counting needs no enumeration: with a reversal the semioriented count
is (oriented count + fixed candidates) / 2, and the fixed-candidate
count reduces recursively to children's own semioriented counts (the
number of reversal-fixed entries of a child's list is twice its
semioriented count minus its oriented count, independent of which
reversal realizes the symmetry).
"""

from __future__ import annotations

import itertools
import math

from .canonical import (
    MirrorPairing,
    canonical_code,
    mirror_pairing,
    reversal_code,
)
from .core import EdgeSet, Leaf, Node, OrientedSP, SemiorientedSP, Series
from .generate import (
    ImageNotFound,
    _class_near_sets,
    _class_span_sets,
    _near_index,
    _near_list,
    _span_index,
    _spanning_list,
    build_plan,
    multiset_coefficient,
    multiset_enumerate,
    multiset_rank,
)


def _tree_of(g) -> Node:
    if isinstance(g, (SemiorientedSP, OrientedSP)):
        return g.tree
    return g


# ---------------------------------------------------------------------------
# Reversal-induced index permutations
# ---------------------------------------------------------------------------


def reversal_index_perm(
    child, mirror, r: dict[int, int], kind: str = "spanning"
) -> tuple[int, ...]:
    """Index action of a reversal bijection between two tree lists.

    Entry x is the position, in `mirror`'s list, of the orbit containing
    the image under `r` of `child`'s x-th tree.  Total whenever the
    enumeration covers every orbit; an unlocatable image raises
    ImageNotFound and means the index-stability contract is broken.
    """
    child_plan = build_plan(_tree_of(child))
    mirror_plan = build_plan(_tree_of(mirror))
    if kind == "spanning":
        source = _spanning_list(child_plan)
        locate = _span_index
    elif kind == "near":
        source = _near_list(child_plan)
        locate = _near_index
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return tuple(locate(mirror_plan, es.mapped(r).mask) for es in source)


def _index_perm(src_plan, dst_plan, r: dict[int, int], kind: str) -> list[int]:
    if kind == "spanning":
        source, locate = _spanning_list(src_plan), _span_index
    else:
        source, locate = _near_list(src_plan), _near_index
    return [locate(dst_plan, es.mapped(r).mask) for es in source]


# ---------------------------------------------------------------------------
# Enumeration with the top-level filter
# ---------------------------------------------------------------------------


def semioriented_spanning(g: SemiorientedSP) -> list[EdgeSet]:
    """Nonequivalent spanning trees of (G, {s, t}), in enumeration order."""
    return list(iter_semioriented_spanning(g))


def iter_semioriented_spanning(g: SemiorientedSP):
    tree = _tree_of(g)
    plan = build_plan(tree)
    pairing = mirror_pairing(tree)
    if pairing is None or pairing.kind == "leaf":
        yield from _spanning_list(plan)
        return
    if pairing.kind == "series":
        yield from _filtered_series(plan, pairing)
    else:
        yield from _filtered_parallel(plan, pairing)


def _filtered_series(plan, pairing: MirrorPairing):
    children = plan.children
    k = len(children)
    lists = [_spanning_list(c) for c in children]
    perms = [
        _index_perm(children[i], children[k - 1 - i], pairing.series_maps[i], "spanning")
        for i in range(k)
    ]
    ranges = [range(len(lst)) for lst in lists]
    for tup in itertools.product(*ranges):
        partner = tuple(perms[k - 1 - p][tup[k - 1 - p]] for p in range(k))
        if tup >= partner:
            mask = 0
            for p, x in enumerate(tup):
                mask |= lists[p][x].mask
            yield EdgeSet(mask)


def _assignment_perm(cp_a, cp_b, r: dict[int, int]) -> list[int]:
    """Map class a's assignment indices into class b's, through reversal `r`.

    Assignment indices put the near multisets first, then the spanning
    choices ordered by (tree, multiset); paired classes have identical
    shapes, so the image index is computed in class b's own space.
    """
    near_perm = _index_perm(cp_a.rep_plan, cp_b.rep_plan, r, "near")
    span_perm = _index_perm(cp_a.rep_plan, cp_b.rep_plan, r, "spanning")
    nt_b = cp_b.rep_plan.nt
    out: list[int] = []
    for mu in multiset_enumerate(cp_a.rep_plan.nt, cp_a.size):
        image = tuple(sorted(near_perm[x] for x in mu))
        out.append(multiset_rank(image, nt_b))
    block = multiset_coefficient(nt_b, cp_b.size - 1)
    for s in range(cp_a.rep_plan.st):
        for mu in multiset_enumerate(cp_a.rep_plan.nt, cp_a.size - 1):
            image = tuple(sorted(near_perm[x] for x in mu))
            out.append(cp_b.nc + span_perm[s] * block + multiset_rank(image, nt_b))
    return out


def _filtered_parallel(plan, pairing: MirrorPairing):
    classes = plan.classes
    rho: list[list[int] | None] = [None] * len(classes)
    target: list[int] = list(range(len(classes)))
    for a, b, r in pairing.class_pairs:
        rho[a] = _assignment_perm(classes[a], classes[b], r)
        target[a] = b
        if b != a:
            rho[b] = [0] * len(rho[a])
            for src, dst in enumerate(rho[a]):
                rho[b][dst] = src
            target[b] = a
    near_sets = [_class_near_sets(cp) for cp in classes]
    span_sets = [_class_span_sets(cp) for cp in classes]
    for span_class in range(len(classes)):
        ranges = []
        for j, cp in enumerate(classes):
            if j == span_class:
                ranges.append(range(cp.nc, cp.nc + cp.sc))
            else:
                ranges.append(range(cp.nc))
        for tup in itertools.product(*ranges):
            partner = [0] * len(classes)
            for a in range(len(classes)):
                partner[target[a]] = rho[a][tup[a]]
            if tup >= tuple(partner):
                mask = 0
                for j, digit in enumerate(tup):
                    cp = classes[j]
                    es = near_sets[j][digit] if digit < cp.nc else span_sets[j][digit - cp.nc]
                    mask |= es.mask
                yield EdgeSet(mask)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def _invariant_multisets(fixed: int, swapped_pairs: int, size: int) -> int:
    """Size-`size` multisets invariant under an involution on the items.

    The involution has `fixed` fixed items and `swapped_pairs` 2-cycles;
    an invariant multiset gives both members of a 2-cycle the same
    multiplicity, so pairs are drawn two at a time.
    """
    total = 0
    for j in range(size // 2 + 1):
        total += multiset_coefficient(swapped_pairs, j) * multiset_coefficient(
            fixed, size - 2 * j
        )
    return total


def _quad(node: Node) -> tuple[int, int, int, int]:
    """(oriented spanning, oriented near, semi spanning, semi near) counts."""
    if isinstance(node, Leaf):
        return 1, 1, 1, 1
    if isinstance(node, Series):
        quads = [_quad(c) for c in node.children]
        k = len(quads)
        st = math.prod(q[0] for q in quads)
        nt = sum(
            quads[j][1] * math.prod(q[0] for i, q in enumerate(quads) if i != j)
            for j in range(k)
        )
        codes = [canonical_code(c) for c in node.children]
        rev_codes = [reversal_code(c) for c in node.children]
        if any(codes[i] != rev_codes[k - 1 - i] for i in range(k)):
            return st, nt, st, nt
        fix_sp = math.prod(quads[i][0] for i in range(k // 2))
        fix_nt = 0
        if k % 2 == 1:
            mid = quads[k // 2]
            fix_nt = (2 * mid[3] - mid[1]) * math.prod(quads[i][0] for i in range(k // 2))
            fix_sp *= 2 * mid[2] - mid[0]
        assert (st + fix_sp) % 2 == 0 and (nt + fix_nt) % 2 == 0
        return st, nt, (st + fix_sp) // 2, (nt + fix_nt) // 2

    groups: dict[str, list[Node]] = {}
    for child in node.children:
        groups.setdefault(canonical_code(child), []).append(child)
    stats = []
    for code, members in groups.items():
        q = _quad(members[0])
        stats.append((code, reversal_code(members[0]), len(members), q))
    nc = [multiset_coefficient(q[1], c) for _, _, c, q in stats]
    sc = [q[0] * multiset_coefficient(q[1], c - 1) for _, _, c, q in stats]
    nt = math.prod(nc)
    st = sum(
        sc[i] * math.prod(ncj for j, ncj in enumerate(nc) if j != i)
        for i in range(len(stats))
    )
    size_of = {code: c for code, _, c, _ in stats}
    paired = all(size_of.get(rev) == c for _, rev, c, _ in stats)
    if not paired:
        return st, nt, st, nt
    self_paired = [i for i, (code, rev, _, _) in enumerate(stats) if code == rev]
    pair_nc = 1
    seen = set()
    for i, (code, rev, _, _) in enumerate(stats):
        if code == rev or code in seen:
            continue
        seen.add(rev)
        pair_nc *= nc[i]
    fix_nc = {}
    fix_sc = {}
    for i in self_paired:
        _, _, c, (ost, ont, sst, snt) = stats[i]
        f_nt = 2 * snt - ont
        q_nt = (ont - f_nt) // 2
        f_st = 2 * sst - ost
        fix_nc[i] = _invariant_multisets(f_nt, q_nt, c)
        fix_sc[i] = f_st * _invariant_multisets(f_nt, q_nt, c - 1)
    fix_nt = pair_nc * math.prod(fix_nc[i] for i in self_paired)
    fix_sp = sum(
        fix_sc[i] * math.prod(fix_nc[j] for j in self_paired if j != i) * pair_nc
        for i in self_paired
    )
    assert (st + fix_sp) % 2 == 0 and (nt + fix_nt) % 2 == 0
    return st, nt, (st + fix_sp) // 2, (nt + fix_nt) // 2


def count_semioriented(g: SemiorientedSP) -> int:
    """Length of the semioriented spanning list, by recurrence alone."""
    return _quad(_tree_of(g))[2]
