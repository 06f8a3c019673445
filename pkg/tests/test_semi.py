"""Semioriented enumeration, reversal index permutations, and counting."""

import pytest

from sptrees import (
    FixSet,
    OrientedSP,
    SemiorientedSP,
    all_spanning_trees,
    automorphisms,
    burnside_count,
    count_oriented,
    count_semioriented,
    iter_semioriented_spanning,
    mirror_pairing,
    orbit_partition,
    oriented_spanning,
    parse_sp,
    reversal_index_perm,
    semioriented_spanning,
    underlying_graph,
)
from sptrees.canonical import reversal_map
from sptrees.generate import build_plan
from sptrees.oracle import apply_permutation

from conftest import mirror_symmetric, orbit_exactly_once, small_corpus


def test_diamond_semioriented_count_is_three(diamond):
    semi = semioriented_spanning(SemiorientedSP(diamond))
    assert len(semi) == count_semioriented(SemiorientedSP(diamond)) == 3
    g = underlying_graph(diamond)
    aut_semi = automorphisms(g, FixSet("2", "3"))
    report = orbit_partition(all_spanning_trees(g), aut_semi, g)
    assert report.orbit_count == 3
    assert orbit_exactly_once(semi, report)


def test_four_cycle_collapses_to_one_tree():
    c4 = parse_sp("P(S(e(s,a),e(a,t)),S(e(s,b),e(b,t)))")
    semi = semioriented_spanning(SemiorientedSP(c4))
    assert len(semi) == count_semioriented(SemiorientedSP(c4)) == 1
    g = underlying_graph(c4)
    aut_semi = automorphisms(g, FixSet("s", "t"))
    assert len(aut_semi) == 4
    assert burnside_count(all_spanning_trees(g), aut_semi, g) == 1


def test_theta_semioriented_count_is_six(theta):
    """Burnside over the order-4 group: (15 + 3 + 3 + 3) / 4 = 6."""
    g = underlying_graph(theta)
    aut_semi = automorphisms(g, FixSet("s", "t"))
    assert len(aut_semi) == 4
    trees = all_spanning_trees(g)
    fixed_per_element = sorted(
        sum(1 for t in trees if apply_permutation(g, sigma, t) == t)
        for sigma in aut_semi
    )
    assert fixed_per_element == [3, 3, 3, 15]
    assert burnside_count(trees, aut_semi, g) == 6
    semi = semioriented_spanning(SemiorientedSP(theta))
    assert len(semi) == count_semioriented(SemiorientedSP(theta)) == 6
    assert orbit_exactly_once(semi, orbit_partition(trees, aut_semi, g))


def test_two_chain_has_single_semi_tree():
    two = parse_sp("S(e(s,a),e(a,t))")
    assert count_semioriented(SemiorientedSP(two)) == 1
    assert len(semioriented_spanning(SemiorientedSP(two))) == 1


def test_leaf_semioriented_matches_oriented():
    leaf = parse_sp("e(s,t)")
    assert semioriented_spanning(SemiorientedSP(leaf)) == oriented_spanning(
        OrientedSP(leaf)
    )


def test_no_pairing_output_is_bit_identical():
    tree = parse_sp("S(P(e(s,m),S(e(s,a),e(a,m))),e(m,t))")
    assert mirror_pairing(tree) is None
    assert semioriented_spanning(SemiorientedSP(tree)) == oriented_spanning(
        OrientedSP(tree)
    )
    assert count_semioriented(SemiorientedSP(tree)) == count_oriented(
        OrientedSP(tree)
    ).spanning


def test_reversal_index_perm_single_edge():
    leaf = parse_sp("e(s,t)")
    r = reversal_map(leaf, leaf)
    assert reversal_index_perm(leaf, leaf, r) == (0,)


def test_reversal_index_perm_three_chain_near():
    chain3 = parse_sp("S(e(s,a),e(a,b),e(b,t))")
    r = reversal_map(chain3, chain3)
    assert reversal_index_perm(chain3, chain3, r, kind="near") == (2, 1, 0)
    assert reversal_index_perm(chain3, chain3, r, kind="spanning") == (0,)


def test_reversal_index_perm_diamond_paths(diamond):
    path1, path2 = diamond.children[1], diamond.children[2]
    r = reversal_map(path1, path2)
    assert r is not None
    assert reversal_index_perm(path1, path2, r) == (0,)


@pytest.mark.parametrize("seed", range(50))
def test_mirror_symmetric_perms_total_and_involutive(seed):
    """Reversal index permutations are total bijections and involutions."""
    tree = mirror_symmetric(seed)
    pairing = mirror_pairing(tree)
    assert pairing is not None
    if pairing.kind == "series":
        kids = tree.children
        k = len(kids)
        for i in range(k):
            j = k - 1 - i
            forward = reversal_index_perm(kids[i], kids[j], pairing.series_maps[i])
            backward = reversal_index_perm(kids[j], kids[i], pairing.series_maps[j])
            assert sorted(forward) == list(range(len(forward)))
            for x, fx in enumerate(forward):
                assert backward[fx] == x
    else:
        plan = build_plan(tree)
        for a, b, r in pairing.class_pairs:
            rep_a = plan.classes[a].rep_plan.node
            rep_b = plan.classes[b].rep_plan.node
            inverse = {v: k for k, v in r.items()}
            for kind in ("spanning", "near"):
                forward = reversal_index_perm(rep_a, rep_b, r, kind=kind)
                backward = reversal_index_perm(rep_b, rep_a, inverse, kind=kind)
                assert sorted(forward) == list(range(len(forward)))
                for x, fx in enumerate(forward):
                    assert backward[fx] == x


@pytest.mark.parametrize("seed", range(30))
def test_semi_agrees_with_oracle_on_small_instances(seed):
    tree = small_corpus(1, max_vertices=10, start_seed=seed * 601)[0]
    g = underlying_graph(tree)
    semi = semioriented_spanning(SemiorientedSP(tree))
    assert list(iter_semioriented_spanning(SemiorientedSP(tree))) == semi
    assert len(semi) == count_semioriented(SemiorientedSP(tree))
    aut_semi = automorphisms(g, FixSet(tree.source, tree.target))
    trees = all_spanning_trees(g)
    report = orbit_partition(trees, aut_semi, g)
    assert orbit_exactly_once(semi, report)
    assert burnside_count(trees, aut_semi, g) == report.orbit_count


@pytest.mark.parametrize("seed", range(25))
def test_filter_conservation(seed):
    """With a reversal, semi count = (oriented count + fixed candidates) / 2."""
    tree = mirror_symmetric(seed)
    oriented_count = count_oriented(OrientedSP(tree)).spanning
    semi_count = count_semioriented(SemiorientedSP(tree))
    fixed = 2 * semi_count - oriented_count
    assert 0 <= fixed <= oriented_count
    assert (oriented_count + fixed) % 2 == 0
    if underlying_graph(tree).n <= 10:
        g = underlying_graph(tree)
        aut_semi = automorphisms(g, FixSet(tree.source, tree.target))
        assert (
            burnside_count(all_spanning_trees(g), aut_semi, g) == semi_count
        )


@pytest.mark.parametrize("seed", range(25))
def test_semi_output_is_subsequence_of_oriented(seed):
    tree = mirror_symmetric(seed)
    oriented_list = oriented_spanning(OrientedSP(tree))
    semi = semioriented_spanning(SemiorientedSP(tree))
    positions = {es: i for i, es in enumerate(oriented_list)}
    mapped = [positions[es] for es in semi]
    assert mapped == sorted(mapped)
    assert len(set(mapped)) == len(mapped)
