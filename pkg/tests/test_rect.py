from __future__ import annotations

import random

from ppdigraph.digraph import build, clique, cycle, disjoint_union, path, transitive_tournament
from ppdigraph.homsearch import core_of
from ppdigraph.minorcond import maltsev, satisfies
from ppdigraph.rect import (
    RectWitness,
    has_maltsev,
    is_k_rectangular,
    is_totally_rectangular,
    reach_relation,
    verify_rect_witness,
)

from conftest import random_digraph


def _walks_exactly(g, k):
    # oracle: enumerate walks recursively
    pairs = set()

    def step(x, depth, start):
        if depth == k:
            pairs.add((start, x))
            return
        for y in g.out_neighbors(x):
            step(y, depth + 1, start)

    for s in range(g.n):
        step(s, 0, s)
    return pairs


def test_reach_relation_examples():
    t3 = transitive_tournament(3)
    assert set(reach_relation(t3, 1).pairs()) == {(0, 1), (0, 2), (1, 2)}
    assert set(reach_relation(cycle(3), 3).pairs()) == {(0, 0), (1, 1), (2, 2)}
    assert set(reach_relation(path(3), 2).pairs()) == {(0, 2)}


def test_reach_relation_matches_walk_enumeration():
    rng = random.Random(3)
    for _ in range(25):
        g = random_digraph(rng, rng.randint(1, 4), p=0.4)
        for k in range(1, 6):
            assert set(reach_relation(g, k).pairs()) == _walks_exactly(g, k)


def test_tournament_not_1_rectangular():
    w = is_k_rectangular(transitive_tournament(3), 1)
    assert w == RectWitness(k=1, a=1, b=2, c=0, d=1)
    assert verify_rect_witness(transitive_tournament(3), w)


def test_cycles_are_k_rectangular():
    for k in range(1, 11):
        assert is_k_rectangular(cycle(5), k) is None


def test_clique_witness():
    w = is_k_rectangular(clique(3), 1)
    assert w == RectWitness(k=1, a=0, b=1, c=2, d=0)
    assert verify_rect_witness(clique(3), w)


def test_total_rectangularity_of_cycles_and_paths():
    for n in range(1, 11):
        assert is_totally_rectangular(cycle(n)) is None
    for k in range(1, 7):
        assert is_totally_rectangular(path(k)) is None


def test_total_rectangularity_failures():
    w = is_totally_rectangular(transitive_tournament(3))
    assert w is not None and w.k == 1
    assert verify_rect_witness(transitive_tournament(3), w)
    # rectangular at k=1 but not k=2: length-2 paths 0->4->1, 2->5->1,
    # 2->6->3 give walks 0=>1, 2=>1, 2=>3 but no 0=>3
    g = build(7, [(0, 4), (4, 1), (2, 5), (5, 1), (2, 6), (6, 3)])
    assert is_k_rectangular(g, 1) is None
    w2 = is_totally_rectangular(g)
    assert w2 == RectWitness(k=2, a=0, b=1, c=2, d=3)
    assert verify_rect_witness(g, w2)


def test_has_maltsev_examples():
    assert has_maltsev(disjoint_union([cycle(6), cycle(3)]))
    assert not has_maltsev(transitive_tournament(3))
    assert not has_maltsev(clique(3))


def test_maltsev_agrees_with_condition_engine_on_cores_random_n4():
    # the walk-relation route and the condition engine must agree on cores;
    # on non-cores only the condition is hom-invariant, rectangularity is not
    rng = random.Random(77)
    for _ in range(50):
        g = random_digraph(rng, 4, p=rng.uniform(0.15, 0.6), loops=False)
        core, _ = core_of(g)
        assert bool(has_maltsev(core)) == bool(satisfies(core, maltsev())), g


def test_total_rectangularity_not_hom_invariant():
    # both graphs below are hom-equivalent to the single-edge digraph, yet
    # the four-vertex one fails 1-rectangularity: 1->0, 3->0, 3->2, no 1->2
    g = build(4, [(1, 0), (3, 0), (3, 2)])
    core, _ = core_of(g)
    assert core.n == 2 and core.num_edges == 1
    assert bool(satisfies(g, maltsev()))
    w = is_totally_rectangular(g)
    assert w == RectWitness(k=1, a=1, b=0, c=3, d=2)
    assert verify_rect_witness(g, w)


def test_witness_always_reverifies():
    rng = random.Random(13)
    for _ in range(40):
        g = random_digraph(rng, rng.randint(2, 5), p=0.4)
        w = is_totally_rectangular(g)
        if w is not None:
            assert verify_rect_witness(g, w)
