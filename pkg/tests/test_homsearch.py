from __future__ import annotations

import random
from itertools import product

import pytest

from ppdigraph.digraph import build, clique, cycle, disjoint_union, path, shape_of, transitive_tournament
from ppdigraph.errors import BudgetExhausted, PinOutOfRange
from ppdigraph.homsearch import Hom, SearchBudget, core_of, find_hom, hom_equivalent, is_core

from conftest import all_digraphs, brute_force_hom, random_digraph


def test_c6_to_c3_mod_map():
    h = find_hom(cycle(6), cycle(3))
    assert h is not None
    assert all((h(u) + 1) % 3 == h((u + 1) % 6) for u in range(6))


def test_c3_to_c6_absent():
    # oracle: all 6^3 maps fail
    assert brute_force_hom(cycle(3), cycle(6)) is None
    assert find_hom(cycle(3), cycle(6)) is None


def test_p3_to_p2_absent():
    assert brute_force_hom(path(3), path(2)) is None
    assert find_hom(path(3), path(2)) is None


def test_pins_respected():
    h = find_hom(cycle(6), cycle(3), pins={0: 2})
    assert h is not None and h(0) == 2
    assert find_hom(path(2), path(2), pins={0: 1}) is None
    with pytest.raises(PinOutOfRange):
        find_hom(path(2), path(2), pins={5: 0})
    with pytest.raises(PinOutOfRange):
        find_hom(path(2), path(2), pins={0: 7})


def test_budget_exhaustion_is_not_no():
    g = clique(4)
    with pytest.raises(BudgetExhausted):
        find_hom(g, clique(5), budget=SearchBudget(node_limit=1))


def test_agreement_with_brute_force_exhaustive_small():
    graphs = []
    for n in (1, 2):
        graphs.extend(all_digraphs(n, loops=True))
    pairs = 0
    for g, h in product(graphs, repeat=2):
        expect = brute_force_hom(g, h) is not None
        got = find_hom(g, h) is not None
        assert got == expect, (g, h)
        pairs += 1
    assert pairs == (2 + 16) ** 2


def test_agreement_with_brute_force_random_n3():
    rng = random.Random(42)
    for _ in range(400):
        g = random_digraph(rng, 3, p=0.4)
        h = random_digraph(rng, 3, p=0.4)
        assert (find_hom(g, h) is not None) == (brute_force_hom(g, h) is not None)


def test_hom_certification_rejects_bad_map():
    with pytest.raises(ValueError):
        Hom(path(2), path(2), (1, 0))


def test_hom_equivalent_examples():
    res = hom_equivalent(disjoint_union([cycle(6), cycle(3)]), cycle(3))
    assert res and res.forward is not None and res.backward is not None

    assert not hom_equivalent(path(2), transitive_tournament(3))
    assert brute_force_hom(transitive_tournament(3), path(2)) is None

    g = random_digraph(random.Random(1), 4)
    assert hom_equivalent(g, g)


def test_core_of_edgeless():
    g = build(5, [])
    core, retract = core_of(g)
    assert core.n == 1 and core.num_edges == 0
    assert retract.map == (0, 0, 0, 0, 0)


def test_core_of_cycle_union():
    g = disjoint_union([cycle(6), cycle(3)])
    core, retract = core_of(g)
    assert shape_of(core).cycle_lengths == (3,)
    assert retract.source is g and retract.target is core
    # deterministic golden witness (frozen output of the fixed search order)
    assert retract.map == (0, 1, 2, 0, 1, 2, 0, 1, 2)


def test_core_of_t3_is_identity():
    # oracle: the only endomorphism of the transitive tournament is identity
    t3 = transitive_tournament(3)
    endos = [m for m in product(range(3), repeat=3) if all((m[u], m[v]) in t3.edges for u, v in t3.edges)]
    assert endos == [(0, 1, 2)]
    core, retract = core_of(t3)
    assert core == t3 and retract.map == (0, 1, 2)


def test_is_core_examples():
    # oracle: every endomorphism of C5 is a bijection
    c5 = cycle(5)
    for m in product(range(5), repeat=5):
        if all((m[u], m[v]) in c5.edges for u, v in c5.edges):
            assert len(set(m)) == 5
    assert is_core(c5)
    assert not is_core(build(2, []))
    assert is_core(path(2))


def test_core_idempotent_and_equivalent():
    rng = random.Random(9)
    for _ in range(25):
        g = random_digraph(rng, rng.randint(1, 5), p=0.35)
        core, retract = core_of(g)
        assert is_core(core)
        again, _ = core_of(core)
        assert again.n == core.n and again == core
        assert hom_equivalent(g, core)


def test_find_hom_deterministic():
    g = disjoint_union([cycle(6), cycle(3)])
    maps = {find_hom(g, cycle(3)).map for _ in range(3)}
    assert len(maps) == 1
