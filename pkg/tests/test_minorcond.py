from __future__ import annotations

import random
from itertools import product

import pytest

from ppdigraph.digraph import build, cycle, path, transitive_tournament
from ppdigraph.errors import ArityMismatch, BudgetExceeded, ParseError, UnknownBuiltin
from ppdigraph.homsearch import core_of
from ppdigraph.minorcond import (
    MinorCondition,
    MinorMap,
    PolymorphismWitness,
    brute_force_satisfies,
    builtin,
    constant,
    cyclic,
    format_condition,
    fourfold,
    indicator,
    maltsev,
    parse_condition,
    satisfies,
    verify_witness,
)

from conftest import all_digraphs, random_digraph

P2 = build(2, [(0, 1)])


def test_builtin_shapes():
    c3 = builtin("cyclic:3")
    assert c3.symbols == (("f", 3),) and len(c3.equations) == 1
    assert builtin("cyclic(4)") == cyclic(4)
    m = builtin("maltsev")
    assert m.symbols == (("f", 3),) and len(m.equations) == 2
    assert len(builtin("fourfold").equations) == 3
    assert builtin("constant").symbols == (("f", 1),)
    with pytest.raises(UnknownBuiltin):
        builtin("cyclic")
    with pytest.raises(UnknownBuiltin):
        builtin("nope")
    with pytest.raises(UnknownBuiltin):
        builtin("cyclic:1")


def test_parse_maltsev_matches_builtin():
    cond = parse_condition("f(x,y,y)=f(x,x,x); f(x,x,x)=f(y,y,x)")
    assert cond.symbols == (("f", 3),)
    (l1, r1), (l2, r2) = cond.equations
    assert l1[1].table == (1, 2, 2) and r1[1].table == (1, 1, 1)
    assert l2[1].table == (1, 1, 1) and r2[1].table == (2, 2, 1)
    # same equations as the builtin, up to list order and side swaps
    assert {frozenset(eq) for eq in cond.equations} == {
        frozenset(eq) for eq in maltsev().equations
    }


def test_parse_binary_commutativity():
    cond = parse_condition("f(x,y)=f(y,x)")
    assert cond == cyclic(2)


def test_parse_constant_condition():
    cond = parse_condition("f(x)=f(y)")
    assert cond == constant()


def test_parse_chains_comments_multisymbol():
    cond = parse_condition(
        """
        # ternary chain
        f(x,x,y) = f(y,y,x) = f(x,y,y) = f(y,x,x)
        """
    )
    assert cond == fourfold()
    two = parse_condition("f(x,y)=g(y,x); g(x,x)=f(x,x)")
    assert two.symbols == (("f", 2), ("g", 2))


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_condition("f(x,y) f(y,x)")
    with pytest.raises(ParseError):
        parse_condition("f(x,=y)")
    with pytest.raises(ParseError):
        parse_condition("")
    with pytest.raises(ParseError):
        parse_condition("f(x,y) = 3(x)")
    with pytest.raises(ArityMismatch):
        parse_condition("f(x,y)=f(x,x,x)")


def test_format_parse_stabilizes():
    # one format/parse pass canonicalizes variable numbering; after that the
    # pair is an exact round trip
    for cond in (cyclic(3), maltsev(), constant(), fourfold()):
        once = parse_condition(format_condition(cond))
        twice = parse_condition(format_condition(once))
        assert twice == once
        for g in (P2, cycle(2), cycle(3)):
            assert bool(satisfies(g, once)) == bool(satisfies(g, cond))


def test_minormap_validation():
    with pytest.raises(ValueError):
        MinorMap(2, 2, (0, 1))
    with pytest.raises(ValueError):
        MinorMap(2, 2, (1, 3))
    with pytest.raises(ArityMismatch):
        MinorCondition(
            (("f", 2),),
            (
                (
                    ("f", MinorMap(2, 2, (1, 2))),
                    ("f", MinorMap(2, 3, (1, 2))),
                ),
            ),
        )


def test_indicator_c3_commutative_burnside():
    # orbits of ordered pairs under swap: (9 + 3) / 2 = 6
    ind = indicator(cycle(3), cyclic(2))
    assert ind.graph.n == 6
    assert ind.class_of("f", (0, 1)) == ind.class_of("f", (1, 0))
    assert ind.class_of("f", (0, 0)) != ind.class_of("f", (1, 1))


def test_indicator_p2_constant_collapses():
    # both unary tuples land in one class; the base edge then forces a loop
    # on that class, which is what makes a constant polymorphism impossible
    ind = indicator(P2, constant())
    assert ind.graph.n == 1
    assert ind.graph.edges == frozenset({(0, 0)})


def test_indicator_c2_maltsev_hand_enumeration():
    # classes of {0,1}^3 under f(y,y,x)=f(x,x,x)=f(x,y,y):
    #   {000,110,011}, {111,001,100}, {010}, {101}
    ind = indicator(cycle(2), maltsev())
    assert ind.graph.n == 4
    cls = ind.class_of
    assert cls("f", (0, 0, 0)) == cls("f", (1, 1, 0)) == cls("f", (0, 1, 1))
    assert cls("f", (1, 1, 1)) == cls("f", (0, 0, 1)) == cls("f", (1, 0, 0))
    assert len({cls("f", t) for t in product(range(2), repeat=3)}) == 4
    # coordinatewise successor swaps every bit: two disjoint 2-cycles
    assert ind.graph.num_edges == 4


def test_indicator_budget():
    with pytest.raises(BudgetExceeded):
        indicator(cycle(3), cyclic(5), vertex_budget=100)


def test_satisfies_c3_commutative():
    res = satisfies(cycle(3), cyclic(2))
    assert res and res.witness is not None
    assert verify_witness(res.witness, cyclic(2))
    w = res.witness
    assert all(
        w.apply("f", (x, y)) == w.apply("f", (y, x)) for x in range(3) for y in range(3)
    )


def test_satisfies_cyclic_on_same_prime_fails():
    assert not satisfies(cycle(3), cyclic(3))
    assert not satisfies(cycle(2), cyclic(2))


def test_tournament_maltsev_vs_cyclic():
    t3 = transitive_tournament(3)
    assert not satisfies(t3, maltsev())
    res = satisfies(t3, cyclic(5))
    assert res
    # max is one valid witness; ours must at least be *a* witness
    assert verify_witness(res.witness, cyclic(5))


def test_witness_pullback_tables_are_polymorphisms():
    res = satisfies(cycle(5), maltsev())
    assert res
    w = res.witness
    # spot-check the defining identities pointwise
    for x in range(5):
        for y in range(5):
            assert w.apply("f", (y, y, x)) == w.apply("f", (x, x, x)) == w.apply("f", (x, y, y))


def test_brute_force_p2_maltsev_and_fourfold():
    assert brute_force_satisfies(P2, maltsev())
    assert brute_force_satisfies(P2, fourfold())
    mx = {(x, y, z): max(x, y, z) for x, y, z in product(range(2), repeat=3)}
    tab = [mx[t] for t in product(range(2), repeat=3)]
    from types import MappingProxyType

    w = PolymorphismWitness(
        base=P2, arities=MappingProxyType({"f": 3}), tables=MappingProxyType({"f": tab})
    )
    assert verify_witness(w, fourfold())


def test_brute_force_c2_commutative_fails():
    assert not brute_force_satisfies(cycle(2), cyclic(2))


def test_constant_condition_separates_p1_from_p2():
    assert satisfies(build(1, []), constant())
    assert not satisfies(P2, constant())


def test_cyclic_prime_table_small():
    for p in (2, 3):
        for q in (2, 3):
            assert bool(satisfies(cycle(q), cyclic(p))) == (p != q)


def test_oracle_agreement_exhaustive_n2():
    conds = [cyclic(2), cyclic(3), maltsev(), constant(), fourfold()]
    for g in all_digraphs(2, loops=True):
        for cond in conds:
            assert bool(satisfies(g, cond)) == brute_force_satisfies(g, cond), (g, cond)


def test_oracle_agreement_random_n3():
    rng = random.Random(31)
    conds = [cyclic(2), cyclic(3), maltsev(), constant(), fourfold()]
    for _ in range(12):
        g = random_digraph(rng, 3, p=rng.uniform(0.2, 0.8))
        for cond in conds:
            assert bool(satisfies(g, cond)) == brute_force_satisfies(g, cond), (g, cond)


def test_satisfaction_invariant_under_core():
    rng = random.Random(17)
    conds = [cyclic(2), cyclic(3), maltsev()]
    for _ in range(10):
        g = random_digraph(rng, rng.randint(1, 4), p=0.4)
        core, _ = core_of(g)
        for cond in conds:
            assert bool(satisfies(g, cond)) == bool(satisfies(core, cond))


def test_verify_witness_rejects_garbage():
    from types import MappingProxyType

    bad = PolymorphismWitness(
        base=cycle(3),
        arities=MappingProxyType({"f": 2}),
        tables=MappingProxyType({"f": [0] * 9}),
    )
    # constant-0 is not a polymorphism of C3 (no loop at 0)
    assert not verify_witness(bad, cyclic(2))
