"""Shared oracles and generators.

The oracles here deliberately avoid the package's search kernel: homomorphism
questions are settled by enumerating all n(H)^n(G) maps, so kernel results can
be cross-checked against an independent route.
"""

from __future__ import annotations

import random
from itertools import product

from ppdigraph.digraph import Digraph, build


def brute_force_hom(g: Digraph, h: Digraph):
    """First homomorphism g -> h in lexicographic map order, else None."""
    edges = list(g.edges)
    for m in product(range(h.n), repeat=g.n):
        if all((m[u], m[v]) in h.edges for u, v in edges):
            return m
    return None


def brute_force_all_homs(g: Digraph, h: Digraph):
    edges = list(g.edges)
    return [
        m
        for m in product(range(h.n), repeat=g.n)
        if all((m[u], m[v]) in h.edges for u, v in edges)
    ]


def all_digraphs(n: int, loops: bool = False):
    """Every digraph on n vertices, optionally with loops."""
    slots = [(u, v) for u in range(n) for v in range(n) if loops or u != v]
    for bits in range(1 << len(slots)):
        yield build(n, [slots[i] for i in range(len(slots)) if bits >> i & 1])


def random_digraph(rng: random.Random, n: int, p: float = 0.3, loops: bool = True) -> Digraph:
    edges = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if (loops or u != v) and rng.random() < p
    ]
    return build(n, edges)
