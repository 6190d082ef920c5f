"""The compiled and pure kernels must be interchangeable bit for bit:
same status, same witness, same node count."""

from __future__ import annotations

import random

import pytest

from ppdigraph import _kernel
from ppdigraph.digraph import build, cycle, direct_power, path

from conftest import random_digraph

needs_compiled = pytest.mark.skipif(
    "compiled" not in _kernel.available_backends(),
    reason="compiled kernel not built",
)


def _run(g, h, domains=None, limit=10_000_000, backend=None):
    dom = domains if domains is not None else [(1 << h.n) - 1] * g.n
    return _kernel.solve_hom(g, h, list(dom), limit, backend=backend)


@needs_compiled
def test_parity_random_instances():
    rng = random.Random(123)
    for _ in range(300):
        g = random_digraph(rng, rng.randint(1, 6), p=rng.choice([0.2, 0.4, 0.7]))
        h = random_digraph(rng, rng.randint(1, 5), p=rng.choice([0.2, 0.4, 0.7]))
        assert _run(g, h, backend="pure") == _run(g, h, backend="compiled")


@needs_compiled
def test_parity_with_pins_and_budget():
    rng = random.Random(7)
    for _ in range(100):
        g = random_digraph(rng, 5, p=0.5)
        h = random_digraph(rng, 4, p=0.5)
        dom = [(1 << h.n) - 1] * g.n
        dom[0] = 1 << rng.randrange(h.n)
        for limit in (1, 3, 10_000):
            assert _run(g, h, dom, limit, "pure") == _run(g, h, dom, limit, "compiled")


@needs_compiled
def test_parity_wide_bitsets():
    # H larger than one 64-bit word exercises the multi-word paths
    h = direct_power(path(2), 7)  # 128 vertices
    g = path(8)
    assert _run(g, h, backend="pure") == _run(g, h, backend="compiled")
    big = direct_power(cycle(3), 5)  # 243 vertices
    assert _run(cycle(9), big, backend="pure") == _run(cycle(9), big, backend="compiled")
    assert _run(big, cycle(3), backend="pure") == _run(big, cycle(3), backend="compiled")


@needs_compiled
def test_parity_empty_domain_short_circuit():
    g = build(3, [(0, 1)])
    h = path(2)
    dom = [(1 << h.n) - 1, 0, (1 << h.n) - 1]
    assert _run(g, h, dom, backend="pure") == _run(g, h, dom, backend="compiled")
    assert _run(g, h, dom, backend="pure")[0] == _kernel.HOM_NONE


@needs_compiled
def test_union_find_parity():
    import numpy as np

    rng = random.Random(5)
    n = 500
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(400)]
    a = np.array([p[0] for p in pairs], dtype=np.int64)
    b = np.array([p[1] for p in pairs], dtype=np.int64)
    p1 = np.arange(n, dtype=np.int64)
    p2 = np.arange(n, dtype=np.int64)
    _kernel.union_batch(p1, a, b, backend="pure")
    _kernel.resolve_roots(p1, backend="pure")
    _kernel.union_batch(p2, a, b, backend="compiled")
    _kernel.resolve_roots(p2, backend="compiled")
    assert (p1 == p2).all()
    # roots are the smallest member of each class
    for i in range(n):
        assert p1[p1[i]] == p1[i] and p1[i] <= i
