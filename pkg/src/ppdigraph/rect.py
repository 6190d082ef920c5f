"""k-rectangularity, total rectangularity, and the Maltsev decision.

A digraph is k-rectangular when walks of length exactly k satisfy the
rectangle rule: walks a->b, c->b, c->d force a walk a->d.  "Walk" (vertices
may repeat) is the right reading: the length-k reachability relation is the
k-th boolean power of the adjacency matrix, matching the primitive positive
chain formula used by the pp-power constructions.  Total rectangularity is
equivalent to having a Maltsev polymorphism, which is what has_maltsev
reports; a failing RectWitness doubles as the raw material for building the
three-element transitive tournament as a pp power.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .digraph import Digraph


@dataclass(frozen=True, eq=False)
class ReachRelation:
    """Pairs (a,b) joined by a directed walk of length exactly k."""

    k: int
    matrix: np.ndarray = field(repr=False)  # n x n bool, read-only

    def holds(self, a: int, b: int) -> bool:
        return bool(self.matrix[a, b])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.matrix))]


@dataclass(frozen=True)
class RectWitness:
    """Failure of k-rectangularity: walks a->b, c->b, c->d exist, a->d does not."""

    k: int
    a: int
    b: int
    c: int
    d: int


def _adjacency_bool(g: Digraph) -> np.ndarray:
    m = np.zeros((g.n, g.n), dtype=bool)
    for u, v in g.edges:
        m[u, v] = True
    return m


def reach_relation(g: Digraph, k: int) -> ReachRelation:
    """Boolean k-th power of the adjacency matrix, by iterated product."""
    if k < 1:
        raise ValueError("walk length must be >= 1")
    adj = _adjacency_bool(g)
    m = adj.copy()
    for _ in range(k - 1):
        m = (m.astype(np.uint8) @ adj.astype(np.uint8)) > 0
    m.setflags(write=False)
    return ReachRelation(k=k, matrix=m)


def _violation(matrix: np.ndarray, k: int) -> RectWitness | None:
    """Lexicographically least (a,b,c,d) breaking the rectangle rule, if any."""
    r = matrix
    u8 = r.astype(np.uint8)
    shared_end = u8 @ u8.T > 0          # (a,c): some b with a->b and c->b
    closure = shared_end.astype(np.uint8) @ u8 > 0   # (a,d): some c as above with c->d
    bad = closure & ~r
    if not bad.any():
        return None
    for a in np.nonzero(bad.any(axis=1))[0]:
        for b in np.nonzero(r[a])[0]:
            for c in np.nonzero(r[:, b])[0]:
                ds = r[c] & ~r[a]
                if ds.any():
                    d = int(np.argmax(ds))
                    return RectWitness(k=k, a=int(a), b=int(b), c=int(c), d=int(d))
    return None


def is_k_rectangular(g: Digraph, k: int) -> RectWitness | None:
    """None when g is k-rectangular, else the least witness (a,b,c,d)."""
    return _violation(reach_relation(g, k).matrix, k)


def is_totally_rectangular(g: Digraph) -> RectWitness | None:
    """Check every k at once: walk the sequence of boolean adjacency powers
    until it revisits a matrix (it is eventually periodic, so every distinct
    reachability relation has then been examined).  Returns the witness with
    the least (k, a, b, c, d), or None."""
    adj = _adjacency_bool(g)
    m = adj.copy()
    seen = set()
    k = 1
    while m.tobytes() not in seen:
        seen.add(m.tobytes())
        w = _violation(m, k)
        if w is not None:
            return w
        m = (m.astype(np.uint8) @ adj.astype(np.uint8)) > 0
        k += 1
    return None


@dataclass(frozen=True)
class MaltsevReport:
    has_maltsev: bool
    witness: RectWitness | None = None

    def __bool__(self) -> bool:
        return self.has_maltsev


def has_maltsev(g: Digraph) -> MaltsevReport:
    """Maltsev polymorphism existence, decided through total rectangularity."""
    w = is_totally_rectangular(g)
    return MaltsevReport(has_maltsev=w is None, witness=w)


def verify_rect_witness(g: Digraph, w: RectWitness) -> bool:
    """Independent re-check by stepping vertex sets, no matrix powers."""

    def reaches(src: int, dst: int) -> bool:
        frontier = {src}
        for _ in range(w.k):
            frontier = {y for x in frontier for y in g.out_neighbors(x)}
            if not frontier:
                return False
        return dst in frontier

    return (
        reaches(w.a, w.b)
        and reaches(w.c, w.b)
        and reaches(w.c, w.d)
        and not reaches(w.a, w.d)
    )
