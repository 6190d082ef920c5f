"""Homomorphism existence, homomorphic equivalence, and cores.

All searches are exhaustive: a None result is a proof of non-existence.
Hitting the node cap raises BudgetExhausted instead -- a third outcome that
callers must not read as "no".  Identical inputs always produce identical
witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernel
from .digraph import Digraph, induced_delete
from .errors import BudgetExhausted, PinOutOfRange

DEFAULT_NODE_LIMIT = 10_000_000


@dataclass(frozen=True)
class SearchBudget:
    """Backtracking node cap; one node is one attempted assignment."""

    node_limit: int = DEFAULT_NODE_LIMIT

    def __post_init__(self):
        if self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")


@dataclass(frozen=True)
class Hom:
    """An edge-preserving vertex map, re-verified at construction time."""

    source: Digraph
    target: Digraph
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.source.n:
            raise ValueError("map length differs from source vertex count")
        for x in self.map:
            if not (0 <= x < self.target.n):
                raise ValueError(f"image {x} outside target vertex set")
        for u, v in self.source.edges:
            if not self.target.has_edge(self.map[u], self.map[v]):
                raise ValueError(f"edge ({u},{v}) not preserved")

    def __call__(self, v: int) -> int:
        return self.map[v]

    def compose(self, inner: "Hom") -> "Hom":
        """self after inner: a homomorphism inner.source -> self.target."""
        if inner.target != self.source:
            raise ValueError("composition mismatch")
        return Hom(inner.source, self.target, tuple(self.map[x] for x in inner.map))


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    forward: Hom | None = None
    backward: Hom | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def find_hom(
    g: Digraph,
    h: Digraph,
    pins: dict[int, int] | None = None,
    budget: SearchBudget | None = None,
) -> Hom | None:
    """Deterministic backtracking search for a homomorphism g -> h.

    pins force chosen vertices of g onto chosen vertices of h.  Returns a
    certified Hom, or None when exhaustive search has proven none exists.
    """
    limit = (budget or SearchBudget()).node_limit
    full = (1 << h.n) - 1
    domains = [full] * g.n
    if pins:
        for gv, hv in pins.items():
            if not (0 <= gv < g.n):
                raise PinOutOfRange(f"pinned vertex {gv} outside [0,{g.n})")
            if not (0 <= hv < h.n):
                raise PinOutOfRange(f"pin image {hv} outside [0,{h.n})")
            domains[gv] &= 1 << hv
    status, assignment, _ = _kernel.solve_hom(g, h, domains, limit)
    if status == _kernel.HOM_BUDGET:
        raise BudgetExhausted(limit)
    if status == _kernel.HOM_NONE:
        return None
    return Hom(g, h, tuple(assignment))


def hom_equivalent(g: Digraph, h: Digraph, budget: SearchBudget | None = None) -> EquivalenceResult:
    """Check homomorphisms in both directions; carries both certificates."""
    fwd = find_hom(g, h, budget=budget)
    if fwd is None:
        return EquivalenceResult(False)
    bwd = find_hom(h, g, budget=budget)
    if bwd is None:
        return EquivalenceResult(False, forward=fwd)
    return EquivalenceResult(True, forward=fwd, backward=bwd)


def is_core(g: Digraph, budget: SearchBudget | None = None) -> bool:
    """True iff g maps into none of its one-vertex-deleted subgraphs."""
    if g.n == 1:
        return True
    for v in range(g.n):
        smaller = induced_delete(g, v)
        if find_hom(g, smaller, budget=budget) is not None:
            return False
    return True


def core_of(g: Digraph, budget: SearchBudget | None = None) -> tuple[Digraph, Hom]:
    """Shrink g one vertex at a time until no vertex is removable.

    Each round scans vertices in increasing index order for some v such that
    the current graph maps into itself-minus-v; retractions compose into the
    returned homomorphism g -> core.  Iterated retraction of a finite digraph
    lands on a core, so the result is a core and unique up to isomorphism.
    """
    current = g
    overall = list(range(g.n))
    changed = True
    while changed and current.n > 1:
        changed = False
        for v in range(current.n):
            smaller = induced_delete(current, v)
            h = find_hom(current, smaller, budget=budget)
            if h is not None:
                overall = [h.map[x] for x in overall]
                current = smaller
                changed = True
                break
    return current, Hom(g, current, tuple(overall))
