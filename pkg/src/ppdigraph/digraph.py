"""Finite digraphs on dense integer vertices 0..n-1.

Every value is immutable after construction; operations are pure functions,
so digraphs can be shared freely across threads.  Tuple vertices of direct
powers are flattened by mixed-radix index with the most significant
coordinate first, which keeps witness output reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    BudgetExceeded,
    EmptyList,
    EmptyVertexSet,
    EndpointOutOfRange,
    SizeTooSmall,
)

# Powers and products refuse to allocate more vertices than this unless the
# caller raises the limit explicitly; pp powers grow as n^d and it is better
# to fail loudly than to thrash.
DEFAULT_VERTEX_BUDGET = 2_000_000

SHAPE_PATH = "path"
SHAPE_CYCLES = "disjoint_union_of_cycles"
SHAPE_OTHER = "other"


class Digraph:
    """A finite digraph: vertex count ``n`` plus a set of ordered pairs.

    Loops are allowed, duplicate edges collapse, and the empty digraph is
    rejected.  Adjacency structures are cached lazily; the instance is
    logically immutable.
    """

    __slots__ = ("n", "edges", "_out", "_in", "_out_masks", "_in_masks", "_arrays")

    def __init__(self, n: int, edges) -> None:
        if n < 1:
            raise EmptyVertexSet(f"need at least one vertex, got n={n}")
        edges = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise EndpointOutOfRange(f"edge ({u},{v}) outside [0,{n})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_out", None)
        object.__setattr__(self, "_in", None)
        object.__setattr__(self, "_out_masks", None)
        object.__setattr__(self, "_in_masks", None)
        object.__setattr__(self, "_arrays", None)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={self.edge_list()})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges in lexicographic order (the canonical presentation)."""
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self._adjacency()[0][u]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency()[1][v]

    def _adjacency(self):
        if self._out is None:
            out = [[] for _ in range(self.n)]
            inn = [[] for _ in range(self.n)]
            for u, v in sorted(self.edges):
                out[u].append(v)
                inn[v].append(u)
            object.__setattr__(self, "_out", tuple(tuple(x) for x in out))
            object.__setattr__(self, "_in", tuple(tuple(x) for x in inn))
        return self._out, self._in

    def adjacency_masks(self) -> tuple[list[int], list[int]]:
        """Per-vertex successor/predecessor sets as int bitsets."""
        if self._out_masks is None:
            out = [0] * self.n
            inn = [0] * self.n
            for u, v in self.edges:
                out[u] |= 1 << v
                inn[v] |= 1 << u
            object.__setattr__(self, "_out_masks", out)
            object.__setattr__(self, "_in_masks", inn)
        return self._out_masks, self._in_masks

    def csr_arrays(self):
        """Adjacency in CSR form as numpy arrays, for the compiled kernel."""
        if self._arrays is None:
            import numpy as np

            es = self.edge_list()
            eu = np.array([e[0] for e in es], dtype=np.int64)
            ev = np.array([e[1] for e in es], dtype=np.int64)
            out_ptr = np.zeros(self.n + 1, dtype=np.int64)
            in_ptr = np.zeros(self.n + 1, dtype=np.int64)
            np.add.at(out_ptr, eu + 1, 1)
            np.add.at(in_ptr, ev + 1, 1)
            np.cumsum(out_ptr, out=out_ptr)
            np.cumsum(in_ptr, out=in_ptr)
            out_idx = ev.copy()  # edges sorted by (u,v): already grouped by u
            order = np.argsort(ev, kind="stable")
            in_idx = eu[order]
            object.__setattr__(self, "_arrays", (eu, ev, out_ptr, out_idx, in_ptr, in_idx))
        return self._arrays


@dataclass(frozen=True)
class ShapeReport:
    """Exact structural shape, used when a digraph is totally rectangular.

    ``kind`` is one of the SHAPE_* constants.  ``path_length`` is the vertex
    count k when the digraph is isomorphic to the directed path P_k;
    ``cycle_lengths`` is the sorted multiset of cycle lengths when every
    vertex has indegree and outdegree exactly one.  ``shortest_cycle`` is the
    length of a shortest directed cycle, absent when the digraph is acyclic.
    """

    kind: str
    path_length: int | None = None
    cycle_lengths: tuple[int, ...] | None = None
    shortest_cycle: int | None = None


def build(n: int, edges) -> Digraph:
    """Construct a digraph, collapsing duplicate edges."""
    return Digraph(n, edges)


def gen_family(kind: str, k: int) -> Digraph:
    """Standard families: cycle, path, transitive_tournament, clique.

    cycle(k) is the directed k-cycle u -> u+1 (mod k), so cycle(1) is a
    single looped vertex.  path(k) has k vertices and edges i -> i+1.
    transitive_tournament(k) orders 0..k-1 by <.  clique(k) has all ordered
    pairs of distinct vertices.
    """
    if kind == "cycle":
        if k < 1:
            raise SizeTooSmall("cycle needs k >= 1")
        return Digraph(k, [(u, (u + 1) % k) for u in range(k)])
    if kind == "path":
        if k < 1:
            raise SizeTooSmall("path needs k >= 1")
        return Digraph(k, [(i, i + 1) for i in range(k - 1)])
    if kind == "transitive_tournament":
        if k < 1:
            raise SizeTooSmall("transitive tournament needs k >= 1")
        return Digraph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])
    if kind == "clique":
        if k < 2:
            raise SizeTooSmall("clique needs k >= 2")
        return Digraph(k, [(i, j) for i in range(k) for j in range(k) if i != j])
    raise ValueError(f"unknown family kind {kind!r}")


def cycle(k: int) -> Digraph:
    return gen_family("cycle", k)


def path(k: int) -> Digraph:
    return gen_family("path", k)


def transitive_tournament(k: int = 3) -> Digraph:
    return gen_family("transitive_tournament", k)


def clique(k: int) -> Digraph:
    return gen_family("clique", k)


def tuple_index(tup, n: int) -> int:
    """Mixed-radix index of a vertex tuple, most significant first."""
    idx = 0
    for t in tup:
        idx = idx * n + t
    return idx


def index_tuple(idx: int, n: int, d: int) -> tuple[int, ...]:
    out = [0] * d
    for pos in range(d - 1, -1, -1):
        out[pos] = idx % n
        idx //= n
    return tuple(out)


def direct_power(g: Digraph, k: int, vertex_budget: int | None = None) -> Digraph:
    """k-th direct power: vertices are k-tuples, edges hold coordinatewise."""
    if k < 1:
        raise SizeTooSmall("direct power needs k >= 1")
    budget = DEFAULT_VERTEX_BUDGET if vertex_budget is None else vertex_budget
    size = g.n**k
    if size > budget:
        raise BudgetExceeded(size, budget)
    if k == 1:
        return g
    edges = []
    for combo in product(sorted(g.edges), repeat=k):
        u = tuple_index([e[0] for e in combo], g.n)
        v = tuple_index([e[1] for e in combo], g.n)
        edges.append((u, v))
    return Digraph(size, edges)


def disjoint_union(gs) -> Digraph:
    """Concatenate vertex blocks, re-indexing each block by its offset."""
    gs = list(gs)
    if not gs:
        raise EmptyList("disjoint union of no digraphs")
    edges = []
    offset = 0
    for g in gs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Digraph(offset, edges)


def _path_length_if_path(g: Digraph) -> int | None:
    # P_k: k vertices, k-1 edges, in/out degree <= 1, single successor chain.
    if g.num_edges != g.n - 1:
        return None
    out, inn = g._adjacency()
    if any(len(x) > 1 for x in out) or any(len(x) > 1 for x in inn):
        return None
    starts = [v for v in range(g.n) if len(inn[v]) == 0]
    if g.n == 1:
        return 1 if not g.edges else None
    if len(starts) != 1:
        return None
    seen = 0
    v = starts[0]
    while True:
        seen += 1
        if not out[v]:
            break
        v = out[v][0]
        if seen > g.n:
            return None
    return g.n if seen == g.n else None


def _cycle_lengths_if_union_of_cycles(g: Digraph) -> tuple[int, ...] | None:
    out, inn = g._adjacency()
    if any(len(x) != 1 for x in out) or any(len(x) != 1 for x in inn):
        return None
    lengths = []
    visited = [False] * g.n
    for start in range(g.n):
        if visited[start]:
            continue
        length = 0
        v = start
        while not visited[v]:
            visited[v] = True
            length += 1
            v = out[v][0]
        lengths.append(length)
    return tuple(sorted(lengths))


def shortest_cycle_length(g: Digraph) -> int | None:
    """Length of a shortest directed cycle via BFS from each vertex."""
    from collections import deque

    out, _ = g._adjacency()
    best = None
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            if best is not None and dist[x] + 1 >= best:
                continue
            for y in out[x]:
                if y == s:
                    cand = dist[x] + 1
                    if best is None or cand < best:
                        best = cand
                elif dist[y] < 0:
                    dist[y] = dist[x] + 1
                    q.append(y)
    return best


def shape_of(g: Digraph) -> ShapeReport:
    """Detect the exact isomorphism type: directed path, disjoint union of
    directed cycles, or anything else."""
    sc = shortest_cycle_length(g)
    k = _path_length_if_path(g)
    if k is not None:
        return ShapeReport(kind=SHAPE_PATH, path_length=k, shortest_cycle=sc)
    lengths = _cycle_lengths_if_union_of_cycles(g)
    if lengths is not None:
        return ShapeReport(kind=SHAPE_CYCLES, cycle_lengths=lengths, shortest_cycle=sc)
    return ShapeReport(kind=SHAPE_OTHER, shortest_cycle=sc)


def induced_delete(g: Digraph, v: int) -> Digraph:
    """Induced subgraph with vertex v removed and the rest re-indexed densely."""
    if not (0 <= v < g.n):
        raise EndpointOutOfRange(f"vertex {v} outside [0,{g.n})")
    if g.n == 1:
        raise EmptyVertexSet("cannot delete the last vertex")
    new_id = [w - 1 if w > v else w for w in range(g.n)]
    edges = [(new_id[a], new_id[b]) for a, b in g.edges if a != v and b != v]
    return Digraph(g.n - 1, edges)
