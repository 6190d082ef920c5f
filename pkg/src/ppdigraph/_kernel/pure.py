"""Pure-Python search kernel: the reference implementation.

Solves the binary CSP "map the vertices of G into H so that every G-edge
lands on an H-edge", starting from per-vertex candidate sets (bitsets over
V(H)).  Propagation is arc consistency over both orientations of every
G-edge, driven by a FIFO worklist; the fixpoint it reaches is the unique
largest arc-consistent subdomain, so the compiled twin in _ckernel.pyx is
bit-for-bit interchangeable: same witnesses, same node counts.

Search order is frozen for reproducibility: the next variable is the one
with the smallest domain of size >= 2 (lowest index breaks ties) and values
are tried in increasing order.  A node is one attempted assignment.
"""

from __future__ import annotations

from collections import deque

HOM_FOUND = 0
HOM_NONE = 1
HOM_BUDGET = 2


def solve(n_g, g_out, g_in, h_out_masks, h_in_masks, domains, node_limit):
    """Run the search; returns (status, assignment | None, nodes_used).

    g_out/g_in: per-G-vertex neighbor lists.  h_out_masks/h_in_masks:
    per-H-vertex successor/predecessor bitsets.  domains: initial candidate
    bitset per G-vertex (pins are singleton entries).
    """
    dom = list(domains)
    for d in dom:
        if d == 0:
            return HOM_NONE, None, 0
    if not _propagate(dom, g_out, g_in, h_out_masks, h_in_masks, range(n_g), None):
        return HOM_NONE, None, 0

    nodes = 0
    frames: list[list] = []  # [var, untried-values bitset, trail dict]
    while True:
        var = _select(dom)
        if var < 0:
            return HOM_FOUND, [d.bit_length() - 1 for d in dom], nodes
        frames.append([var, dom[var], None])
        while True:
            fr = frames[-1]
            var, rem = fr[0], fr[1]
            advanced = False
            while rem:
                bit = rem & (-rem)
                rem ^= bit
                fr[1] = rem
                nodes += 1
                if nodes > node_limit:
                    return HOM_BUDGET, None, nodes
                trail = {var: dom[var]}
                fr[2] = trail
                dom[var] = bit
                if _propagate(dom, g_out, g_in, h_out_masks, h_in_masks, (var,), trail):
                    advanced = True
                    break
                _restore(dom, trail)
                fr[2] = None
            if advanced:
                break
            frames.pop()
            if not frames:
                return HOM_NONE, None, nodes
            _restore(dom, frames[-1][2])
            frames[-1][2] = None


def _select(dom) -> int:
    best = -1
    best_size = 0
    for v, d in enumerate(dom):
        s = d.bit_count()
        if s >= 2 and (best < 0 or s < best_size):
            best = v
            best_size = s
            if s == 2:
                break
    return best


def _restore(dom, trail) -> None:
    for v, old in trail.items():
        dom[v] = old


def _propagate(dom, g_out, g_in, out_masks, in_masks, seeds, trail) -> bool:
    """Filter domains to the arc-consistent fixpoint; False on a wipeout.

    For a G-edge (x,t): dom[t] may only keep vertices with a predecessor in
    dom[x], i.e. dom[t] &= union of successor sets over dom[x]; symmetrically
    for in-edges.  trail (when given) records each domain's value before its
    first change so the caller can undo.
    """
    pending = deque(seeds)
    inq = bytearray(len(dom))
    for s in pending:
        inq[s] = 1
    while pending:
        x = pending.popleft()
        inq[x] = 0
        dx = dom[x]
        outs = g_out[x]
        if outs:
            image = 0
            d = dx
            while d:
                b = d & (-d)
                image |= out_masks[b.bit_length() - 1]
                d ^= b
            for t in outs:
                nd = dom[t] & image
                if nd != dom[t]:
                    if trail is not None and t not in trail:
                        trail[t] = dom[t]
                    dom[t] = nd
                    if not nd:
                        return False
                    if not inq[t]:
                        pending.append(t)
                        inq[t] = 1
        ins = g_in[x]
        if ins:
            preimage = 0
            d = dx
            while d:
                b = d & (-d)
                preimage |= in_masks[b.bit_length() - 1]
                d ^= b
            for s in ins:
                nd = dom[s] & preimage
                if nd != dom[s]:
                    if trail is not None and s not in trail:
                        trail[s] = dom[s]
                    dom[s] = nd
                    if not nd:
                        return False
                    if not inq[s]:
                        pending.append(s)
                        inq[s] = 1
    return True


def union_batch(parent, a, b) -> None:
    """Merge pairs (a[i], b[i]) in an array-based union-find.

    Roots are kept at the smallest member of each class, so final labels are
    deterministic regardless of merge order.  Path halving on the way up.
    """
    for i in range(len(a)):
        x = _find(parent, int(a[i]))
        y = _find(parent, int(b[i]))
        if x == y:
            continue
        if x < y:
            parent[y] = x
        else:
            parent[x] = y


def resolve_roots(parent) -> None:
    """Compress every entry to its root, in place."""
    for i in range(len(parent)):
        parent[i] = _find(parent, i)


def _find(parent, x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = int(parent[x])
    return x
