# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled twin of pure.py.

Same algorithm, same frozen search order, same node accounting; pure.py is
the readable reference.  Domains are W-word bitsets (W = ceil(n_h/64)),
adjacency comes in CSR form, and backtracking undoes domain changes through
a grow-on-demand trail stamped per attempted assignment.
"""

from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy, memset

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

ctypedef unsigned long long u64
ctypedef long long i64

HOM_FOUND = 0
HOM_NONE = 1
HOM_BUDGET = 2


cdef struct KState:
    i64 n_g
    i64 n_h
    i64 W
    u64* dom            # n_g * W candidate bitsets
    u64* image          # W scratch for union-of-neighbor-sets
    i64* queue          # ring buffer of size n_g
    unsigned char* inq
    i64* g_out_ptr
    i64* g_out_idx
    i64* g_in_ptr
    i64* g_in_idx
    i64* h_out_ptr
    i64* h_out_idx
    i64* h_in_ptr
    i64* h_in_idx
    i64* t_var          # trail: touched var + its previous bitset
    u64* t_old
    i64 t_top
    i64 t_cap
    i64* stamped        # attempt id that last trailed each var
    i64 attempt


cdef int _trail_save(KState* st, i64 v) except -1:
    cdef i64 new_cap
    cdef void* p
    if st.stamped[v] == st.attempt:
        return 0
    if st.t_top == st.t_cap:
        new_cap = st.t_cap * 2
        p = realloc(st.t_var, new_cap * sizeof(i64))
        if p == NULL:
            raise MemoryError()
        st.t_var = <i64*> p
        p = realloc(st.t_old, new_cap * st.W * sizeof(u64))
        if p == NULL:
            raise MemoryError()
        st.t_old = <u64*> p
        st.t_cap = new_cap
    st.t_var[st.t_top] = v
    memcpy(st.t_old + st.t_top * st.W, st.dom + v * st.W, st.W * sizeof(u64))
    st.t_top += 1
    st.stamped[v] = st.attempt
    return 0


cdef void _restore(KState* st, i64 t_base) noexcept nogil:
    cdef i64 i = st.t_top - 1
    while i >= t_base:
        memcpy(st.dom + st.t_var[i] * st.W, st.t_old + i * st.W, st.W * sizeof(u64))
        i -= 1
    st.t_top = t_base


cdef void _build_image(KState* st, i64 x, bint use_out) noexcept nogil:
    # union of H-successor (or predecessor) sets over the bits of dom[x]
    cdef i64 w, a, q
    cdef u64 bits
    cdef i64* ptr
    cdef i64* idx
    if use_out:
        ptr = st.h_out_ptr
        idx = st.h_out_idx
    else:
        ptr = st.h_in_ptr
        idx = st.h_in_idx
    memset(st.image, 0, st.W * sizeof(u64))
    for w in range(st.W):
        bits = st.dom[x * st.W + w]
        while bits:
            a = w * 64 + __builtin_ctzll(bits)
            bits &= bits - 1
            for q in range(ptr[a], ptr[a + 1]):
                st.image[idx[q] >> 6] |= (<u64> 1) << (idx[q] & 63)


cdef int _propagate(KState* st, i64 seed, bint all_seeds, bint trailing) except -1:
    """Arc-consistency fixpoint; returns 1, or 0 on a domain wipeout."""
    cdef i64 qhead = 0, qtail = 0
    cdef i64 x, t, w, pi, p0, p1, base
    cdef u64 nd, acc
    cdef bint changed
    cdef int side
    if all_seeds:
        for x in range(st.n_g):
            st.queue[qtail] = x
            qtail += 1
            st.inq[x] = 1
    else:
        st.queue[qtail] = seed
        qtail += 1
        st.inq[seed] = 1
    while qhead != qtail:
        x = st.queue[qhead % st.n_g]
        qhead += 1
        st.inq[x] = 0
        for side in range(2):
            if side == 0:
                p0 = st.g_out_ptr[x]
                p1 = st.g_out_ptr[x + 1]
            else:
                p0 = st.g_in_ptr[x]
                p1 = st.g_in_ptr[x + 1]
            if p0 == p1:
                continue
            _build_image(st, x, side == 0)
            for pi in range(p0, p1):
                if side == 0:
                    t = st.g_out_idx[pi]
                else:
                    t = st.g_in_idx[pi]
                base = t * st.W
                changed = False
                for w in range(st.W):
                    if st.dom[base + w] & ~st.image[w]:
                        changed = True
                        break
                if not changed:
                    continue
                if trailing:
                    _trail_save(st, t)
                acc = 0
                for w in range(st.W):
                    nd = st.dom[base + w] & st.image[w]
                    st.dom[base + w] = nd
                    acc |= nd
                if acc == 0:
                    # drain so no stale in-queue flag survives this call
                    while qhead != qtail:
                        st.inq[st.queue[qhead % st.n_g]] = 0
                        qhead += 1
                    return 0
                if not st.inq[t]:
                    st.queue[qtail % st.n_g] = t
                    qtail += 1
                    st.inq[t] = 1
    return 1


cdef i64 _select(KState* st) noexcept nogil:
    cdef i64 best = -1, best_size = 0, v, w, s
    for v in range(st.n_g):
        s = 0
        for w in range(st.W):
            s += __builtin_popcountll(st.dom[v * st.W + w])
        if s >= 2 and (best < 0 or s < best_size):
            best = v
            best_size = s
            if s == 2:
                break
    return best


def solve(
    i64 n_g,
    i64 n_h,
    i64[::1] g_out_ptr,
    i64[::1] g_out_idx,
    i64[::1] g_in_ptr,
    i64[::1] g_in_idx,
    i64[::1] h_out_ptr,
    i64[::1] h_out_idx,
    i64[::1] h_in_ptr,
    i64[::1] h_in_idx,
    u64[:, ::1] domains,
    i64 node_limit,
):
    """Mirror of pure.solve; returns (status, assignment | None, nodes)."""
    cdef i64 W = (n_h + 63) // 64
    cdef KState st
    cdef i64 v, w, var, val, depth
    cdef i64 nodes = 0
    cdef u64 acc, bits
    cdef bint advanced, empty
    cdef i64* frame_var = NULL
    cdef u64* frame_rem = NULL
    cdef i64* frame_tbase = NULL
    cdef object assignment = None
    cdef i64[::1] out_view

    st.n_g = n_g
    st.n_h = n_h
    st.W = W
    st.g_out_ptr = &g_out_ptr[0]
    st.g_in_ptr = &g_in_ptr[0]
    st.h_out_ptr = &h_out_ptr[0]
    st.h_in_ptr = &h_in_ptr[0]
    st.g_out_idx = NULL
    st.g_in_idx = NULL
    st.h_out_idx = NULL
    st.h_in_idx = NULL
    if g_out_idx.shape[0] > 0:
        st.g_out_idx = &g_out_idx[0]
    if g_in_idx.shape[0] > 0:
        st.g_in_idx = &g_in_idx[0]
    if h_out_idx.shape[0] > 0:
        st.h_out_idx = &h_out_idx[0]
    if h_in_idx.shape[0] > 0:
        st.h_in_idx = &h_in_idx[0]

    st.dom = <u64*> malloc(n_g * W * sizeof(u64))
    st.image = <u64*> malloc(W * sizeof(u64))
    st.queue = <i64*> malloc(n_g * sizeof(i64))
    st.inq = <unsigned char*> malloc(n_g)
    st.t_cap = 1024
    st.t_var = <i64*> malloc(st.t_cap * sizeof(i64))
    st.t_old = <u64*> malloc(st.t_cap * W * sizeof(u64))
    st.stamped = <i64*> malloc(n_g * sizeof(i64))
    frame_var = <i64*> malloc(n_g * sizeof(i64))
    frame_rem = <u64*> malloc(n_g * W * sizeof(u64))
    frame_tbase = <i64*> malloc(n_g * sizeof(i64))
    if (
        st.dom == NULL or st.image == NULL or st.queue == NULL or st.inq == NULL
        or st.t_var == NULL or st.t_old == NULL or st.stamped == NULL
        or frame_var == NULL or frame_rem == NULL or frame_tbase == NULL
    ):
        free(st.dom); free(st.image); free(st.queue); free(st.inq)
        free(st.t_var); free(st.t_old); free(st.stamped)
        free(frame_var); free(frame_rem); free(frame_tbase)
        raise MemoryError()

    try:
        memcpy(st.dom, &domains[0, 0], n_g * W * sizeof(u64))
        memset(st.inq, 0, n_g)
        st.t_top = 0
        st.attempt = 0
        for v in range(n_g):
            st.stamped[v] = -1
        for v in range(n_g):
            acc = 0
            for w in range(W):
                acc |= st.dom[v * W + w]
            if acc == 0:
                return HOM_NONE, None, 0

        if not _propagate(&st, 0, True, False):
            return HOM_NONE, None, 0

        depth = 0
        while True:
            var = _select(&st)
            if var < 0:
                assignment = np.empty(n_g, dtype=np.int64)
                out_view = assignment
                for v in range(n_g):
                    for w in range(W):
                        bits = st.dom[v * W + w]
                        if bits:
                            out_view[v] = w * 64 + __builtin_ctzll(bits)
                            break
                return HOM_FOUND, assignment, nodes

            frame_var[depth] = var
            memcpy(frame_rem + depth * W, st.dom + var * W, W * sizeof(u64))
            frame_tbase[depth] = st.t_top
            depth += 1

            while True:
                var = frame_var[depth - 1]
                advanced = False
                while True:
                    # pop the lowest untried value of this frame
                    val = -1
                    for w in range(W):
                        bits = frame_rem[(depth - 1) * W + w]
                        if bits:
                            val = w * 64 + __builtin_ctzll(bits)
                            frame_rem[(depth - 1) * W + w] = bits & (bits - 1)
                            break
                    if val < 0:
                        break
                    nodes += 1
                    if nodes > node_limit:
                        return HOM_BUDGET, None, nodes
                    st.attempt = nodes
                    frame_tbase[depth - 1] = st.t_top
                    _trail_save(&st, var)
                    memset(st.dom + var * W, 0, W * sizeof(u64))
                    st.dom[var * W + (val >> 6)] = (<u64> 1) << (val & 63)
                    if _propagate(&st, var, False, True):
                        advanced = True
                        break
                    _restore(&st, frame_tbase[depth - 1])
                if advanced:
                    break
                depth -= 1
                if depth == 0:
                    return HOM_NONE, None, nodes
                _restore(&st, frame_tbase[depth - 1])
    finally:
        free(st.dom); free(st.image); free(st.queue); free(st.inq)
        free(st.t_var); free(st.t_old); free(st.stamped)
        free(frame_var); free(frame_rem); free(frame_tbase)


def union_batch(i64[::1] parent, i64[::1] a, i64[::1] b):
    """Merge pairs (a[i], b[i]); smallest member stays the class root."""
    cdef i64 i, x, y
    for i in range(a.shape[0]):
        x = a[i]
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        y = b[i]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x == y:
            continue
        if x < y:
            parent[y] = x
        else:
            parent[x] = y


def resolve_roots(i64[::1] parent):
    cdef i64 i, x
    for i in range(parent.shape[0]):
        x = i
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        parent[i] = x
