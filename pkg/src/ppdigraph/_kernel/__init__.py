"""Kernel lane selection: compiled extension when available, pure otherwise.

The two lanes implement the same algorithm with the same frozen search order,
so results (witness, node count) are identical; only speed differs.  Set
PPDIGRAPH_KERNEL=pure or =compiled to force a lane, e.g. for benchmarking.
"""

from __future__ import annotations

import os

from . import pure
from .pure import HOM_BUDGET, HOM_FOUND, HOM_NONE

try:
    from . import _ckernel

    _HAVE_COMPILED = hasattr(_ckernel, "solve")
except ImportError:
    _ckernel = None
    _HAVE_COMPILED = False

_env = os.environ.get("PPDIGRAPH_KERNEL", "").strip().lower()
if _env == "pure":
    _DEFAULT = "pure"
elif _env == "compiled":
    if not _HAVE_COMPILED:
        raise ImportError("PPDIGRAPH_KERNEL=compiled but the extension is not built")
    _DEFAULT = "compiled"
elif _env:
    raise ImportError(f"PPDIGRAPH_KERNEL must be 'pure' or 'compiled', got {_env!r}")
else:
    _DEFAULT = "compiled" if _HAVE_COMPILED else "pure"


def backend_name() -> str:
    return _DEFAULT


def available_backends() -> tuple[str, ...]:
    return ("pure", "compiled") if _HAVE_COMPILED else ("pure",)


def _resolve(backend: str | None) -> str:
    if backend is None:
        return _DEFAULT
    if backend not in ("pure", "compiled"):
        raise ValueError(f"unknown kernel backend {backend!r}")
    if backend == "compiled" and not _HAVE_COMPILED:
        raise RuntimeError("compiled kernel requested but not built")
    return backend


def solve_hom(g, h, domains, node_limit, backend=None):
    """Search for a homomorphism g -> h extending the given domain bitsets.

    Returns (status, assignment | None, nodes_used) with status one of
    HOM_FOUND / HOM_NONE / HOM_BUDGET.
    """
    lane = _resolve(backend)
    if lane == "pure":
        g_out, g_in = g._adjacency()
        h_out, h_in = h.adjacency_masks()
        return pure.solve(g.n, g_out, g_in, h_out, h_in, domains, node_limit)

    import numpy as np

    _, _, g_out_ptr, g_out_idx, g_in_ptr, g_in_idx = g.csr_arrays()
    _, _, h_out_ptr, h_out_idx, h_in_ptr, h_in_idx = h.csr_arrays()
    words = (h.n + 63) // 64
    dom = np.empty((g.n, words), dtype=np.uint64)
    nbytes = words * 8
    row = np.empty(nbytes, dtype=np.uint8)
    for i, mask in enumerate(domains):
        row[:] = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        dom[i] = row.view(np.uint64)
    status, assignment, nodes = _ckernel.solve(
        g.n,
        h.n,
        g_out_ptr,
        g_out_idx,
        g_in_ptr,
        g_in_idx,
        h_out_ptr,
        h_out_idx,
        h_in_ptr,
        h_in_idx,
        dom,
        node_limit,
    )
    if assignment is not None:
        assignment = [int(x) for x in assignment]
    return status, assignment, nodes


def union_batch(parent, a, b, backend=None) -> None:
    """Union-find batch merge of pairs (a[i], b[i]); arrays are numpy int64."""
    lane = _resolve(backend)
    if lane == "pure":
        pure.union_batch(parent, a, b)
    else:
        _ckernel.union_batch(parent, a, b)


def resolve_roots(parent, backend=None) -> None:
    """Compress every union-find entry to its class root, in place."""
    lane = _resolve(backend)
    if lane == "pure":
        pure.resolve_roots(parent)
    else:
        _ckernel.resolve_roots(parent)
