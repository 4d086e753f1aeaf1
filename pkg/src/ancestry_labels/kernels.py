"""Hot loops over parent/child arrays.

Every kernel exists in two forms: a numba ``@njit`` build and a fallback that
runs without numba (plain loops over Python lists for the inherently
sequential traversals, vectorized numpy where the work is data-parallel).

The backend is chosen once at import time from the environment::

    ANCESTRY_LABELS_BACKEND=numba   # default when numba imports
    ANCESTRY_LABELS_BACKEND=numpy   # force the fallback

Each public wrapper also accepts ``backend=`` so both paths can be compared
in one process (see :mod:`ancestry_labels.bench`).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None


def _pick_backend() -> str:
    requested = os.environ.get("ANCESTRY_LABELS_BACKEND", "").strip().lower()
    if requested in ("", "auto"):
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if requested not in ("numba", "numpy"):
        raise ValueError(f"ANCESTRY_LABELS_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numba" and not NUMBA_AVAILABLE:
        raise ImportError("ANCESTRY_LABELS_BACKEND=numba but numba is not installed")
    return requested


BACKEND = _pick_backend()
BACKENDS = ("numba", "numpy") if NUMBA_AVAILABLE else ("numpy",)


def _resolve(backend):
    backend = backend or BACKEND
    if backend == "numba" and not NUMBA_AVAILABLE:
        raise ImportError("numba backend requested but numba is not installed")
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _jit(fn):
    if numba is None:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# loop bodies; shared verbatim between numba and the list-based fallback
# ---------------------------------------------------------------------------

def _subtree_sizes_loop(parent, size):
    # parent[i] < i, so a reverse sweep sees every child before its parent
    for i in range(len(parent) - 1, 0, -1):
        size[parent[i]] += size[i]


def _subtree_max_loop(parent, out):
    for i in range(len(parent) - 1, 0, -1):
        p = parent[i]
        if out[i] > out[p]:
            out[p] = out[i]


def _assign_loop(indptr, children, start, s_table, use_table,
                 a, b, a_bar, b_bar, k, stack, pos):
    """Iterative Assign(root, start) over a CSR child list.

    Returns 0 on success, or -(u + 1) when the length table has no entry
    >= m at node u.
    """
    ntab = len(s_table)
    top = 0
    stack[0] = 0
    pos[0] = indptr[0]
    a[0] = start
    a_bar[0] = start
    b[0] = start
    b_bar[0] = start
    while top >= 0:
        u = stack[top]
        p = pos[top]
        if p < indptr[u + 1]:
            v = children[p]
            pos[top] = p + 1
            t = b_bar[u] + 1
            a[v] = t
            a_bar[v] = t
            b[v] = t
            b_bar[v] = t
            top += 1
            stack[top] = v
            pos[top] = indptr[v]
            continue
        if use_table:
            m = a_bar[u] - a[u] + 1
            lo = 0
            hi = ntab
            while lo < hi:
                mid = (lo + hi) // 2
                if s_table[mid] < m:
                    lo = mid + 1
                else:
                    hi = mid
            if lo == ntab:
                return -(u + 1)
            k[u] = lo
            bu = a[u] + s_table[lo] - 1
        else:
            bu = a_bar[u]
        b[u] = bu
        if bu > b_bar[u]:
            b_bar[u] = bu
        top -= 1
        if top >= 0:
            w = stack[top]
            a_bar[w] = a_bar[u]
            b_bar[w] = b_bar[u]
    return 0


def _oracle_pairs_loop(parent, us, vs, out):
    for i in range(len(us)):
        u = us[i]
        cur = vs[i]
        # ancestors of v carry ids <= v
        while cur > u:
            cur = parent[cur]
        out[i] = cur == u


_subtree_sizes_nb = _jit(_subtree_sizes_loop)
_subtree_max_nb = _jit(_subtree_max_loop)
_assign_nb = _jit(_assign_loop)
_oracle_pairs_nb = _jit(_oracle_pairs_loop)


# ---------------------------------------------------------------------------
# public wrappers
# ---------------------------------------------------------------------------

def subtree_sizes(parent: np.ndarray, backend: str | None = None) -> np.ndarray:
    """|T_u| for every node of a canonical parent array (parent[0] == -1)."""
    n = len(parent)
    if _resolve(backend) == "numba":
        size = np.ones(n, dtype=np.int64)
        _subtree_sizes_nb(parent, size)
        return size
    size = [1] * n
    _subtree_sizes_loop(parent.tolist(), size)
    return np.asarray(size, dtype=np.int64)


def subtree_max(parent: np.ndarray, values: np.ndarray, backend: str | None = None) -> np.ndarray:
    """max of ``values`` over each subtree."""
    if _resolve(backend) == "numba":
        out = np.array(values, dtype=np.int64, copy=True)
        _subtree_max_nb(parent, out)
        return out
    out = np.asarray(values, dtype=np.int64).tolist()
    _subtree_max_loop(parent.tolist(), out)
    return np.asarray(out, dtype=np.int64)


def assign_intervals(indptr: np.ndarray, children: np.ndarray, start: int = 0,
                     s_table: np.ndarray | None = None, backend: str | None = None):
    """Run the interval assignment over a CSR child list in the given order.

    With ``s_table`` None, b(u) = a_bar(u). Otherwise ``s_table`` must be the
    non-decreasing table of permitted interval lengths indexed by k; b(u) is
    then a(u) + s - 1 for the smallest table entry s >= a_bar(u) - a(u) + 1.

    Returns ``(status, a, b, a_bar, b_bar, k)``; ``k`` is all zeros without a
    table. ``status`` is 0, or -(u + 1) if no table entry covered node u.
    """
    n = len(indptr) - 1
    use_table = s_table is not None
    table = np.asarray(s_table if use_table else np.zeros(1), dtype=np.int64)
    if _resolve(backend) == "numba":
        bufs = [np.empty(n, dtype=np.int64) for _ in range(4)]
        k = np.zeros(n, dtype=np.int64)
        stack = np.empty(n, dtype=np.int64)
        pos = np.empty(n, dtype=np.int64)
        status = _assign_nb(indptr, children, np.int64(start), table, use_table,
                            bufs[0], bufs[1], bufs[2], bufs[3], k, stack, pos)
        return status, bufs[0], bufs[1], bufs[2], bufs[3], k
    bufs = [[0] * n for _ in range(4)]
    k = [0] * n
    status = _assign_loop(indptr.tolist(), children.tolist(), int(start), table.tolist(),
                          use_table, bufs[0], bufs[1], bufs[2], bufs[3], k, [0] * n, [0] * n)
    arrays = [np.asarray(x, dtype=np.int64) for x in bufs]
    return status, arrays[0], arrays[1], arrays[2], arrays[3], np.asarray(k, dtype=np.int64)


def oracle_pairs(parent: np.ndarray, us, vs, backend: str | None = None) -> np.ndarray:
    """Ground-truth ancestry for many (u, v) pairs by walking parent pointers."""
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    if us.shape != vs.shape:
        raise ValueError("us and vs must have the same shape")
    if _resolve(backend) == "numba":
        out = np.empty(us.shape, dtype=np.bool_)
        _oracle_pairs_nb(parent, us.ravel(), vs.ravel(), out.ravel())
        return out
    cur = vs.ravel().copy()
    uu = us.ravel()
    out = cur == uu
    active = np.flatnonzero(cur > uu)
    while active.size:
        cur[active] = parent[cur[active]]
        out[active] = cur[active] == uu[active]
        active = active[cur[active] > uu[active]]
    return out.reshape(us.shape)
