"""Generic left-including interval assignment and its validators.

:func:`assign` is the DFS assignment engine with a pluggable child order and
a pluggable rule for picking b(u) >= a_bar(u). The ``check_*`` functions are
brute-force validators meant for tests and the ``verify`` command; the
quadratic ones are only practical up to a few thousand nodes.

The condition validators work from the true subtree maxima of ``a`` and
``b`` (via :func:`recompute_extrema`), not from the stored ``a_bar`` and
``b_bar``, so they stay meaningful on hand-built or corrupted assignments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .errors import RangeExceeded, StrategyViolation
from .tree import RootedTree, size_ordered_csr

ChildOrder = Union[str, Callable[[RootedTree, int], Sequence[int]]]
BChoice = Callable[[int, int, int], int]

CHILD_ORDERS = ("ascending", "descending", "size")


@dataclass(frozen=True, eq=False)
class IntervalAssignment:
    """Per-node a, b, a_bar, b_bar as int64 arrays.

    ``order`` is the child processing order used to build it, as a CSR pair
    ``(indptr, children)``; hand-built assignments may leave it ``None``.
    """

    a: np.ndarray
    b: np.ndarray
    a_bar: np.ndarray
    b_bar: np.ndarray
    order: tuple[np.ndarray, np.ndarray] | None = None

    @classmethod
    def from_arrays(cls, a, b, a_bar, b_bar, order=None) -> "IntervalAssignment":
        arrs = []
        for x in (a, b, a_bar, b_bar):
            arr = np.array(x, dtype=np.int64)
            arr.setflags(write=False)
            arrs.append(arr)
        return cls(*arrs, order=order)

    def __len__(self) -> int:
        return len(self.a)

    def interval(self, u: int) -> tuple[int, int]:
        return int(self.a[u]), int(self.b[u])

    def processing_order(self, u: int) -> list[int]:
        if self.order is None:
            raise ValueError("assignment carries no recorded child order")
        indptr, children = self.order
        return children[indptr[u]:indptr[u + 1]].tolist()

    def replace(self, **arrays) -> "IntervalAssignment":
        """Copy with some arrays swapped out (for building counterexamples)."""
        cur = dict(a=self.a, b=self.b, a_bar=self.a_bar, b_bar=self.b_bar)
        cur.update(arrays)
        return IntervalAssignment.from_arrays(**cur, order=self.order)


@dataclass
class AssignmentReport:
    """Pass/fail per named condition, with the first violating node or pair."""

    passed: dict[str, bool] = field(default_factory=dict)
    witness: dict[str, object] = field(default_factory=dict)

    def record(self, name: str, witness) -> None:
        self.passed[name] = witness is None
        self.witness[name] = witness

    @property
    def all_pass(self) -> bool:
        return all(self.passed.values())

    def __getitem__(self, name: str) -> bool:
        return self.passed[name]

    def failures(self) -> list[tuple[str, object]]:
        return [(k, self.witness[k]) for k, ok in self.passed.items() if not ok]

    def __str__(self) -> str:
        parts = [f"{k}={'ok' if ok else f'FAIL@{self.witness[k]}'}" for k, ok in self.passed.items()]
        return ", ".join(parts)


# ---------------------------------------------------------------------------
# assignment engine
# ---------------------------------------------------------------------------

def b_equals_a_bar(u: int, a_u: int, a_bar_u: int) -> int:
    """The classic rule b(u) = a_bar(u)."""
    return a_bar_u


def _resolve_order(tree: RootedTree, child_order: ChildOrder) -> tuple[np.ndarray, np.ndarray]:
    if not callable(child_order):
        return order_csr(tree, child_order)
    indptr, _ = tree.child_csr
    flat = []
    for u in range(tree.n):
        kids = [int(v) for v in child_order(tree, u)]
        if sorted(kids) != list(tree.children(u)):
            raise StrategyViolation(f"child order for node {u} is not a permutation of its children")
        flat.extend(kids)
    return indptr, np.asarray(flat, dtype=np.int64)


def assign(tree: RootedTree, child_order: ChildOrder = "ascending",
           choose_b: BChoice = b_equals_a_bar, start: int = 0) -> IntervalAssignment:
    """Assign intervals to every node, giving the root a(root) = ``start``.

    ``child_order`` is ``"ascending"``, ``"descending"``, ``"size"`` or a
    callable ``(tree, u) -> children of u in processing order``.
    ``choose_b(u, a_u, a_bar_u)`` must return a value >= ``a_bar_u``.

    Uses an explicit stack, so path-shaped trees of any depth are fine.
    """
    if start < 0:
        raise ValueError("start must be non-negative")
    n = tree.n
    indptr_arr, seq_arr = _resolve_order(tree, child_order)
    indptr, seq = indptr_arr.tolist(), seq_arr.tolist()
    a = [start] * n
    b = [start] * n
    a_bar = [start] * n
    b_bar = [start] * n
    stack = [0]
    pos = [indptr[0]]
    while stack:
        u = stack[-1]
        p = pos[-1]
        if p < indptr[u + 1]:
            pos[-1] = p + 1
            v = seq[p]
            a[v] = a_bar[v] = b[v] = b_bar[v] = b_bar[u] + 1
            stack.append(v)
            pos.append(indptr[v])
            continue
        bu = choose_b(u, a[u], a_bar[u])
        if bu < a_bar[u]:
            raise StrategyViolation(f"choose_b gave b({u})={bu} < a_bar({u})={a_bar[u]}")
        b[u] = bu
        if bu > b_bar[u]:
            b_bar[u] = bu
        stack.pop()
        pos.pop()
        if stack:
            w = stack[-1]
            a_bar[w] = a_bar[u]
            b_bar[w] = b_bar[u]
    return IntervalAssignment.from_arrays(a, b, a_bar, b_bar, order=(indptr_arr, seq_arr))


def order_csr(tree: RootedTree, child_order: str) -> tuple[np.ndarray, np.ndarray]:
    """CSR child lists for one of the named orders."""
    indptr, children = tree.child_csr
    if child_order == "ascending":
        return indptr, children
    if child_order == "size":
        return size_ordered_csr(tree)
    if child_order == "descending":
        owner = np.repeat(np.arange(tree.n), np.diff(indptr))
        src = indptr[owner] + indptr[owner + 1] - 1 - np.arange(len(children))
        return indptr, children[src]
    raise ValueError(f"unknown child order {child_order!r}; use one of {CHILD_ORDERS} or a callable")


def assign_with_table(tree: RootedTree, child_order: str = "ascending", s_table=None,
                      start: int = 0, backend: str | None = None):
    """Array-kernel version of :func:`assign` for the two built-in b rules.

    ``s_table`` None means b(u) = a_bar(u); otherwise b(u) - a(u) + 1 is the
    smallest table entry >= a_bar(u) - a(u) + 1. Returns ``(assignment, k)``.
    """
    indptr, children = order_csr(tree, child_order)
    status, a, b, a_bar, b_bar, k = kernels.assign_intervals(indptr, children, start, s_table, backend)
    if status < 0:
        raise RangeExceeded(f"no permitted interval length covers node {-status - 1}")
    for arr in (a, b, a_bar, b_bar, k):
        arr.setflags(write=False)
    return IntervalAssignment(a, b, a_bar, b_bar, order=(indptr, children)), k


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------

def recompute_extrema(tree: RootedTree, ia: IntervalAssignment) -> tuple[np.ndarray, np.ndarray]:
    """Max of a and of b over each subtree, computed from scratch."""
    parent = tree.parent_array
    return kernels.subtree_max(parent, ia.a), kernels.subtree_max(parent, ia.b)


def left_including_violation(tree: RootedTree, ia: IntervalAssignment):
    """First (u, v) where ancestry and ``a(v) in [a(u), b(u)]`` disagree, else None."""
    anc = tree.ancestor_matrix()
    a, b = ia.a, ia.b
    inside = (a[None, :] >= a[:, None]) & (a[None, :] <= b[:, None])
    bad = np.argwhere(anc != inside)
    return None if not len(bad) else (int(bad[0, 0]), int(bad[0, 1]))


def check_left_including(tree: RootedTree, ia: IntervalAssignment) -> bool:
    """u is an ancestor of v iff a(v) lies in [a(u), b(u)], over all n^2 pairs."""
    return left_including_violation(tree, ia) is None


def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    if not len(hits):
        return None
    row = hits[0]
    return int(row[0]) if len(row) == 1 else tuple(int(x) for x in row)


def _union_gap(starts: np.ndarray, ends: np.ndarray, lo: int, hi: int) -> bool:
    """True unless the union of integer intervals is exactly [lo, hi]."""
    keep = ends >= starts
    starts, ends = starts[keep], ends[keep]
    if not len(starts):
        return True
    order = np.argsort(starts, kind="stable")
    starts, ends = starts[order], ends[order]
    reach = np.maximum.accumulate(ends)
    if starts[0] != lo or reach[-1] != hi:
        return True
    return bool(np.any(starts[1:] > reach[:-1] + 1))


def check_necessary_conditions(tree: RootedTree, ia: IntervalAssignment) -> AssignmentReport:
    """The four properties every left-including assignment must have.

    ``b_ge_a_bar``: b(u) >= a_bar(u).
    ``descendant_a_greater``: a(v) > a(u) for proper descendants v of u.
    ``subtree_union``: [a(u), b_bar(u)] is the union of I(v) over the subtree.
    ``incomparable_disjoint``: [a(u), b_bar(u)], [a(v), b_bar(v)] disjoint
    when neither node is an ancestor of the other.
    """
    a_bar, b_bar = recompute_extrema(tree, ia)
    a, b = ia.a, ia.b
    anc = tree.ancestor_matrix()
    n = tree.n
    rep = AssignmentReport()
    rep.record("b_ge_a_bar", _first(b < a_bar))
    proper = anc & ~np.eye(n, dtype=bool)
    rep.record("descendant_a_greater", _first(proper & (a[None, :] <= a[:, None])))
    gap = None
    for u in range(n):
        members = np.flatnonzero(anc[u])
        if _union_gap(a[members], b[members], int(a[u]), int(b_bar[u])):
            gap = u
            break
    rep.record("subtree_union", gap)
    incomparable = ~anc & ~anc.T
    overlap = np.maximum(a[:, None], a[None, :]) <= np.minimum(b_bar[:, None], b_bar[None, :])
    rep.record("incomparable_disjoint", _first(np.triu(incomparable & overlap)))
    return rep


def check_sufficient_conditions(tree: RootedTree, ia: IntervalAssignment) -> AssignmentReport:
    """The three local conditions that together imply left-inclusion.

    ``b_ge_a_bar``: b(u) >= a_bar(u).
    ``child_a_greater``: a(v) > a(u) for each child v (witness is (u, v)).
    ``siblings_disjoint``: sibling [a, b_bar] ranges pairwise disjoint.

    Runs in O(n log n); empty ranges (b_bar < a) count as disjoint.
    """
    a_bar, b_bar = recompute_extrema(tree, ia)
    a = ia.a
    rep = AssignmentReport()
    rep.record("b_ge_a_bar", _first(ia.b < a_bar))
    parents = tree.parents
    kids = np.arange(1, tree.n, dtype=np.int64)
    bad = np.flatnonzero(a[kids] <= a[parents])
    rep.record("child_a_greater", None if not bad.size else (int(parents[bad[0]]), int(kids[bad[0]])))
    nonempty = kids[b_bar[kids] >= a[kids]]
    order = nonempty[np.lexsort((a[nonempty], tree.parent_array[nonempty]))]
    same = tree.parent_array[order[1:]] == tree.parent_array[order[:-1]]
    clash = np.flatnonzero(same & (b_bar[order[:-1]] >= a[order[1:]]))
    rep.record("siblings_disjoint", None if not clash.size
               else (int(order[clash[0]]), int(order[clash[0] + 1])))
    return rep


def basic_property_violation(tree: RootedTree, ia: IntervalAssignment, processing_order=None,
                             use_final_b_bar: bool = False):
    """First internal node breaking the span identities, else None.

    For u with children v_1..v_k in processing order, with span(v) =
    b_bar(v) - a(v) + 1:

    * b_bar(v_k) - a(u) + 1 == sum span(v_i) + 1, and
      b_bar(u) == max(b(u), b_bar(v_k));
    * a_bar(u) - a(u) + 1 == (a_bar(v_k) - a(v_k) + 1) + sum_{i<k} span(v_i) + 1.

    ``use_final_b_bar=True`` checks the first identity against b_bar(u)
    itself, which only holds when b(u) never overshoots b_bar(v_k) (true for
    b = a_bar, false in general once b is rounded up).
    """
    if processing_order is None:
        if ia.order is None:
            raise ValueError("pass processing_order or use an assignment that records one")
        indptr, seq = ia.order
    elif isinstance(processing_order, tuple) and len(processing_order) == 2 \
            and isinstance(processing_order[0], np.ndarray):
        indptr, seq = processing_order
    else:
        lists = [list(processing_order[u]) for u in range(tree.n)]
        indptr = np.zeros(tree.n + 1, dtype=np.int64)
        np.cumsum([len(x) for x in lists], out=indptr[1:])
        seq = np.fromiter((v for x in lists for v in x), dtype=np.int64, count=int(indptr[-1]))
    a, b, a_bar, b_bar = ia.a, ia.b, ia.a_bar, ia.b_bar
    internal = np.flatnonzero(indptr[1:] > indptr[:-1])
    if not internal.size:
        return None
    owner = np.repeat(np.arange(tree.n), np.diff(indptr))
    span = b_bar[seq] - a[seq] + 1
    total = np.zeros(tree.n, dtype=np.int64)
    np.add.at(total, owner, span)
    last = seq[indptr[internal + 1] - 1]
    head = total[internal] - span[indptr[internal + 1] - 1]
    top = b_bar[internal] if use_final_b_bar else b_bar[last]
    ok1 = top - a[internal] + 1 == total[internal] + 1
    if not use_final_b_bar:
        ok1 &= b_bar[internal] == np.maximum(b[internal], b_bar[last])
    ok2 = a_bar[internal] - a[internal] + 1 == (a_bar[last] - a[last] + 1) + head + 1
    bad = np.flatnonzero(~(ok1 & ok2))
    return None if not bad.size else int(internal[bad[0]])


def check_basic_property(tree: RootedTree, ia: IntervalAssignment, processing_order=None,
                         use_final_b_bar: bool = False) -> bool:
    """Span identities linking a node to its children; see :func:`basic_property_violation`.

    ``processing_order`` may be a CSR pair, a per-node sequence of child
    lists, or None to use the order recorded in ``ia``.
    """
    return basic_property_violation(tree, ia, processing_order, use_final_b_bar) is None
