"""Immutable rooted trees in canonical ``parent[i] < i`` form.

Node 0 is the root. Every other node ``i`` has a parent with a smaller id, so
acyclicity is structural and a reverse sweep over ids is a post-order.
"""

from __future__ import annotations

import os
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import EmptyInput, MalformedTree

# ancestor_matrix materializes n*n booleans
MAX_MATRIX_NODES = 8192


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class RootedTree:
    """A rooted tree with ordered child lists and subtree sizes.

    Build one with :func:`from_parent_array` or :func:`from_edge_list`.
    Child lists are in ascending id order.
    """

    __slots__ = ("n", "_parent", "_indptr", "_children", "subtree_size", "_anc")

    def __init__(self, parent: np.ndarray):
        # parent is the full length-n array with parent[0] == -1, already validated
        n = len(parent)
        self.n = n
        self._parent = _frozen(parent)
        par = parent[1:]
        order = np.argsort(par, kind="stable")
        counts = np.bincount(par, minlength=n) if n > 1 else np.zeros(n, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self._indptr = _frozen(indptr)
        self._children = _frozen((order + 1).astype(np.int64))
        self.subtree_size = _frozen(kernels.subtree_sizes(parent))
        self._anc = None

    @property
    def parents(self) -> np.ndarray:
        """p_1 .. p_{n-1}: the parent of each non-root node, in id order."""
        return self._parent[1:]

    @property
    def parent_array(self) -> np.ndarray:
        """Length-n parent array with -1 at the root."""
        return self._parent

    @property
    def child_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, children)``; children of u are ``children[indptr[u]:indptr[u+1]]``."""
        return self._indptr, self._children

    def parent_of(self, u: int) -> int:
        self._check(u)
        return int(self._parent[u])

    def children(self, u: int) -> tuple[int, ...]:
        self._check(u)
        return tuple(self._children[self._indptr[u]:self._indptr[u + 1]].tolist())

    def is_leaf(self, u: int) -> bool:
        self._check(u)
        return self._indptr[u] == self._indptr[u + 1]

    def ancestor_matrix(self) -> np.ndarray:
        """``M[u, v]`` is True iff u is an ancestor of v (oracle walk, cached)."""
        if self._anc is None:
            n = self.n
            if n > MAX_MATRIX_NODES:
                raise ValueError(f"ancestor matrix refused for n={n} > {MAX_MATRIX_NODES}")
            us, vs = np.divmod(np.arange(n * n, dtype=np.int64), n)
            m = kernels.oracle_pairs(self._parent, us, vs).reshape(n, n)
            self._anc = _frozen(m)
        return self._anc

    def _check(self, u) -> None:
        if not 0 <= u < self.n:
            raise IndexError(f"node id {u} out of range for n={self.n}")

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._parent, other._parent)

    def __hash__(self) -> int:
        return hash(self._parent.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"RootedTree(parents={self.parents.tolist()})"
        return f"RootedTree(n={self.n})"


def from_parent_array(parents: Sequence[int] | np.ndarray, n: int | None = None) -> RootedTree:
    """Build a tree from p_1 .. p_{n-1} where p_i < i.

    ``n`` is optional; when given it must equal ``len(parents) + 1``.
    """
    if parents is None:
        raise EmptyInput("no parent array given")
    arr = np.asarray(parents)
    if arr.ndim != 1:
        raise MalformedTree("parent array must be one-dimensional")
    if n is not None:
        if n <= 0:
            raise EmptyInput("a tree needs at least one node")
        if n != len(arr) + 1:
            raise MalformedTree(f"n={n} but {len(arr)} parents given")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        raise MalformedTree("parent entries must be integers")
    arr = arr.astype(np.int64, copy=False)
    ids = np.arange(1, len(arr) + 1, dtype=np.int64)
    bad = np.flatnonzero((arr < 0) | (arr >= ids))
    if bad.size:
        i = int(bad[0]) + 1
        raise MalformedTree(f"parent of node {i} is {int(arr[i - 1])}; need 0 <= p < {i}")
    full = np.empty(len(arr) + 1, dtype=np.int64)
    full[0] = -1
    full[1:] = arr
    return RootedTree(full)


def from_edge_list(n: int, root: int, edges: Iterable[tuple[int, int]]) -> tuple[RootedTree, list[int]]:
    """Canonicalize an undirected tree given as edges.

    Nodes are renumbered in BFS order from ``root`` (neighbours visited in
    ascending original id), which yields ``parent[i] < i``.

    Returns the tree and ``old_to_new`` with ``old_to_new[old_id] = new_id``.
    """
    if n <= 0:
        raise EmptyInput("a tree needs at least one node")
    if not 0 <= root < n:
        raise MalformedTree(f"root {root} out of range for n={n}")
    edges = [(int(x), int(y)) for x, y in edges]
    if len(edges) != n - 1:
        raise MalformedTree(f"expected {n - 1} edges, got {len(edges)} (cycle or disconnection)")
    adj: list[list[int]] = [[] for _ in range(n)]
    seen = set()
    for x, y in edges:
        if not (0 <= x < n and 0 <= y < n):
            raise MalformedTree(f"edge ({x}, {y}) has an endpoint outside [0, {n})")
        if x == y:
            raise MalformedTree(f"self-loop at {x}")
        key = (min(x, y), max(x, y))
        if key in seen:
            raise MalformedTree(f"duplicate edge {key}")
        seen.add(key)
        adj[x].append(y)
        adj[y].append(x)
    old_to_new = [-1] * n
    old_to_new[root] = 0
    parent = [-1]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in sorted(adj[x]):
            if old_to_new[y] == -1:
                old_to_new[y] = len(parent)
                parent.append(old_to_new[x])
                queue.append(y)
    if len(parent) != n:
        raise MalformedTree("edges do not form a tree (cycle or disconnection)")
    return RootedTree(np.asarray(parent, dtype=np.int64)), old_to_new


def to_edge_list(tree: RootedTree) -> list[tuple[int, int]]:
    """(parent, child) pairs in ascending child id."""
    return [(int(p), i) for i, p in enumerate(tree.parents.tolist(), start=1)]


def is_ancestor_oracle(tree: RootedTree, u: int, v: int) -> bool:
    """True iff u lies on the root-to-v path. Every node is its own ancestor."""
    tree._check(u)
    tree._check(v)
    parent = tree._parent
    cur = int(v)
    while cur > u:
        cur = int(parent[cur])
    return cur == u


def children_by_subtree_size(tree: RootedTree, u: int) -> list[int]:
    """Children of u by ascending subtree size, ties by ascending id."""
    size = tree.subtree_size
    return sorted(tree.children(u), key=lambda v: (int(size[v]), v))


def size_ordered_csr(tree: RootedTree) -> tuple[np.ndarray, np.ndarray]:
    """CSR child lists sorted by (subtree size, id) within each parent."""
    indptr, _ = tree.child_csr
    if tree.n == 1:
        return indptr, np.zeros(0, dtype=np.int64)
    ids = np.arange(1, tree.n, dtype=np.int64)
    order = np.lexsort((ids, tree.subtree_size[1:], tree.parents))
    return indptr, ids[order]


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _data_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


def parse_tree(text: str) -> RootedTree:
    """Parse the tree text format: ``n`` then (for n > 1) the parent list."""
    lines = _data_lines(text)
    if not lines:
        raise EmptyInput("tree file has no data lines")
    try:
        n = int(lines[0])
    except ValueError:
        raise MalformedTree(f"first data line must be an integer n, got {lines[0]!r}") from None
    if n <= 0:
        raise EmptyInput("a tree needs at least one node")
    expected = 1 if n == 1 else 2
    if len(lines) != expected:
        raise MalformedTree(f"expected {expected} data line(s) for n={n}, got {len(lines)}")
    if n == 1:
        return from_parent_array([])
    try:
        parents = [int(tok) for tok in lines[1].split()]
    except ValueError:
        raise MalformedTree("parent line must hold integers") from None
    return from_parent_array(parents, n=n)


def format_tree(tree: RootedTree, comment: str | None = None) -> str:
    parts = []
    if comment:
        parts.extend(f"# {line}" for line in comment.splitlines())
    parts.append(str(tree.n))
    if tree.n > 1:
        parts.append(" ".join(map(str, tree.parents.tolist())))
    return "\n".join(parts) + "\n"


def read_tree(path: str | os.PathLike) -> RootedTree:
    with open(path) as fh:
        return parse_tree(fh.read())


def write_tree(tree: RootedTree, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_tree(tree, comment))
