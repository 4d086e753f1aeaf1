"""Deterministic tree generators and exhaustive enumeration.

Random kinds draw from SplitMix64 (Steele, Lea & Flood 2014): output j of a
generator seeded with ``seed`` is ``mix(seed + (j + 1) * 0x9E3779B97F4A7C15)``
modulo 2^64. A word x maps into [0, bound) as ``(x * bound) >> 64``. Both
steps are pure integer arithmetic, so trees are identical on every platform.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import BadSpec
from .tree import RootedTree, from_edge_list, from_parent_array

KINDS = ("path", "star", "kary", "caterpillar", "attach", "prufer")
MAX_ENUM_N = 9

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


def splitmix64(seed: int, count: int) -> np.ndarray:
    """The first ``count`` SplitMix64 outputs for ``seed`` as uint64."""
    j = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = np.uint64(seed & MASK64) + j * np.uint64(GOLDEN)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return x


def bounded(words: np.ndarray, bounds) -> np.ndarray:
    """floor(words * bounds / 2^64) elementwise, exact for bounds < 2^32."""
    bounds = np.asarray(bounds, dtype=np.uint64)
    lo32 = np.uint64(0xFFFFFFFF)
    s32 = np.uint64(32)
    hi = (words >> s32) * bounds
    low = ((words & lo32) * bounds) >> s32
    return ((hi + low) >> s32).astype(np.int64)


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    seed: int = 0
    arity: int = 2


def prufer_decode(seq) -> list[tuple[int, int]]:
    """Edges of the labelled tree on len(seq) + 2 nodes with Prufer code ``seq``."""
    n = len(seq) + 2
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def generate(spec: GenSpec) -> RootedTree:
    n = spec.n
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise BadSpec(f"n must be a positive integer, got {n!r}")
    if n >= 1 << 32:
        raise BadSpec("n must be below 2^32")
    ids = np.arange(1, n, dtype=np.int64)
    kind = spec.kind
    if kind == "path":
        parents = ids - 1
    elif kind == "star":
        parents = np.zeros(n - 1, dtype=np.int64)
    elif kind == "kary":
        if spec.arity < 1:
            raise BadSpec(f"arity must be >= 1, got {spec.arity}")
        parents = (ids - 1) // spec.arity
    elif kind == "caterpillar":
        spine = (n + 1) // 2
        parents = np.where(ids < spine, ids - 1, ids - spine)
    elif kind == "attach":
        parents = bounded(splitmix64(spec.seed, n - 1), ids)
    elif kind == "prufer":
        if n <= 2:
            return from_parent_array([0] * (n - 1))
        code = bounded(splitmix64(spec.seed, n - 2), np.full(n - 2, n)).tolist()
        tree, _ = from_edge_list(n, 0, prufer_decode(code))
        return tree
    else:
        raise BadSpec(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    return from_parent_array(parents)


def enumerate_all(n: int) -> Iterator[RootedTree]:
    """Every parent array with p_i in [0, i): (n-1)! trees."""
    if not 1 <= n <= MAX_ENUM_N:
        raise BadSpec(f"enumerate_all needs 1 <= n <= {MAX_ENUM_N}, got {n}")
    for parents in itertools.product(*(range(i) for i in range(1, n))):
        yield from_parent_array(list(parents))
