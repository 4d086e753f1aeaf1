"""Check a scheme end to end on one tree: decoder vs oracle plus every validator."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import approx, classic, kernels
from .framework import (
    basic_property_violation,
    check_necessary_conditions,
    check_sufficient_conditions,
    left_including_violation,
    recompute_extrema,
)
from .generators import bounded, splitmix64
from .tree import RootedTree

# quadratic validators run only up to this many nodes
QUADRATIC_LIMIT = 2000
_PAIR_CHUNK = 1 << 22


@dataclass
class VerifyResult:
    scheme: str
    n: int
    pairs_checked: int = 0
    mismatch: tuple[int, int, bool, bool] | None = None
    checks: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.mismatch is None and all(v is None or v == "skipped" for v in self.checks.values())

    def lines(self) -> list[str]:
        out = [f"scheme={self.scheme} n={self.n}"]
        if self.mismatch is None:
            out.append(f"decoder vs oracle: {self.pairs_checked} pairs, 0 mismatches")
        else:
            u, v, got, want = self.mismatch
            out.append(f"decoder vs oracle: MISMATCH u={u} v={v} decoder={got} oracle={want}")
        for name, wit in self.checks.items():
            status = "ok" if wit is None else ("skipped" if wit == "skipped" else f"FAIL at {wit}")
            out.append(f"{name}: {status}")
        return out


def parse_pairs(spec: str) -> int | None:
    """``'all'`` -> None, ``'random:K'`` -> K."""
    if spec == "all":
        return None
    kind, _, count = spec.partition(":")
    if kind != "random" or not count.isdigit() or int(count) <= 0:
        raise ValueError(f"--pairs must be 'all' or 'random:K', got {spec!r}")
    return int(count)


def labels_and_assignment(tree: RootedTree, scheme: str, backend=None):
    if scheme == "classic":
        ia = classic.assign_classic(tree, backend)
        return classic.encode_classic(tree, backend), ia, None
    if scheme == "new":
        ka = approx.assign_new(tree, backend)
        return approx.encode_new(tree, backend), ka.ia, ka
    raise ValueError(f"unknown scheme {scheme!r}")


def decode_bulk(labels, scheme: str) -> tuple[np.ndarray, np.ndarray]:
    mod = classic if scheme == "classic" else approx
    a, b = mod.decode_intervals(labels)
    return np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)


def _compare(tree, a, b, us, vs, backend):
    got = (a[vs] >= a[us]) & (a[vs] <= b[us])
    want = kernels.oracle_pairs(tree.parent_array, us, vs, backend)
    bad = np.flatnonzero(got != want)
    if bad.size:
        i = bad[0]
        return int(us[i]), int(vs[i]), bool(got[i]), bool(want[i])
    return None


def verify_tree(tree: RootedTree, scheme: str, pairs: int | None = None, seed: int = 0,
                backend: str | None = None) -> VerifyResult:
    """Decode ``pairs`` random ordered pairs (all pairs if None) and run validators."""
    labels, ia, ka = labels_and_assignment(tree, scheme, backend)
    res = VerifyResult(scheme, tree.n)
    a, b = decode_bulk(labels, scheme)
    n = tree.n
    if pairs is None:
        rows = max(1, _PAIR_CHUNK // n)
        cols = np.arange(n, dtype=np.int64)
        for lo in range(0, n, rows):
            hi = min(n, lo + rows)
            us = np.repeat(np.arange(lo, hi, dtype=np.int64), n)
            vs = np.tile(cols, hi - lo)
            res.mismatch = _compare(tree, a, b, us, vs, backend)
            res.pairs_checked += len(us)
            if res.mismatch:
                break
    else:
        words = splitmix64(seed, 2 * pairs)
        us = bounded(words[:pairs], np.full(pairs, n))
        vs = bounded(words[pairs:], np.full(pairs, n))
        res.mismatch = _compare(tree, a, b, us, vs, backend)
        res.pairs_checked = pairs

    a_bar, b_bar = recompute_extrema(tree, ia)
    same = np.array_equal(a_bar, ia.a_bar) and np.array_equal(b_bar, ia.b_bar)
    res.checks["extrema_match"] = None if same else int(np.flatnonzero(
        (a_bar != ia.a_bar) | (b_bar != ia.b_bar))[0])
    res.checks["basic_property"] = basic_property_violation(tree, ia)
    suff = check_sufficient_conditions(tree, ia)
    for name, ok in suff.passed.items():
        res.checks[f"sufficient.{name}"] = None if ok else suff.witness[name]
    if n <= QUADRATIC_LIMIT:
        res.checks["left_including"] = left_including_violation(tree, ia)
        nec = check_necessary_conditions(tree, ia)
        for name, ok in nec.passed.items():
            res.checks[f"necessary.{name}"] = None if ok else nec.witness[name]
    else:
        res.checks["left_including"] = "skipped"
        res.checks["necessary"] = "skipped"
    if scheme == "classic":
        span = ia.b_bar - ia.a + 1
        bad = np.flatnonzero(span != tree.subtree_size)
        res.checks["span_equals_subtree_size"] = int(bad[0]) if bad.size else None
        perm = np.array_equal(np.sort(ia.a), np.arange(n))
        res.checks["a_is_preorder_permutation"] = None if perm else "a values"
    else:
        res.checks["size_bounds"] = approx.new_invariant_violation(tree, ka)
        over = np.flatnonzero(ia.a > 2 * n - 1)
        res.checks["a_below_2n"] = int(over[0]) if over.size else None
        bad_k = np.flatnonzero(ka.k >= ka.params.k_limit)
        res.checks["k_in_range"] = int(bad_k[0]) if bad_k.size else None
    return res
