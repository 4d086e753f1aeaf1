"""Label-size benchmark and a numba-vs-fallback kernel comparison."""

from __future__ import annotations

import csv
import time
from dataclasses import astuple, dataclass, fields
from typing import Iterable, TextIO

import numpy as np

from . import approx, classic, kernels
from .framework import order_csr
from .generators import GenSpec, bounded, generate, splitmix64

ENCODERS = {"classic": classic.encode_classic, "new": approx.encode_new}
FORMULAS = {"classic": classic.label_length, "new": approx.label_length}


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    n: int
    kind: str
    seed: int
    max_label_bits: int
    encode_ms: float | None


CSV_HEADER = [f.name for f in fields(BenchRow)]


def run_bench(schemes: Iterable[str], sizes: Iterable[int], kinds: Iterable[str], seed: int = 0,
              timing: bool = True, arity: int = 2) -> list[BenchRow]:
    schemes = list(schemes)
    for s in schemes:
        if s not in ENCODERS:
            raise ValueError(f"unknown scheme {s!r}")
    # compile kernels outside the timed region
    warm = generate(GenSpec("path", 3))
    for s in schemes:
        ENCODERS[s](warm)
    rows = []
    for kind in kinds:
        for n in sizes:
            tree = generate(GenSpec(kind, n, seed, arity))
            for s in schemes:
                t0 = time.perf_counter()
                labels = ENCODERS[s](tree)
                ms = (time.perf_counter() - t0) * 1e3
                rows.append(BenchRow(s, n, kind, seed, max(map(len, labels)), ms if timing else None))
    return rows


def write_csv(rows: Iterable[BenchRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        vals = list(astuple(row))
        vals[-1] = "" if row.encode_ms is None else f"{row.encode_ms:.3f}"
        w.writerow(vals)


# ---------------------------------------------------------------------------
# backend comparison
# ---------------------------------------------------------------------------

def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def compare_backends(sizes: Iterable[int] = (10**4, 10**5, 10**6), kind: str = "attach",
                     seed: int = 0, repeats: int = 3, pairs: int = 10**5,
                     backends: Iterable[str] | None = None) -> list[dict]:
    """Best-of-``repeats`` milliseconds per kernel, backend and size.

    Results of both backends are also checked for equality.
    """
    backends = list(backends or kernels.BACKENDS)
    small = generate(GenSpec("path", 4))
    for be in backends:
        kernels.subtree_sizes(small.parent_array, be)
        kernels.assign_intervals(*small.child_csr, 0, None, be)
        kernels.assign_intervals(*small.child_csr, 0, approx.length_table(2), be)
        kernels.oracle_pairs(small.parent_array, [0], [3], be)
    out = []
    for n in sizes:
        tree = generate(GenSpec(kind, n, seed))
        parent = tree.parent_array
        csr_asc = tree.child_csr
        csr_size = order_csr(tree, "size")
        table = approx.length_table(approx.SchemeParams.for_n(n).z)
        words = splitmix64(seed, 2 * pairs)
        us = bounded(words[:pairs], np.full(pairs, n))
        vs = bounded(words[pairs:], np.full(pairs, n))
        jobs = {
            "subtree_sizes": lambda be: kernels.subtree_sizes(parent, be),
            "assign_classic": lambda be: kernels.assign_intervals(*csr_asc, 0, None, be),
            "assign_new": lambda be: kernels.assign_intervals(*csr_size, 0, table, be),
            "oracle_pairs": lambda be: kernels.oracle_pairs(parent, us, vs, be),
        }
        for name, job in jobs.items():
            results = {}
            for be in backends:
                results[be] = job(be)
                out.append({"kernel": name, "n": n, "backend": be, "ms": _time(lambda: job(be), repeats)})
            ref = results[backends[0]]
            for be in backends[1:]:
                got = results[be]
                same = all(np.array_equal(x, y) for x, y in zip(ref, got)) if isinstance(ref, tuple) \
                    else np.array_equal(ref, got)
                if not same:
                    raise AssertionError(f"{name}: backend {be} disagrees with {backends[0]} at n={n}")
    return out
