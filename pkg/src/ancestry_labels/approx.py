"""The approximation scheme: label = a(u) . k(u), ceil(lg n) + ceil(2 lg ceil(lg n)) + 3 bits.

Interval lengths are restricted to S = { floor(2^(k/z)) : 0 <= k < 4 z^2 }
with z = ceil(lg n), so a node stores the exponent k instead of b.

Everything touching S is exact integer arithmetic:

* ``s_of_k(k, z)`` is the unique s with s^z <= 2^k < (s+1)^z;
* ``k_of_m(m, z)`` is the smallest k with 2^k >= m^z.

Encoder and decoder share :func:`s_of_k`, so they agree bit for bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .classic import ceil_lg
from .errors import LabelFormat, RangeExceeded
from .framework import IntervalAssignment, assign, assign_with_table
from .labels import Label, as_label, pack_columns
from .tree import RootedTree

MAX_N = 1 << 62
# kernel tables saturate here; any real a(v) is far below it
TABLE_CAP = 1 << 62


def ceil_2lg(z: int) -> int:
    """ceil(2 lg z) = ceil(lg z^2) for z >= 1."""
    return (z * z - 1).bit_length()


@dataclass(frozen=True)
class SchemeParams:
    n: int | None
    z: int
    a_width: int
    k_width: int
    label_len: int

    @property
    def k_limit(self) -> int:
        """Exponents live in [0, 4 z^2)."""
        return 4 * self.z * self.z

    @classmethod
    def from_z(cls, z: int, n: int | None = None) -> "SchemeParams":
        if z < 1:
            raise ValueError("z must be >= 1")
        k_width = 2 + ceil_2lg(z)
        return cls(n=n, z=z, a_width=z + 1, k_width=k_width, label_len=z + 1 + k_width)

    @classmethod
    def for_n(cls, n: int) -> "SchemeParams":
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in [1, 2^62], got {n}")
        return cls.from_z(max(ceil_lg(n), 1), n=n)


def label_length(n: int) -> int:
    return SchemeParams.for_n(n).label_len


def k_of_m(m: int, z: int) -> int:
    """Smallest k >= 0 with 2^k >= m^z, i.e. ceil(z lg m)."""
    if m < 1 or z < 1:
        raise ValueError(f"need m >= 1 and z >= 1, got m={m}, z={z}")
    k = (m ** z - 1).bit_length()
    if k >= 4 * z * z:
        raise RangeExceeded(f"k={k} >= 4z^2={4 * z * z} for m={m}, z={z}")
    return k


def s_of_k(k: int, z: int) -> int:
    """floor(2^(k/z)): the unique s with s^z <= 2^k < (s+1)^z."""
    if z < 1:
        raise ValueError("z must be >= 1")
    if not 0 <= k < 4 * z * z:
        raise RangeExceeded(f"k={k} outside [0, {4 * z * z})")
    target = 1 << k
    q = k // z
    if q < 50:
        s = int(2.0 ** (k / z))
        while s ** z > target:
            s -= 1
        while (s + 1) ** z <= target:
            s += 1
        return s
    # 2^q <= s < 2^(q+1)
    lo, hi = 1 << q, 1 << (q + 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** z <= target:
            lo = mid
        else:
            hi = mid
    return lo


def round_up_to_S(m: int, z: int) -> tuple[int, int]:
    """Smallest permitted length s >= m, with its exponent k.

    Guarantees m <= s and s^z < 2 m^z (i.e. s < m * 2^(1/z)).
    """
    k = k_of_m(m, z)
    s = s_of_k(k, z)
    assert m <= s and s ** z < 2 * m ** z, (m, z, s, k)
    return s, k


@lru_cache(maxsize=64)
def _length_table(z: int) -> np.ndarray:
    limit = 4 * z * z
    table = np.full(limit, TABLE_CAP, dtype=np.int64)
    for k in range(limit):
        s = s_of_k(k, z)
        if s >= TABLE_CAP:
            break
        table[k] = s
    table.setflags(write=False)
    return table


def length_table(z: int) -> np.ndarray:
    """``table[k] = s_of_k(k, z)`` for all k < 4z^2 (saturated at 2^62)."""
    return _length_table(z)


@dataclass(frozen=True, eq=False)
class KAnnotatedAssignment:
    ia: IntervalAssignment
    k: np.ndarray
    params: SchemeParams


class RoundUpB:
    """b-choice for :func:`~ancestry_labels.framework.assign`.

    Rounds a_bar(u) - a(u) + 1 up into S for an n-node tree and records the
    exponent in ``self.k[u]``.
    """

    def __init__(self, n: int):
        self.z = SchemeParams.for_n(n).z
        self.k = [0] * n

    def __call__(self, u: int, a_u: int, a_bar_u: int) -> int:
        s, k = round_up_to_S(a_bar_u - a_u + 1, self.z)
        self.k[u] = k
        return a_u + s - 1


def assign_new(tree: RootedTree, backend: str | None = None, exact: bool = False) -> KAnnotatedAssignment:
    """Children by non-decreasing subtree size; b(u) - a(u) + 1 rounded up into S.

    The default path runs the array kernel against :func:`length_table`.
    ``exact=True`` runs the generic engine calling :func:`round_up_to_S` per
    node instead; both give identical results.
    """
    params = SchemeParams.for_n(tree.n)
    if exact:
        rule = RoundUpB(tree.n)
        ia = assign(tree, "size", rule, 0)
        k = np.asarray(rule.k, dtype=np.int64)
        k.setflags(write=False)
    else:
        ia, k = assign_with_table(tree, "size", length_table(params.z), 0, backend)
    top = int(ia.a.max())
    if top > 2 * tree.n - 1:
        warnings.warn(f"a(u)={top} exceeds 2n-1={2 * tree.n - 1}", RuntimeWarning, stacklevel=2)
    return KAnnotatedAssignment(ia, k, params)


def new_invariant_violation(tree: RootedTree, ka: KAnnotatedAssignment):
    """First node where the size bounds on a_bar and b_bar fail, else None.

    With t = |T_u| and f = floor(lg t), checks exactly
    (a_bar - a + 1)^z <= t^z 2^f and (b_bar - a + 1)^z <= t^z 2^(f+1).
    """
    z = ka.params.z
    ia = ka.ia
    a = ia.a.tolist()
    spans_a = (ia.a_bar - ia.a + 1).tolist()
    spans_b = (ia.b_bar - ia.a + 1).tolist()
    sizes = tree.subtree_size.tolist()
    for u in range(tree.n):
        t = sizes[u]
        base = t ** z << (t.bit_length() - 1)
        if spans_a[u] ** z > base or spans_b[u] ** z > base << 1:
            return u
        if a[u] < 0:
            return u
    return None


def check_new_invariants(tree: RootedTree, ka: KAnnotatedAssignment) -> bool:
    return new_invariant_violation(tree, ka) is None


def encode_new(tree: RootedTree, backend: str | None = None) -> list[Label]:
    ka = assign_new(tree, backend)
    p = ka.params
    return pack_columns([(ka.ia.a, p.a_width), (ka.k, p.k_width)])


def recover_z(label_len: int) -> int:
    """Invert label_len = z + ceil(2 lg z) + 3."""
    if label_len < 4:
        raise LabelFormat(f"no z gives label length {label_len}")
    for z in range(max(1, label_len - ceil_2lg(label_len) - 3), label_len - 2):
        if z + ceil_2lg(z) + 3 == label_len:
            return z
    raise LabelFormat(f"no z gives label length {label_len}")


def _fields(label: Label | str, z: int) -> tuple[int, int]:
    bits = as_label(label).bits
    a = int(bits[:z + 1], 2)
    k = int(bits[z + 1:], 2)
    if k >= 4 * z * z:
        raise LabelFormat(f"k-field {k} outside [0, {4 * z * z})")
    return a, k


def decode_new(lu: Label | str, lv: Label | str) -> bool:
    """True iff the node labelled ``lu`` is an ancestor of the one labelled ``lv``."""
    if len(lu) != len(lv):
        raise LabelFormat(f"label lengths differ: {len(lu)} vs {len(lv)}")
    z = recover_z(len(lu))
    a_u, k_u = _fields(lu, z)
    a_v, _ = _fields(lv, z)
    return a_u <= a_v <= a_u + s_of_k(k_u, z) - 1


def decode_intervals(labels) -> tuple[list[int], list[int]]:
    """(a, b) for every label, decoded once each, for bulk queries."""
    lengths = {len(lab) for lab in labels}
    if len(lengths) > 1:
        raise LabelFormat("labels differ in length")
    if not lengths:
        return [], []
    z = recover_z(lengths.pop())
    s_cache: dict[int, int] = {}
    a_out, b_out = [], []
    for lab in labels:
        a, k = _fields(lab, z)
        s = s_cache.get(k)
        if s is None:
            s = s_cache[k] = s_of_k(k, z)
        a_out.append(a)
        b_out.append(a + s - 1)
    return a_out, b_out
