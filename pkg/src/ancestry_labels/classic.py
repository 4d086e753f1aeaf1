"""The 2*ceil(lg n)-bit interval scheme: label = a(u) . b(u) with b = a_bar."""

from __future__ import annotations

from .errors import LabelFormat
from .framework import IntervalAssignment, assign_with_table
from .labels import Label, as_label, pack_columns
from .tree import RootedTree


def ceil_lg(n: int) -> int:
    """ceil(lg n) for n >= 1, exactly."""
    if n < 1:
        raise ValueError("ceil_lg needs n >= 1")
    return (n - 1).bit_length()


def field_width(n: int) -> int:
    return max(ceil_lg(n), 1)


def label_length(n: int) -> int:
    return 2 * field_width(n)


def assign_classic(tree: RootedTree, backend: str | None = None) -> IntervalAssignment:
    """Intervals with b(u) = a_bar(u), children in ascending id order.

    a(u) is the pre-order index of u and b_bar(u) - a(u) + 1 = |T_u|.
    """
    ia, _ = assign_with_table(tree, "ascending", None, 0, backend)
    return ia


def encode_classic(tree: RootedTree, backend: str | None = None) -> list[Label]:
    ia = assign_classic(tree, backend)
    w = field_width(tree.n)
    return pack_columns([(ia.a, w), (ia.b, w)])


def _fields(label: Label | str) -> tuple[int, int]:
    bits = as_label(label).bits
    if len(bits) % 2:
        raise LabelFormat(f"classic labels have even length, got {len(bits)}")
    h = len(bits) // 2
    return int(bits[:h], 2), int(bits[h:], 2)


def decode_classic(lu: Label | str, lv: Label | str) -> bool:
    """True iff the node labelled ``lu`` is an ancestor of the one labelled ``lv``."""
    if len(lu) != len(lv):
        raise LabelFormat(f"label lengths differ: {len(lu)} vs {len(lv)}")
    a_u, b_u = _fields(lu)
    a_v, _ = _fields(lv)
    return a_u <= a_v <= b_u


def decode_intervals(labels) -> tuple[list[int], list[int]]:
    """Split every label once into (a, b) lists, for bulk queries."""
    pairs = [_fields(lab) for lab in labels]
    if len({len(lab) for lab in labels}) > 1:
        raise LabelFormat("labels differ in length")
    return [p[0] for p in pairs], [p[1] for p in pairs]
