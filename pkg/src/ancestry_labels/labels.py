"""Fixed-width bit strings and the label file format.

A :class:`Label` is an explicit MSB-first string of ``'0'``/``'1'``
characters. Keeping the characters (rather than an int) preserves leading
zeros and therefore the exact width through every round trip.
"""

from __future__ import annotations

import gc
import os
from functools import partial
from typing import Sequence

import numpy as np

from .errors import BadSplit, LabelFormat, LabelOverflow

SCHEMES = ("classic", "new")


class Label(str):
    """An immutable MSB-first bit string (a ``str`` of ``'0'``/``'1'``)."""

    __slots__ = ()

    def __new__(cls, bits: str):
        if not isinstance(bits, str) or not bits or bits.strip("01"):
            raise LabelFormat(f"label must be a non-empty string of 0/1, got {bits!r}")
        return str.__new__(cls, bits)

    @classmethod
    def _trusted(cls, bits: str) -> "Label":
        return str.__new__(cls, bits)

    @property
    def bits(self) -> str:
        return str(self)

    def __repr__(self) -> str:
        return f"Label({str(self)!r})"

    def hex(self) -> str:
        """Display-only hex form, e.g. ``7:0x4`` for ``0000100``."""
        return f"{len(self)}:{int(self, 2):#x}"


def as_label(x: Label | str) -> Label:
    return x if isinstance(x, Label) else Label(x)


def pack(value: int, width: int) -> Label:
    """``value`` as exactly ``width`` bits, MSB first, zero padded."""
    if width <= 0:
        raise BadSplit(f"width must be positive, got {width}")
    if value < 0 or value >> width:
        raise LabelOverflow(f"{value} does not fit in {width} bits")
    return Label._trusted(format(value, f"0{width}b"))


def pack_columns(fields: Sequence[tuple[np.ndarray, int]]) -> list[Label]:
    """Pack parallel integer columns into one label per row.

    ``fields`` is a list of ``(values, width)``; row i becomes
    ``pack(values_0[i], w_0) + pack(values_1[i], w_1) + ...``.
    """
    rows = len(fields[0][0])
    total = sum(w for _, w in fields)
    chars = np.empty((rows, total), dtype=np.uint8)
    col = 0
    for values, width in fields:
        values = np.asarray(values)
        if len(values) != rows:
            raise ValueError("columns differ in length")
        if rows and (values.min() < 0 or (width < 63 and values.max() >> width)):
            raise LabelOverflow(f"column does not fit in {width} bits")
        if width > 62:
            for i, v in enumerate(values.tolist()):
                if v >> width:
                    raise LabelOverflow(f"{v} does not fit in {width} bits")
                chars[i, col:col + width] = np.frombuffer(format(v, f"0{width}b").encode(), np.uint8)
        else:
            v = values.astype(np.uint64)
            for j in range(width):
                chars[:, col + j] = (v >> np.uint64(width - 1 - j)) & np.uint64(1)
            chars[:, col:col + width] += 48
        col += width
    strings = chars.view(f"S{total}").ravel().astype(f"U{total}").tolist()
    # millions of small allocations otherwise trigger repeated full GC passes
    enabled = gc.isenabled()
    gc.disable()
    try:
        return list(map(partial(str.__new__, Label), strings))
    finally:
        if enabled:
            gc.enable()


def unpack(label: Label | str) -> int:
    return int(as_label(label).bits, 2)


def concat(first: Label | str, second: Label | str) -> Label:
    return Label._trusted(as_label(first).bits + as_label(second).bits)


def split(label: Label | str, prefix_width: int) -> tuple[Label, Label]:
    bits = as_label(label).bits
    if not 0 < prefix_width < len(bits):
        raise BadSplit(f"prefix width {prefix_width} not inside (0, {len(bits)})")
    return Label._trusted(bits[:prefix_width]), Label._trusted(bits[prefix_width:])


# ---------------------------------------------------------------------------
# label files
# ---------------------------------------------------------------------------

def format_label_file(labels: Sequence[Label | str], scheme: str, comment: str | None = None) -> str:
    if scheme not in SCHEMES:
        raise LabelFormat(f"unknown scheme {scheme!r}")
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{len(labels)} {scheme}")
    out.extend(f"{i} {lab}" for i, lab in enumerate(labels))
    return "\n".join(out) + "\n"


def parse_label_file(text: str) -> tuple[str, list[Label]]:
    """Return ``(scheme, labels)`` where ``labels[i]`` belongs to node i."""
    lines = [s for s in (ln.strip() for ln in text.splitlines()) if s and not s.startswith("#")]
    if not lines:
        raise LabelFormat("label file has no header")
    head = lines[0].split()
    if len(head) != 2 or not head[0].isdigit():
        raise LabelFormat(f"bad header {lines[0]!r}; expected '<n> <scheme>'")
    n, scheme = int(head[0]), head[1]
    if scheme not in SCHEMES:
        raise LabelFormat(f"unknown scheme {scheme!r}")
    if len(lines) - 1 != n:
        raise LabelFormat(f"header says {n} labels, found {len(lines) - 1}")
    labels = []
    for expected_id, line in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != 2 or parts[0] != str(expected_id):
            raise LabelFormat(f"expected '{expected_id} <bits>', got {line!r}")
        labels.append(Label(parts[1]))
    if labels and len({len(lab) for lab in labels}) != 1:
        raise LabelFormat("labels in one file must share a length")
    return scheme, labels


def read_label_file(path: str | os.PathLike) -> tuple[str, list[Label]]:
    with open(path) as fh:
        return parse_label_file(fh.read())


def write_label_file(labels: Sequence[Label | str], scheme: str, path: str | os.PathLike,
                     comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_label_file(labels, scheme, comment))
