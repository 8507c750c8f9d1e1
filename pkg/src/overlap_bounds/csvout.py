"""Byte-deterministic CSV output."""
from __future__ import annotations

import io
import math
from typing import Iterable, Optional, Sequence

SIG_DIGITS = 9


def fmt(value: Optional[float]) -> str:
    """Format with 9 significant digits.

    Fixed notation for ``1e-4 <= |v| < 1e6`` (and zero), otherwise a lowercase
    ``e`` exponent. ``None`` becomes an empty cell.
    """
    if value is None:
        return ""
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0.0:
        return "0." + "0" * (SIG_DIGITS - 1)
    sci = f"{v:.{SIG_DIGITS - 1}e}"
    exponent = int(sci.split("e")[1])
    if -4 <= exponent < 6:
        return f"{v:.{SIG_DIGITS - 1 - exponent}f}"
    return sci


def render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row) + "\n")
    return buf.getvalue()


def parse_blocks(text: str):
    """Split CSV text into blocks separated by blank lines.

    Returns a list of ``(header, rows)`` with cells as strings.
    """
    blocks = []
    for chunk in text.strip("\n").split("\n\n"):
        lines = chunk.split("\n")
        blocks.append((lines[0].split(","), [line.split(",") for line in lines[1:]]))
    return blocks
