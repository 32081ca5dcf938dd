#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# utility.py - Helper functions: atomic writes, number formatting, argument parsing

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import Iterable, Sequence


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{x:.17g}"


def complex_pair(z: complex) -> list[float]:
    """Serialize a complex number as [re, im]."""
    z = complex(z)
    return [z.real, z.imag]


def atomic_write_text(path: str, text: str) -> None:
    """Write text to a temp file beside path, then rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_json(path: str, obj: object, compact: bool = False) -> None:
    """Compact separators for tables, two-space indentation for single documents."""
    if compact:
        text = json.dumps(obj, separators=(",", ":"))
    else:
        text = json.dumps(obj, indent=2)
    atomic_write_text(path, text + "\n")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """CSV with floats at full precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def parse_complex(text: str) -> complex:
    """Accept 1+2j, 1+2i, 2i, i, -0.5-i."""
    s = text.strip().replace(" ", "").replace("i", "j")
    if s.endswith("j") and (len(s) == 1 or s[-2] in "+-"):
        s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"not a complex number: '{text}'") from exc


def parse_points(text: str) -> list[complex]:
    """Comma-separated complex numbers."""
    return [parse_complex(p) for p in text.split(",") if p.strip()]


def parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ValueError(f"not a comma-separated list of numbers: '{text}'") from exc


def parse_grid(text: str) -> tuple[float, float, int]:
    """lo:hi:n -> (lo, hi, n) with lo < hi and n >= 2."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like lo:hi:n, got '{text}'")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValueError(f"grid must look like lo:hi:n, got '{text}'") from exc
    if not lo < hi or n < 2:
        raise ValueError(f"grid needs lo < hi and n >= 2, got '{text}'")
    return lo, hi, n
