"""JSON helpers: the shared complex-matrix encoding and deterministic dumps.

Complex matrices travel as nested row-major lists of ``[re, im]`` pairs.
``dumps`` emits every float with 17 significant digits so that output is
byte-stable across runs and parses back to the identical double.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ShapeMismatch


def matrix_to_json(matrix: np.ndarray) -> list:
    """Encode a 2-D complex matrix as nested [re, im] pairs, row-major."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    """Decode the nested [re, im] encoding back into a complex ndarray."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError(
            "matrix JSON must be a list of rows of [re, im] pairs, "
            f"got array of shape {arr.shape}"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def _format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        # strict JSON has no literal for these; callers map them to null
        return "null"
    if value == int(value) and abs(value) < 1e16:
        # keep small integral floats compact and unambiguous
        return f"{value:.1f}"
    return format(value, ".17g")


def dumps(obj, indent: int | None = None) -> str:
    """Serialize to JSON with deterministic 17-significant-digit floats.

    Supports the subset of JSON the package emits: dict, list/tuple, str,
    bool, None, int, float, plus numpy scalars and arrays (flattened to
    lists). Dict insertion order is preserved, so callers control key order.
    """
    pieces: list[str] = []
    _write(obj, pieces, indent, 0)
    return "".join(pieces)


def _write(obj, out: list[str], indent: int | None, level: int) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, np.ndarray):
        _write(obj.tolist(), out, indent, level)
    elif isinstance(obj, complex):
        _write([obj.real, obj.imag], out, indent, level)
    elif isinstance(obj, (list, tuple)):
        _write_seq(list(obj), out, indent, level)
    elif isinstance(obj, dict):
        _write_map(obj, out, indent, level)
    else:
        raise TypeError(f"cannot serialize object of type {type(obj)!r}")


def _write_seq(items: list, out: list[str], indent: int | None, level: int) -> None:
    if not items:
        out.append("[]")
        return
    sep, pad, end = _layout(indent, level)
    out.append("[" + pad)
    for i, item in enumerate(items):
        if i:
            out.append("," + pad)
        _write(item, out, indent, level + 1)
    out.append(end + "]")


def _write_map(mapping: dict, out: list[str], indent: int | None, level: int) -> None:
    if not mapping:
        out.append("{}")
        return
    sep, pad, end = _layout(indent, level)
    out.append("{" + pad)
    for i, (key, value) in enumerate(mapping.items()):
        if i:
            out.append("," + pad)
        if not isinstance(key, str):
            raise TypeError(f"JSON object keys must be strings, got {key!r}")
        out.append(_escape(key) + ":" + sep)
        _write(value, out, indent, level + 1)
    out.append(end + "}")


def _layout(indent: int | None, level: int) -> tuple[str, str, str]:
    if indent is None:
        return "", "", ""
    inner = "\n" + " " * (indent * (level + 1))
    outer = "\n" + " " * (indent * level)
    return " ", inner, outer


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str) -> str:
    chunks = ['"']
    for ch in text:
        if ch in _ESCAPES:
            chunks.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            chunks.append(f"\\u{ord(ch):04x}")
        else:
            chunks.append(ch)
    chunks.append('"')
    return "".join(chunks)
