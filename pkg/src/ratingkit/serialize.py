"""Deterministic JSON writing for model artifacts and reports.

Floats are rendered with 17 significant digits (lossless for IEEE
doubles) and object keys are emitted sorted, so identical inputs always
produce byte-identical files.
"""

from __future__ import annotations

import math


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite float not serializable: {x}")
    s = f"{x:.17g}"
    # keep a decimal marker so the value reads back as a float
    if "e" not in s and "E" not in s and "." not in s:
        s += ".0"
    return s


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return f'"{_escape(obj)}"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"non-string key: {key!r}")
            items.append(f'{pad}"{_escape(key)}": {_encode(obj[key], indent, level + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(obj, (list, tuple)):
        if not len(obj):
            return "[]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    # numpy scalars and similar
    if hasattr(obj, "item"):
        return _encode(obj.item(), indent, level)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def dumps(obj, indent: int = 2) -> str:
    """Serialize to deterministic JSON text (trailing newline included)."""
    return _encode(obj, indent, 0) + "\n"


def dump(obj, path, indent: int = 2):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj, indent))
