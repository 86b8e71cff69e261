"""Number formatting and text encoders shared by every serializer.

Machine formats (CSV, JSON) carry 17 significant digits so floats
round-trip bit-exactly; human tables use 9.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

MACHINE_DIGITS = 17
TABLE_DIGITS = 9


def fmt(x: Any, digits: int = MACHINE_DIGITS) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return f"{x:.{digits}g}"
    return str(x)


def _json_scalar(x: Any) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite float {x} cannot be written as JSON")
        return f"{x:.{MACHINE_DIGITS}g}"
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(f"cannot encode {type(x).__name__} as JSON")


def dumps_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit floats.

    The stdlib encoder always writes the shortest repr, so floats are
    formatted here. Key order follows the mapping.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json_scalar(str(k))}: {dumps_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_json_scalar(v) for v in obj) + "]"
        items = [pad + dumps_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return _json_scalar(obj)


def dumps_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def dumps_table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header)] + [[fmt(v, TABLE_DIGITS) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    out = []
    for j, row in enumerate(cells):
        out.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"
