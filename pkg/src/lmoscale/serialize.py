"""Deterministic output formats: versioned CSV and JSON writers.

Floats are serialized in scientific notation with 17 significant digits,
which round-trips 64-bit values exactly; identical inputs therefore
produce byte-identical files.  Every file carries a schema version string
in its header (a ``# schema=...`` comment line for CSV, a ``"schema"``
field for JSON).
"""

from __future__ import annotations

import json
import math

from .errors import DomainError

__all__ = ["fmt_float", "dumps_json", "write_csv", "read_csv", "SCHEMA_PREFIX"]

SCHEMA_PREFIX = "lmoscale"


def fmt_float(x: float) -> str:
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)  # inf / -inf / nan; json cannot carry these anyway
    return f"{x:.16e}"


def _json_fragments(obj, out: list[str]) -> None:
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise DomainError(f"cannot serialize non-finite float {obj!r} to JSON")
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(obj):
            if not isinstance(key, str):
                raise DomainError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _json_fragments(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _json_fragments(item, out)
        out.append("]")
    else:
        raise DomainError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps_json(obj) -> str:
    """Serialize with full-precision floats; insertion order is preserved."""
    out: list[str] = []
    _json_fragments(obj, out)
    out.append("\n")
    return "".join(out)


def write_csv(schema: str, header: list[str], rows, meta: dict | None = None) -> str:
    """Render a versioned CSV document as a string.

    The first line is ``# schema=... [key=value ...]``; floats are written
    at full precision, other cells via str().
    """
    parts = [f"# schema={SCHEMA_PREFIX}/{schema}"]
    for key, value in (meta or {}).items():
        parts.append(f"{key}={fmt_float(value) if isinstance(value, float) else value}")
    lines = [" ".join(parts), ",".join(header)]
    for row in rows:
        cells = [fmt_float(c) if isinstance(c, float) else str(c) for c in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> tuple[str, dict, list[str], list[list[str]]]:
    """Parse a document produced by ``write_csv``.

    Returns (schema, meta, header, rows-as-strings); numeric conversion is
    the caller's job since the schema fixes the column types.
    """
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# schema="):
        raise DomainError("missing schema header line")
    head = lines[0][2:].split()
    schema = head[0].split("=", 1)[1]
    meta = dict(part.split("=", 1) for part in head[1:])
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    return schema, meta, header, rows
