"""Deterministic report serialization and exit-code discipline.

Reports serialize with a stable key order (construction order) and fixed
float formatting (17 significant digits), so identical inputs produce
byte-identical output across runs and platforms.  Exact rationals appear as
"p/q" strings; non-finite doubles as the strings "Infinity", "-Infinity",
"NaN" (JSON has no literals for them).

Exit codes: 0 affirmative verdict or successful computation; 1 negative
verdict (a well-formed "no"); 2 input/usage error; 3 numeric error.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def dumps_report(value: Any, indent: int = 0) -> str:
    """Serialize a report tree deterministically (see module docstring)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {dumps_report(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [f"{inner}{dumps_report(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, Fraction):
        return json.dumps(str(value))
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise TypeError(f"unserializable report value of type {type(value).__name__}")


def render_report(report: dict) -> str:
    return dumps_report(report) + "\n"


def exit_code_of(report: dict) -> int:
    return int(report.get("diagnostics", {}).get("exitCode", EXIT_OK))
