"""Row formatting for json-lines and csv output.

Rationals are written as ``"p/q"`` strings, reals with 17 significant
digits, so every value survives a text round trip unchanged.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import IO, Any, Iterable, Mapping

import numpy as np

__all__ = ["format_value", "emit_report", "parse_csv", "parse_field"]

FORMATS = ("jsonl", "csv")


def _real(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def format_value(value: Any) -> str:
    """Text form of one field, shared by both formats."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return _real(float(value))
    if value is None:
        return ""
    return str(value)


def _json_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        text = _real(float(value))
        return text if math.isfinite(float(value)) else json.dumps(text)
    if value is None:
        return "null"
    return json.dumps(format_value(value))


def _schema(rows: list[Mapping[str, Any]]) -> list[str]:
    keys = sorted(rows[0]) if rows else []
    for row in rows:
        if sorted(row) != keys:
            raise ValueError("rows do not share a schema")
    return keys


def emit_report(rows: Iterable[Mapping[str, Any]], fmt: str, stream: IO[str], header: list[str] | None = None) -> None:
    """Write ``rows`` to ``stream``; keys are sorted in both formats.

    ``header`` gives the csv columns when there are no rows.
    """
    rows = list(rows)
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    keys = _schema(rows) or sorted(header or [])
    if fmt == "jsonl":
        for row in rows:
            body = ", ".join(f"{json.dumps(k)}: {_json_value(row[k])}" for k in keys)
            stream.write("{" + body + "}\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(keys)
    for row in rows:
        writer.writerow([format_value(row[k]) for k in keys])


def parse_field(text: str) -> Any:
    """Inverse of ``format_value`` for numeric fields; other text is returned as is."""
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        try:
            return Fraction(text)
        except ValueError:
            return text
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str) -> list[dict[str, Any]]:
    reader = csv.DictReader(io.StringIO(text))
    return [{k: parse_field(v) for k, v in row.items()} for row in reader]
