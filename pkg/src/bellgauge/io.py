"""State/settings JSON and the record CSV.

State file: ``{"matrix": [[[re, im], ...4], ...4], "label": "..."}``, row-major
in the |00>, |01>, |10>, |11> basis. A bare number is accepted for a real entry.
"""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from .bell import ChshSettings
from .errors import ParseError
from .explorer import StateRecord

CSV_HEADER = (
    "label", "p11", "p22", "p33", "p44", "c",
    "s12", "s_norm", "concurrence", "chsh_max",
    "satisfies_santos", "violates_chsh",
)


def fmt(x: float) -> str:
    """Nine significant digits."""
    return f"{x:.9g}"


def rounded(x: float) -> float:
    return float(fmt(x))


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _entry(value) -> complex:
    if isinstance(value, bool):
        raise ParseError("boolean is not a matrix entry")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ParseError(f"matrix entry {value!r} is not [re, im]")


def parse_state(text: str) -> tuple[np.ndarray, str]:
    """Parse the JSON state format into ``(matrix, label)``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "matrix" not in data:
        raise ParseError('state file must be an object with a "matrix" key')
    rows = data["matrix"]
    if not isinstance(rows, list) or len(rows) != 4:
        raise ParseError("matrix must have 4 rows")
    mat = np.empty((4, 4), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise ParseError(f"row {i} must have 4 entries")
        for j, value in enumerate(row):
            mat[i, j] = _entry(value)
    if not np.all(np.isfinite(mat)):
        raise ParseError("matrix has non-finite entries")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ParseError("label must be a string")
    return mat, label


def state_to_json(mat, label: str | None = None) -> str:
    m = np.asarray(mat, dtype=np.complex128)
    data: dict = {"matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m]}
    if label is not None:
        data["label"] = label
    return json.dumps(data, indent=2) + "\n"


def parse_settings(text: str) -> ChshSettings:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    keys = ("a", "a_prime", "b", "b_prime")
    if not isinstance(data, dict) or any(k not in data for k in keys):
        raise ParseError(f"settings file needs keys {keys}")
    for k in keys:
        v = data[k]
        if not (
            isinstance(v, list)
            and len(v) == 3
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
        ):
            raise ParseError(f"{k} must be a list of 3 numbers")
        if not all(math.isfinite(x) for x in v):
            raise ParseError(f"{k} has non-finite entries")
    return ChshSettings.from_dict(data)


def settings_to_json(s: ChshSettings) -> str:
    return json.dumps(s.to_dict(), indent=2) + "\n"


def record_row(rec: StateRecord) -> list[str]:
    p = rec.params
    pcols = ["", "", "", "", ""] if p is None else [fmt(x) for x in (p.p11, p.p22, p.p33, p.p44, p.c)]
    return [
        rec.label,
        *pcols,
        fmt(rec.s12),
        fmt(rec.s_norm),
        fmt(rec.concurrence),
        fmt(rec.chsh_max),
        fmt_bool(rec.satisfies_santos),
        fmt_bool(rec.violates_chsh),
    ]


def write_records_csv(records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(record_row(rec))
