"""JSON/CSV/text rendering of reports.

JSON is the source of truth. Non-finite floats are written as the strings
``"+inf"``, ``"-inf"`` and ``"nan"`` so the output stays strict JSON.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math

import numpy as np


def to_jsonable(obj):
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj if obj is None or isinstance(obj, str) else str(obj)


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def fmt(value):
    """Human-facing number formatting: 12 significant digits."""
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def flatten(obj, prefix=""):
    """``(path, value)`` rows for every scalar leaf of a JSON-able tree."""
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows.extend(flatten(obj[k], f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows.extend(flatten(v, f"{prefix}[{i}]"))
    else:
        rows.append((prefix, obj))
    return rows


def to_csv(obj):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "value"])
    for path, value in flatten(to_jsonable(obj)):
        writer.writerow([path, "" if value is None else (repr(value) if isinstance(value, float) else value)])
    return buf.getvalue()
