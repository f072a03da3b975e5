"""Deterministic CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__

DEFAULT_PRECISION = 9


def format_float(x, precision: int = DEFAULT_PRECISION) -> str:
    """``%.{precision}g`` with ``-0`` folded into ``0``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{precision}g}"
    if float(s) == 0.0:
        return "0"
    return s


def format_value(v, precision: int = DEFAULT_PRECISION) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return format_float(v, precision)
    return str(v)


def provenance(command: str, params: Mapping[str, object], precision: int = DEFAULT_PRECISION) -> str:
    items = " ".join(f"{k}={format_value(v, precision)}" for k, v in params.items())
    return f"# collective-entanglement {__version__} {command}" + (f" {items}" if items else "")


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], header: str | None = None,
             precision: int = DEFAULT_PRECISION) -> str:
    buf = io.StringIO()
    if header:
        buf.write(header + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v, precision) for v in row])
    return buf.getvalue()


def _jsonable(obj, precision):
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v, precision) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return format_float(x)
        return float(format_float(x, precision))
    return obj


def json_text(payload, precision: int = DEFAULT_PRECISION) -> str:
    return json.dumps(_jsonable(payload, precision), indent=2) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
