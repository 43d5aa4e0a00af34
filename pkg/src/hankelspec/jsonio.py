"""JSON and CSV encodings shared by the CLI and the tests."""

from __future__ import annotations

import csv
import io
import json
import sys
from numbers import Number

import numpy as np

from .errors import SchemaError


def encode_complex(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def decode_complex(obj) -> complex:
    """Accept ``{"re": x, "im": y}``, ``[x, y]`` or a bare real number."""
    if isinstance(obj, dict):
        try:
            return complex(float(obj["re"]), float(obj.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad complex number {obj!r}") from exc
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, Number) and not isinstance(obj, bool):
        return complex(obj)
    raise SchemaError(f"bad complex number {obj!r}")


def encode_coefficients(coeffs, **extra) -> dict:
    return {"coefficients": [encode_complex(c) for c in np.asarray(coeffs).ravel()], **extra}


def decode_coefficients(obj) -> np.ndarray:
    """Coefficients from ``{"coefficients": [...]}`` or a bare list."""
    items = obj.get("coefficients") if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise SchemaError('expected {"coefficients": [...]} or a list of complex numbers')
    return np.array([decode_complex(c) for c in items], dtype=complex)


def read_json(path: str):
    """Parse JSON from ``path``, or from stdin when ``path`` is ``-``."""
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default)


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def write_text(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def format_float(x: float) -> str:
    return "%.17g" % x


def csv_text(header: list[str], rows) -> str:
    """CSV with a header row, '.' decimals, '\\n' line endings and 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()
