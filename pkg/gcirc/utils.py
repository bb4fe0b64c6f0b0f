"""Utility functions for parsing and shaping numeric values."""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import MalformedInput

UNKNOWN_MARKERS = ("?", "null", "none", "")


def parse_complex(value: Any) -> complex:
    """
    Coerce a scalar into a Python complex.

    Accepts numbers, ``[re, im]`` pairs and strings such as ``"2.5-3.4i"``.
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise MalformedInput(f"Complex pair must have two entries: {value!r}")
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError) as e:
            raise MalformedInput(f"Invalid complex pair {value!r}: {e}")
    if isinstance(value, str):
        text = value.strip().replace(" ", "").replace("i", "j")
        try:
            return complex(text)
        except ValueError:
            raise MalformedInput(f"Invalid complex number: {value!r}")
    if isinstance(value, bool):
        raise MalformedInput(f"Booleans are not numbers: {value!r}")
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise MalformedInput(f"Invalid complex number: {value!r}")


def dump_complex(value: complex) -> List[float]:
    """Serialize a complex scalar as an ``[re, im]`` pair."""
    return [float(value.real), float(value.imag)]


def parse_values(text: str) -> List[complex]:
    """Parse a comma separated list such as ``"1,2,3+1i"``."""
    items = text.split(",")
    if not text.strip() or any(not item.strip() for item in items):
        raise MalformedInput(f"Empty entry in value list: {text!r}")
    return [parse_complex(item) for item in items]


def parse_optional_values(text: str) -> List[Optional[complex]]:
    """Like parse_values, but ``?`` or ``null`` marks an unknown entry."""
    values: List[Optional[complex]] = []
    for item in text.split(","):
        if item.strip().lower() in UNKNOWN_MARKERS:
            values.append(None)
        else:
            values.append(parse_complex(item))
    return values


def round_sig(value: float, digits: int = 10) -> float:
    """Round to a number of significant digits; -0.0 becomes 0.0."""
    if value == 0:
        return 0.0
    if not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}") + 0.0


def to_jsonable(obj: Any, digits: int = 10) -> Any:
    """Recursively convert numpy/complex values into rounded JSON values."""
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value, digits) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value, digits) for value in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_sig(obj.real, digits), round_sig(obj.imag, digits)]
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj), digits)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(payload: Any, digits: int = 10) -> str:
    """Deterministic JSON text for a payload."""
    return json.dumps(to_jsonable(payload, digits), indent=2, sort_keys=True)


def matrix_to_json(matrix: np.ndarray) -> Dict[str, Any]:
    """Encode a dense matrix as ``{"rows", "cols", "entries"}``, row-major."""
    rows, cols = matrix.shape
    entries = [dump_complex(complex(z)) for z in np.asarray(matrix).ravel()]
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_json(data: Dict[str, Any]) -> np.ndarray:
    """Decode the encoding produced by matrix_to_json."""
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = [parse_complex(z) for z in data["entries"]]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInput(f"Invalid matrix JSON: {e}")
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise MalformedInput(
            f"Matrix JSON has {len(entries)} entries for shape {rows}x{cols}"
        )
    return np.array(entries, dtype=complex).reshape(rows, cols)


def load_json_file(path: Path) -> Any:
    """Read a JSON document, mapping every failure to MalformedInput."""
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (IOError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedInput(f"Failed to read JSON from {path}: {e}")
