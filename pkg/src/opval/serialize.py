"""JSON schemas and a canonical dumper.

StepFunction documents look like::

    {"dim": d, "depth": D, "support": {"lo": a, "hi": b}, "cells": [cell...]}

where each cell is a row-major d x d array of [re, im] pairs.  Coefficient
fields carry their grid alongside the entries so they reconstruct exactly::

    {"dim": d, "depth": D, "support": {...},
     "entries": [{"level": n, "offset": j, "matrix": [...]}, ...],
     "scaling": [cell...] | null}

``canonical_dumps`` renders every float with 17 significant digits and
sorts object keys, so identical data always produces identical bytes.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .dyadic import DyadicInterval, StepFunction
from .errors import ParseError
from .wavelets import CoefficientField

__all__ = [
    "step_to_dict",
    "step_from_dict",
    "field_to_dict",
    "field_from_dict",
    "canonical_dumps",
]


def _matrix_to_pairs(matrix: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def _matrix_from_pairs(obj, dim, where):
    if not isinstance(obj, list) or len(obj) != dim:
        raise ParseError(f"expected {dim} rows", where)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"expected {dim} columns", f"{where}[{i}]")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(v, (int, float)) and math.isfinite(v) for v in pair)
            ):
                raise ParseError("expected a finite [re, im] pair", f"{where}[{i}][{j}]")
            out[i, j] = complex(pair[0], pair[1])
    return out


def _require_int(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError("missing field", f"{where}.{key}" if where else key)
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ParseError("expected an integer", f"{where}.{key}" if where else key)
    return val


def step_to_dict(f: StepFunction) -> dict:
    return {
        "dim": f.dim,
        "depth": f.depth,
        "support": {"lo": f.lo, "hi": f.hi},
        "cells": [_matrix_to_pairs(c) for c in f.cells],
    }


def step_from_dict(obj: Any) -> StepFunction:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", "")
    dim = _require_int(obj, "dim", "")
    depth = _require_int(obj, "depth", "")
    support = obj.get("support")
    if not isinstance(support, dict):
        raise ParseError("missing field", "support")
    lo = _require_int(support, "lo", "support")
    hi = _require_int(support, "hi", "support")
    if dim < 1:
        raise ParseError("dim must be >= 1", "dim")
    if depth < 0:
        raise ParseError("depth must be >= 0", "depth")
    if hi <= lo:
        raise ParseError("support window must be nonempty", "support")
    cells_obj = obj.get("cells")
    expected = (hi - lo) * (1 << depth)
    if not isinstance(cells_obj, list) or len(cells_obj) != expected:
        raise ParseError(f"expected {expected} cells", "cells")
    cells = np.stack(
        [_matrix_from_pairs(c, dim, f"cells[{k}]") for k, c in enumerate(cells_obj)]
    )
    return StepFunction(dim, depth, lo, hi, cells)


def field_to_dict(c: CoefficientField) -> dict:
    entries = [
        {"level": i.level, "offset": i.offset, "matrix": _matrix_to_pairs(m)}
        for i, m in sorted(c.entries.items())
    ]
    return {
        "dim": c.dim,
        "depth": c.depth,
        "support": {"lo": c.lo, "hi": c.hi},
        "level_min": c.level_min,
        "level_max": c.level_max,
        "entries": entries,
        "scaling": None if c.scaling is None else [_matrix_to_pairs(m) for m in c.scaling],
    }


def field_from_dict(obj: Any) -> CoefficientField:
    if not isinstance(obj, dict):
        raise ParseError("expected an object", "")
    dim = _require_int(obj, "dim", "")
    depth = _require_int(obj, "depth", "")
    support = obj.get("support")
    if not isinstance(support, dict):
        raise ParseError("missing field", "support")
    lo = _require_int(support, "lo", "support")
    hi = _require_int(support, "hi", "support")
    level_min = _require_int(obj, "level_min", "")
    level_max = _require_int(obj, "level_max", "")
    entries_obj = obj.get("entries")
    if not isinstance(entries_obj, list):
        raise ParseError("missing field", "entries")
    entries = {}
    for k, ent in enumerate(entries_obj):
        level = _require_int(ent, "level", f"entries[{k}]")
        offset = _require_int(ent, "offset", f"entries[{k}]")
        matrix = _matrix_from_pairs(ent.get("matrix"), dim, f"entries[{k}].matrix")
        entries[DyadicInterval(level, offset)] = matrix
    scaling_obj = obj.get("scaling")
    scaling = None
    if scaling_obj is not None:
        if not isinstance(scaling_obj, list) or len(scaling_obj) != hi - lo:
            raise ParseError(f"expected {hi - lo} unit-cell matrices", "scaling")
        scaling = np.stack(
            [_matrix_from_pairs(m, dim, f"scaling[{k}]") for k, m in enumerate(scaling_obj)]
        )
    return CoefficientField(dim, depth, lo, hi, level_min, level_max, entries, scaling)


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ParseError("non-finite float in canonical output")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def canonical_dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        out = []
        for ch in obj:
            if ch == "\\":
                out.append("\\\\")
            elif ch == '"':
                out.append('\\"')
            elif ord(ch) < 0x20:
                out.append({"\n": "\\n", "\r": "\\r", "\t": "\\t"}.get(ch, f"\\u{ord(ch):04x}"))
            else:
                out.append(ch)
        return '"' + "".join(out) + '"'
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(canonical_dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        body = ", ".join(f"{canonical_dumps(str(k))}: {canonical_dumps(v)}" for k, v in items)
        return "{" + body + "}"
    raise ParseError(f"cannot serialize {type(obj).__name__}")
