"""Deterministic artifact writers.

Every float is rendered with 17 significant digits so values round-trip
exactly and two runs with identical configs produce byte-identical files.
No timestamps, no environment echoes, keys always sorted or schema-ordered.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .grids import PeriodicGrid, WaveField

__all__ = [
    "format_value",
    "dumps_json",
    "write_json",
    "write_csv",
    "write_field_dump",
    "read_field_dump",
]


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite value {value!r} in an artifact")
        return f"{float(value):.17g}"
    return str(value)


def _json_render(obj, indent, level):
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_value(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [_json_render(x, indent, level + 1) for x in obj]
        if not items:
            return "[]"
        return "[\n" + ",\n".join(pad_in + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        items = [
            f"{json.dumps(str(k))}: {_json_render(v, indent, level + 1)}"
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        ]
        if not items:
            return "{}"
        return "{\n" + ",\n".join(pad_in + it for it in items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_json(obj, indent: int = 2) -> str:
    return _json_render(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_json(obj))


def write_csv(path, header, rows) -> None:
    """Rows of mixed ints/floats/strings under a fixed header."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")


def write_field_dump(field: WaveField, bin_path, meta_path) -> None:
    """Little-endian complex64 samples (C order) plus a JSON grid sidecar."""
    field.values.astype("<c8").tofile(bin_path)
    write_json(
        meta_path,
        {
            "format": "wave-field",
            "dtype": "complex64-le",
            "order": "C",
            "dim": field.grid.dim,
            "points_per_dim": field.grid.points_per_dim,
            "box_length": field.grid.box_length,
        },
    )


def read_field_dump(bin_path, meta_path) -> WaveField:
    with open(meta_path) as fh:
        meta = json.load(fh)
    grid = PeriodicGrid(
        dim=meta["dim"], points_per_dim=meta["points_per_dim"], box_length=meta["box_length"]
    )
    values = np.fromfile(bin_path, dtype="<c8").astype(complex).reshape(grid.shape)
    # complex64 storage rounds the norm by ~1e-8; restore the invariant
    return WaveField.normalized(grid, values)


def ensure_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path
