"""Deterministic JSON/CSV artifact writers.

Floats are written with 17 significant digits so that a value read back is
bit-identical; NaN and infinities become ``null``. Every artifact carries a
``meta`` block (tool version, configuration hash, metric convention).
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .errors import IoFailure


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _plain(obj):
    """Convert numpy scalars/arrays, tuples and dataclass-like values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(str(obj))


def dumps(obj, indent: int = 2) -> str:
    return _emit(_plain(obj), indent, 0) + "\n"


def config_hash(config: dict) -> str:
    blob = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def meta_block(config: dict, convention: str = "bures") -> dict:
    return {"tool": "sepgeom", "version": __version__, "config_hash": config_hash(config),
            "convention": convention}


def meta_comment(meta: dict) -> str:
    return f"sepgeom {meta['version']} config={meta['config_hash']} convention={meta['convention']}"


def write_json(path, payload: dict, meta: dict) -> Path:
    path = Path(path)
    try:
        path.write_text(dumps({"meta": meta, **payload}))
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def write_csv(path, header, rows, meta: dict) -> Path:
    """CSV with a leading ``# meta`` comment line; floats at 17 digits."""
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(f"# {meta_comment(meta)}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float rows of a CSV written by :func:`write_csv`."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])
