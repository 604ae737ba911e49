"""CSV / JSON emitters and the run manifest.

Numbers are written in lowercase scientific notation with 12 significant
digits so that re-reading and re-writing a file reproduces it byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .density import FieldGrid, FieldKind


class OutputError(OSError):
    """An output file or directory could not be written."""


def fmt(value: float | None) -> str:
    if value is None:
        return ""
    # + 0.0 folds negative zero into zero.
    return f"{float(value) + 0.0:.11e}"


def _write_bytes(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[float | None]]) -> Path:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    _write_bytes(Path(path), ("\n".join(lines) + "\n").encode("ascii"))
    return Path(path)


def read_rows(path: Path) -> tuple[list[str], list[list[float | None]]]:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = [[float(v) if v else None for v in line.split(",")] for line in lines[1:]]
    return header, rows


def field_columns(field: FieldGrid) -> list[str]:
    if field.kind is FieldKind.SCALAR:
        return ["x_m", "y_m", field.label]
    return ["x_m", "y_m", f"{field.label}_x", f"{field.label}_y"]


def field_rows(field: FieldGrid):
    xs, ys = field.axes()
    vals = field.values
    defined = field.defined
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            if defined is not None and not defined[iy, ix]:
                comps = [None] * (1 if vals.ndim == 2 else 2)
            elif vals.ndim == 2:
                comps = [vals[iy, ix]]
            else:
                comps = [vals[iy, ix, 0], vals[iy, ix, 1]]
            yield [x, y, *comps]


def write_field_csv(path: Path, field: FieldGrid) -> Path:
    """Row-major (y slow, x fast); undefined velocity samples are empty fields."""
    return write_rows(path, field_columns(field), field_rows(field))


def write_json(path: Path, payload) -> Path:
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    _write_bytes(Path(path), text.encode("utf-8"))
    return Path(path)


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: Path, payload: dict, files: Sequence[Path]) -> Path:
    """Record digests of ``files`` and write ``manifest.json`` last."""
    out_dir = Path(out_dir)
    entries = []
    for f in files:
        f = Path(f)
        entries.append({"file": f.name, "bytes": f.stat().st_size, "sha256": sha256_file(f)})
    doc = dict(payload)
    doc["outputs"] = entries
    return write_json(out_dir / "manifest.json", doc)


def verify_manifest(path: Path) -> list[str]:
    """Names of outputs whose digest no longer matches; empty when all verify."""
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    bad = []
    for entry in doc["outputs"]:
        f = path.parent / entry["file"]
        if not f.exists() or sha256_file(f) != entry["sha256"]:
            bad.append(entry["file"])
    return bad


def jsonable(obj):
    """Convert numpy scalars and arrays for json.dumps."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
