"""Text and raster serialisation of sets, staircases and fields.

Floats are written with 17 significant digits so that every value
round-trips exactly. Writes go to a temporary file in the target directory
and are renamed into place.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .fields import BoolField, GridSpec, ScalarField
from .msets import PlateauHistogram, StepFunction
from .templates import DyadicIntervalSet

FORMATS = ("csv", "json", "pgm", "png")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def write_atomic(path, payload: bytes | str) -> Path:
    path = Path(path)
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def infer_format(path, explicit: str | None = None) -> str:
    if explicit:
        if explicit not in FORMATS:
            raise ValueError(f"unknown format {explicit!r}")
        return explicit
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else "csv"


def intervals_csv(s: DyadicIntervalSet) -> str:
    lines = ["depth,index"]
    lines += [f"{s.depth},{int(j)}" for j in s.members]
    return "\n".join(lines) + "\n"


def staircase_csv(f: StepFunction) -> str:
    lines = ["t,phi"]
    lines += [f"{fmt(t)},{fmt(v)}" for t, v in zip(f.breakpoints(), f.values)]
    return "\n".join(lines) + "\n"


def plateaus_csv(h: PlateauHistogram) -> str:
    lines = ["length,count"]
    lines += [f"{l},{h.counts[l]}" for l in sorted(h.counts)]
    return "\n".join(lines) + "\n"


def loglog_csv(points: np.ndarray) -> str:
    lines = ["log_length,log_count_plus_one"]
    lines += [f"{fmt(a)},{fmt(b)}" for a, b in points]
    return "\n".join(lines) + "\n"


def field_csv(f: ScalarField | BoolField) -> str:
    re = f.grid.re_centers()
    im = f.grid.im_centers()
    values = f.data.astype(np.float64)
    lines = ["re,im,value"]
    for r in range(f.grid.rows):
        y = fmt(im[r])
        lines += [f"{fmt(re[c])},{y},{fmt(values[r, c])}" for c in range(f.grid.cols)]
    return "\n".join(lines) + "\n"


def voxel_csv(voxels: np.ndarray) -> str:
    lines = ["re_c0,re_c1,im_c1"]
    lines += [f"{fmt(a)},{fmt(b)},{fmt(c)}" for a, b, c in voxels]
    return "\n".join(lines) + "\n"


def grid_dict(g: GridSpec) -> dict:
    return {"re_min": g.re_min, "re_max": g.re_max, "im_min": g.im_min,
            "im_max": g.im_max, "cols": g.cols, "rows": g.rows}


def field_json(f: ScalarField | BoolField) -> str:
    data = f.data.tolist()
    return json.dumps({"grid": grid_dict(f.grid), "data": data}) + "\n"


def to_bytes(data: np.ndarray, counts: bool = False) -> np.ndarray:
    """Byte per cell: booleans to {0, 255}, values in [0, 1] to round-half-up(v * 255).

    With ``counts`` the values are non-negative integers written as-is,
    saturating at 255.
    """
    if data.dtype == np.bool_:
        return np.where(data, 255, 0).astype(np.uint8)
    if counts:
        return np.clip(data, 0, 255).astype(np.uint8)
    return np.floor(np.clip(data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def pgm_bytes(data: np.ndarray, counts: bool = False) -> bytes:
    pixels = to_bytes(data, counts)
    rows, cols = pixels.shape
    return f"P5\n{cols} {rows}\n255\n".encode("ascii") + pixels.tobytes()


def png_bytes(data: np.ndarray, counts: bool = False) -> bytes:
    import io

    from PIL import Image

    buf = io.BytesIO()
    Image.fromarray(to_bytes(data, counts)).save(buf, format="PNG")
    return buf.getvalue()


def read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    header = raw.split(b"\n", 3)
    if header[0] != b"P5":
        raise ValueError("not a binary PGM")
    cols, rows = map(int, header[1].split())
    return np.frombuffer(header[3], dtype=np.uint8).reshape(rows, cols)


def field_payload(f: ScalarField | BoolField, fmt_name: str, counts: bool = False) -> bytes | str:
    if fmt_name == "csv":
        return field_csv(f)
    if fmt_name == "json":
        return field_json(f)
    if fmt_name == "pgm":
        return pgm_bytes(f.data, counts)
    if fmt_name == "png":
        return png_bytes(f.data, counts)
    raise ValueError(f"unknown format {fmt_name!r}")
