"""File formats: plain PBM bitmaps, contour/polygon/descriptor JSON, SVG, table cache."""

from __future__ import annotations

import json
import os
import struct
from fractions import Fraction as Q
from pathlib import Path

import numpy as np

from .errors import CacheRejected, InputFormatError
from .geometry import ApproxMetrics, DigitalContour, Polygon, trace_boundary
from .sequence import generate_sequence, sequence_size
from .shape import ShapeDescriptor
from .table import FareyTable, build_table

MAGIC = b"FTBL"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sBQQ")


# -- PBM ---------------------------------------------------------------------

def parse_pbm(text: str) -> np.ndarray:
    """Parse a plain (P1) PBM image into a bool array with rows as y."""
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n:
            if text[pos].isspace():
                pos += 1
            elif text[pos] == "#":
                while pos < n and text[pos] not in "\r\n":
                    pos += 1
            else:
                break

    def token():
        nonlocal pos
        skip()
        start = pos
        while pos < n and not text[pos].isspace() and text[pos] != "#":
            pos += 1
        return text[start:pos], start

    magic, at = token()
    if magic != "P1":
        raise InputFormatError(f"bad PBM magic {magic[:8]!r} at offset {at}, expected 'P1'")
    dims = []
    for what in ("width", "height"):
        tok, at = token()
        if not tok.isdigit() or int(tok) == 0:
            raise InputFormatError(f"bad PBM {what} {tok[:16]!r} at offset {at}")
        dims.append(int(tok))
    width, height = dims
    bits = []
    need = width * height
    while len(bits) < need:
        skip()
        if pos >= n:
            raise InputFormatError(f"PBM data ends at offset {pos} after {len(bits)} of {need} pixels")
        ch = text[pos]
        if ch not in "01":
            raise InputFormatError(f"bad PBM pixel {ch!r} at offset {pos}")
        bits.append(ch == "1")
        pos += 1
    return np.array(bits, dtype=bool).reshape(height, width)


def read_pbm(path) -> np.ndarray:
    return parse_pbm(Path(path).read_text(encoding="ascii", errors="replace"))


def format_pbm(bitmap) -> str:
    img = np.asarray(bitmap).astype(bool)
    h, w = img.shape
    rows = [" ".join("1" if v else "0" for v in row) for row in img]
    return f"P1\n{w} {h}\n" + "\n".join(rows) + "\n"


def write_pbm(path, bitmap) -> None:
    Path(path).write_text(format_pbm(bitmap), encoding="ascii")


# -- contours, polygons, descriptors -----------------------------------------

def contour_to_dict(contour: DigitalContour) -> dict:
    return {"closed": contour.closed, "points": [[p.x, p.y] for p in contour.points]}


def contour_from_dict(data) -> DigitalContour:
    try:
        closed = data["closed"]
        points = [(int(x), int(y)) for x, y in data["points"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad contour JSON: {exc}") from None
    if not isinstance(closed, bool):
        raise InputFormatError("bad contour JSON: 'closed' must be a boolean")
    return DigitalContour(tuple(points), closed)


def polygon_to_dict(polygon: Polygon, metrics: ApproxMetrics | None = None, **extra) -> dict:
    out = dict(extra)
    out["closed"] = polygon.closed
    out["vertices"] = [[v.x, v.y] for v in polygon.vertices]
    if polygon.indices is not None:
        out["indices"] = list(polygon.indices)
    if metrics is not None:
        out["metrics"] = {
            "vertex_count": metrics.vertex_count,
            "compression_ratio": str(metrics.compression_ratio),
            "max_deviation_sq": str(metrics.max_deviation_sq),
        }
    return out


def polygon_from_dict(data) -> Polygon:
    try:
        return Polygon(tuple((int(x), int(y)) for x, y in data["vertices"]),
                       bool(data["closed"]), data.get("indices"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad polygon JSON: {exc}") from None


def metrics_from_dict(data) -> ApproxMetrics:
    return ApproxMetrics(int(data["vertex_count"]), Q(data["compression_ratio"]),
                         Q(data["max_deviation_sq"]))


def descriptor_to_dict(desc: ShapeDescriptor) -> dict:
    return {"order": desc.order, "d_total": desc.d_total, "entries": list(desc.entries)}


def descriptor_from_dict(data) -> ShapeDescriptor:
    try:
        return ShapeDescriptor(int(data["order"]), int(data["d_total"]),
                               tuple(int(e) for e in data["entries"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad descriptor JSON: {exc}") from None


def load_contour_input(path) -> DigitalContour:
    """A contour from either a P1 bitmap (traced) or a contour JSON file."""
    text = Path(path).read_text(encoding="utf-8", errors="replace")
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"bad contour JSON at offset {exc.pos}: {exc.msg}") from None
        return contour_from_dict(data)
    return trace_boundary(parse_pbm(text))


def load_bitmap_or_contour(path):
    text = Path(path).read_text(encoding="utf-8", errors="replace")
    if text.lstrip().startswith("{"):
        return None, load_contour_input(path)
    bitmap = parse_pbm(text)
    return bitmap, trace_boundary(bitmap)


# -- SVG ---------------------------------------------------------------------

def render_svg(contour: DigitalContour, polygon: Polygon, scale: int = 4) -> str:
    xs = [p.x for p in contour.points]
    ys = [p.y for p in contour.points]
    x0, y0 = min(xs) - 1, min(ys) - 1
    w = (max(xs) - x0 + 2) * scale
    h = (max(ys) - y0 + 2) * scale

    def fmt(pts):
        return " ".join(f"{(p[0] - x0) * scale},{(p[1] - y0) * scale}" for p in pts)

    close = " Z" if polygon.closed else ""
    path = "M " + fmt(polygon.vertices[:1]) + " L " + fmt(polygon.vertices[1:]) + close
    contour_pts = list(contour.points) + (list(contour.points[:1]) if contour.closed else [])
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">\n'
        f'  <polyline points="{fmt(contour_pts)}" fill="none" stroke="#999999" '
        f'stroke-opacity="0.4" stroke-width="1"/>\n'
        f'  <path d="{path}" fill="none" stroke="#c0392b" stroke-width="2"/>\n'
        "</svg>\n"
    )


# -- table cache -------------------------------------------------------------

def encode_table(table: FareyTable) -> bytes:
    grid = np.ascontiguousarray(table.ranks[:, 1:], dtype="<u4")
    return _HEADER.pack(MAGIC, CACHE_VERSION, table.order, table.f_max) + grid.tobytes()


def decode_table(blob: bytes) -> FareyTable:
    if len(blob) < _HEADER.size:
        raise CacheRejected("table cache truncated inside the header")
    magic, version, order, f_max = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CacheRejected(f"bad table cache magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheRejected(f"unsupported table cache version {version}")
    if order < 1 or order > 20000:
        raise CacheRejected(f"implausible order {order}")
    expected = _HEADER.size + 4 * (order + 1) * order
    if len(blob) != expected:
        raise CacheRejected(f"table cache has {len(blob)} bytes, expected {expected}")
    if f_max != sequence_size(order):
        raise CacheRejected(f"f_max {f_max} inconsistent with order {order}")
    grid = np.frombuffer(blob, dtype="<u4", offset=_HEADER.size).reshape(order + 1, order)
    if (not np.all(grid[0] == 1) or not np.all(np.diagonal(grid, offset=-1) == f_max)
            or grid.max() > f_max):
        raise CacheRejected("table cache grid fails consistency checks")
    ranks = np.zeros((order + 1, order + 1), dtype=np.uint32)
    ranks[:, 1:] = grid
    ranks.setflags(write=False)
    return FareyTable(order, f_max, ranks)


def save_table(path, table: FareyTable) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(encode_table(table))
    os.replace(tmp, path)


def load_table(path) -> FareyTable:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise CacheRejected(f"cannot read table cache: {exc}") from None
    return decode_table(blob)


def cache_dir() -> Path:
    env = os.environ.get("FAREYRANK_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "fareyrank"


def cached_table(order: int, use_cache: bool = True, directory=None, log=None):
    """(sequence, table) for ``order``, reading or refreshing the on-disk cache."""
    seq = generate_sequence(order)
    if not use_cache:
        return seq, build_table(seq)
    directory = Path(directory) if directory is not None else cache_dir()
    path = directory / f"ftbl-{order}.bin"
    if path.exists():
        try:
            return seq, load_table(path)
        except CacheRejected as exc:
            if log:
                log(f"cache rejected ({exc}); rebuilding")
    table = build_table(seq)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        save_table(path, table)
    except OSError:
        pass
    return seq, table
