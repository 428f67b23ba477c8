"""Digital curves on the integer grid: tracing, collinearity, polygonal approximation.

Coordinates are ``(x, y)`` with x the column and y the row of the bitmap.
Edge directions come from a DirectionTable, so the approximation loop
itself needs only subtraction, table reads and comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import DegenerateObject, InvalidArgument, NoObject
from .table import DirectionTable, cyclic_distance, direction_index


class GridPoint(NamedTuple):
    x: int
    y: int


def _adjacent(a, b) -> bool:
    return a != b and abs(a[0] - b[0]) <= 1 and abs(a[1] - b[1]) <= 1


@dataclass(frozen=True)
class DigitalContour:
    """Ordered 8-connected pixel chain; closed contours also join last to first."""

    points: tuple
    closed: bool = True

    def __post_init__(self):
        pts = tuple(GridPoint(int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        need = 3 if self.closed else 2
        if len(pts) < need:
            raise DegenerateObject(f"{'closed' if self.closed else 'open'} contour needs "
                                   f"at least {need} points, got {len(pts)}")
        for i in range(len(pts) - 1):
            if not _adjacent(pts[i], pts[i + 1]):
                raise InvalidArgument(f"points {i} and {i + 1} are not 8-connected")
        if self.closed and not _adjacent(pts[-1], pts[0]):
            raise InvalidArgument("last and first points of a closed contour are not 8-connected")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class ApproxConfig:
    order: int
    delta_f: int


@dataclass(frozen=True)
class Polygon:
    """Vertices picked from a contour; ``indices`` are their positions in it."""

    vertices: tuple
    closed: bool = True
    indices: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(GridPoint(int(x), int(y))
                                                   for x, y in self.vertices))
        if self.indices is not None:
            object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        need = 3 if self.closed else 2
        if len(self.vertices) < need:
            raise DegenerateObject(f"polygon needs at least {need} vertices")

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class ApproxMetrics:
    vertex_count: int
    compression_ratio: Q
    max_deviation_sq: Q
    edge_deviation_sq: tuple = field(default=(), repr=False)


# clockwise as displayed (rows grow downward), starting from the west neighbour
_RING = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))
_RING_INDEX = {d: i for i, d in enumerate(_RING)}


def largest_component(bitmap) -> np.ndarray:
    """Mask of the largest 8-connected foreground component (first in raster order on ties)."""
    mask = np.asarray(bitmap).astype(bool)
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        raise NoObject("bitmap has no foreground pixels")
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    return labels == int(np.argmax(sizes))


def trace_boundary(bitmap) -> DigitalContour:
    """Outer boundary of the largest foreground component by Moore-neighbour tracing.

    Starts at the first foreground pixel in raster order and walks clockwise
    as displayed.  Tracing stops when the first move out of the start pixel
    is about to repeat, which is Jacob's criterion expressed on moves.
    """
    comp = np.pad(largest_component(bitmap), 1)
    rows, cols = np.nonzero(comp)
    start = (int(rows[0]), int(cols[0]))

    def step(pos, back):
        r, c = pos
        for i in range(1, 8):
            d = (back + i) % 8
            nr, nc = r + _RING[d][0], c + _RING[d][1]
            if comp[nr, nc]:
                pr, pc = _RING[(d - 1) % 8]
                return (nr, nc), _RING_INDEX[(r + pr - nr, c + pc - nc)]
        return None, back

    points = [start]
    first, back = step(start, 0)
    if first is not None:
        pos = first
        limit = 4 * comp.size
        while len(points) <= limit:
            points.append(pos)
            nxt, back = step(pos, back)
            if pos == start and nxt == first:
                points.pop()
                break
            pos = nxt
    pts = [(c - 1, r - 1) for r, c in points]
    if len(pts) < 3:
        raise DegenerateObject(f"object boundary has only {len(pts)} pixel(s)")
    return DigitalContour(tuple(pts), closed=True)


def is_collinear(dt: DirectionTable, a, b, c) -> bool:
    """Collinearity of three grid points from direction indices alone."""
    d1 = direction_index(dt, b[0] - a[0], b[1] - a[1])
    d2 = direction_index(dt, c[0] - a[0], c[1] - a[1])
    return d1 == d2 or abs(d1 - d2) == dt.d_total // 2


def cross_collinear(a, b, c) -> bool:
    """The multiplication-based reference test."""
    return (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0])


def _direction(dt, u, v) -> int:
    return direction_index(dt, v[0] - u[0], v[1] - u[1], snap=True)


def approximate_polygon(dt: DirectionTable, contour: DigitalContour, config: ApproxConfig):
    """Greedy left-to-right merging of unit contour edges.

    The growing edge AB absorbs the next step BC (becoming AC) while the
    cyclic index distance between their directions is at most ``delta_f``.
    Closed contours wrap around and then re-test the seam at the start point.
    """
    if config.order != dt.order:
        raise InvalidArgument(f"config order {config.order} != table order {dt.order}")
    if config.delta_f < 0:
        raise InvalidArgument("delta_f must be non-negative")
    pts = contour.points
    m = len(pts)
    if m < (3 if contour.closed else 2):
        raise DegenerateObject("contour too short to approximate")

    verts = [0]
    a, b = 0, 1
    tail = list(range(2, m)) + ([0] if contour.closed else [])
    for c in tail:
        if pts[c] != pts[a] and cyclic_distance(
                dt, _direction(dt, pts[a], pts[b]), _direction(dt, pts[b], pts[c])) <= config.delta_f:
            b = c
        else:
            verts.append(b)
            a, b = b, c
    if not contour.closed:
        verts.append(b)
    else:
        if len(verts) > 3 and pts[verts[-1]] != pts[0] and cyclic_distance(
                dt, _direction(dt, pts[verts[-1]], pts[0]),
                _direction(dt, pts[0], pts[1])) <= config.delta_f:
            verts.pop(0)
        if len(verts) < 3:
            verts = _spread_vertices(pts)

    polygon = Polygon(tuple(pts[i] for i in verts), contour.closed, tuple(verts))
    return polygon, deviation_of(polygon, contour)


def _spread_vertices(pts) -> list:
    """Three well-separated indices, for closed contours that merged into a sliver."""
    x0, y0 = pts[0]
    far = max(range(len(pts)), key=lambda i: (pts[i][0] - x0) ** 2 + (pts[i][1] - y0) ** 2)
    fx, fy = pts[far][0] - x0, pts[far][1] - y0

    def off_line(i):
        return abs(fx * (pts[i][1] - y0) - fy * (pts[i][0] - x0))

    rest = [i for i in range(1, len(pts)) if i != far and pts[i] not in (pts[0], pts[far])]
    if not rest:
        rest = [i for i in range(1, len(pts)) if i != far]
    third = max(rest, key=off_line)
    return sorted({0, far, third})


def _match_indices(polygon: Polygon, contour: DigitalContour) -> tuple:
    if polygon.indices is not None:
        return polygon.indices
    out, k = [], 0
    for v in polygon.vertices:
        while contour.points[k] != v:
            k += 1
            if k == len(contour.points):
                raise InvalidArgument(f"vertex {v} is not on the contour in order")
        out.append(k)
    return tuple(out)


def _dist_sq(a, c, p) -> Q:
    ux, uy = c[0] - a[0], c[1] - a[1]
    wx, wy = p[0] - a[0], p[1] - a[1]
    length = ux * ux + uy * uy
    if length == 0:
        return Q(wx * wx + wy * wy)
    cross = ux * wy - uy * wx
    return Q(cross * cross, length)


def deviation_of(polygon: Polygon, contour: DigitalContour) -> ApproxMetrics:
    """Exact squared perpendicular deviation of each contour point from its covering edge."""
    idx = _match_indices(polygon, contour)
    pts = contour.points
    m = len(pts)
    spans = list(zip(idx, idx[1:]))
    if polygon.closed:
        spans.append((idx[-1], idx[0] + m))
    per_edge = []
    for s, e in spans:
        a, c = pts[s % m], pts[e % m]
        per_edge.append(max((_dist_sq(a, c, pts[k % m]) for k in range(s, e + 1)), default=Q(0)))
    worst = max(per_edge, default=Q(0))
    return ApproxMetrics(len(polygon), Q(m, len(polygon)), worst, tuple(per_edge))
