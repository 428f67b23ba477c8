"""Turning-angle shape descriptors in direction-index units."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import InvalidArgument, OpenPolygonUnsupported
from .geometry import Polygon
from .table import DirectionTable, direction_index


@dataclass(frozen=True)
class ShapeDescriptor:
    """Exterior turn at each vertex, as ``(d_in - d_out) mod d_total``.

    The polygon is first oriented clockwise with the y axis pointing up
    (negative shoelace area in raw coordinates), so a convex corner gives a
    turn below ``d_total/2`` and a full traversal sums to ``d_total``.
    """

    order: int
    d_total: int
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def degrees(self) -> list:
        return [index_to_degrees(self.d_total, e) for e in self.entries]

    def interior_degrees(self) -> list:
        """180 degrees minus the signed turn; reflex corners exceed 180."""
        half = self.d_total // 2
        out = []
        for e in self.entries:
            signed = e - self.d_total if e > half else e
            out.append(180 - Q(signed * 360, self.d_total))
        return out


@dataclass(frozen=True)
class MatchScore:
    score: Q
    shift: int = 0
    reversed: bool = False
    deltas: tuple = ()


def signed_area2(vertices) -> int:
    """Twice the shoelace area; positive for counter-clockwise with y up."""
    total = 0
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:] + vertices[:1]):
        total += x0 * y1 - x1 * y0
    return total


def descriptor_of(dt: DirectionTable, polygon: Polygon) -> ShapeDescriptor:
    if not polygon.closed:
        raise OpenPolygonUnsupported("descriptors need a closed polygon")
    verts = list(polygon.vertices)
    if len(verts) < 3:
        raise InvalidArgument("descriptors need at least three vertices")
    if signed_area2(verts) > 0:
        verts = verts[:1] + verts[:0:-1]
    m = len(verts)
    dirs = [direction_index(dt, verts[(i + 1) % m][0] - verts[i][0],
                            verts[(i + 1) % m][1] - verts[i][1], snap=True)
            for i in range(m)]
    d = dt.d_total
    entries = tuple((dirs[i - 1] - dirs[i]) % d for i in range(m))
    return ShapeDescriptor(dt.order, d, entries)


def index_to_degrees(dt, diff: int) -> Q:
    """Exact degrees for a direction-index difference; ``dt`` may be a d_total."""
    d_total = dt if isinstance(dt, int) else dt.d_total
    if not 0 <= diff < d_total:
        raise InvalidArgument(f"difference {diff} outside 0..{d_total - 1}")
    return Q(diff * 360, d_total)


def _resample(entries, length: int) -> list:
    m = len(entries)
    return [entries[(2 * j * m + length) // (2 * length) % m] for j in range(length)]


def compare_cyclic(a: ShapeDescriptor, b: ShapeDescriptor) -> MatchScore:
    """Mean per-vertex angular difference, in degrees, under the best cyclic alignment.

    Both scan directions of ``b`` are tried.  A shorter descriptor is first
    resampled (nearest neighbour) to the longer length.
    """
    if a.d_total != b.d_total:
        raise InvalidArgument("descriptors use different direction tables")
    d = a.d_total
    length = max(len(a), len(b))
    xs = list(a.entries) if len(a) == length else _resample(a.entries, length)
    ys = list(b.entries) if len(b) == length else _resample(b.entries, length)
    best = None
    for rev, seq in ((False, ys), (True, ys[::-1])):
        for shift in range(length):
            diffs = []
            for i in range(length):
                e = abs(xs[i] - seq[(i + shift) % length])
                diffs.append(min(e, d - e))
            total = sum(diffs)
            if best is None or total < best[0]:
                best = (total, shift, rev, diffs)
    total, shift, rev, diffs = best
    return MatchScore(Q(total * 360, length * d), shift, rev,
                      tuple(Q(x * 360, d) for x in diffs))
