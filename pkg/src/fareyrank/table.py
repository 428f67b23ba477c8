"""Farey rank tables and the full-circle direction index built on top of them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .errors import InvalidOrder, OutOfTable, ZeroVector
from .sequence import FareySequence, generate_sequence

#: Cells with numerator > denominator hold this marker.
INVALID = 0
#: Largest order whose f_max fits comfortably in 32-bit cells.
MAX_ORDER = 20000


@dataclass(frozen=True)
class FareyTable:
    """Rank grid ``ranks[i, j]`` = rank of i/j in F_n, for 0 <= i <= j <= n.

    Column 0 is never valid and exists only so that ``ranks[i, j]`` can be
    indexed without an offset.  Reducible fractions alias their reduced form.
    """

    order: int
    f_max: int
    ranks: np.ndarray

    @cached_property
    def _rows(self) -> list:
        # plain nested lists: scalar reads are much faster than numpy indexing
        return self.ranks.tolist()

    def __getitem__(self, cell) -> int:
        i, j = cell
        return rank_of(self, i, j)


def build_table(seq: FareySequence) -> FareyTable:
    """Fill the rank grid from F_n: each fraction and all its multiples get its rank."""
    n = seq.order
    if n > MAX_ORDER:
        raise InvalidOrder(f"order {n} exceeds the 32-bit table limit {MAX_ORDER}")
    ranks = np.full((n + 1, n + 1), INVALID, dtype=np.uint32)
    for k, (i, j) in enumerate(zip(seq.nums, seq.dens), start=1):
        mult = np.arange(1, n // j + 1)
        ranks[i * mult, j * mult] = k
    ranks.setflags(write=False)
    return FareyTable(n, seq.f_max, ranks)


def rank_of(table: FareyTable, p: int, q: int) -> int:
    """Rank of p/q in F_n by a single table read."""
    if q < 1 or q > table.order or p < 0 or p > q:
        raise OutOfTable(f"{p}/{q} is not a cell of the order-{table.order} table")
    return table._rows[p][q]


@dataclass(frozen=True)
class PropertyReport:
    f_max: int
    rank_sum: bool  # rank(i/j) + rank((j-i)/j) == f_max + 1
    rows_decreasing: bool
    columns_increasing: bool
    column_differences_symmetric: bool
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return (self.rank_sum and self.rows_decreasing and self.columns_increasing
                and self.column_differences_symmetric)


def check_table_properties(table: FareyTable) -> PropertyReport:
    """Check the rank-sum, row, column and column-difference symmetries on every valid cell."""
    n, f = table.order, table.f_max
    t = table.ranks.astype(np.int64)
    violations = []

    rank_sum = True
    for j in range(1, n + 1):
        col = t[: j + 1, j]
        if not np.all(col + col[::-1] == f + 1):
            rank_sum = False
            violations.append(f"rank sum fails in column {j}")

    rows_ok = bool(np.all(t[0, 1:] == 1))
    for i in range(1, n + 1):
        row = t[i, i:]
        if not np.all(np.diff(row) < 0):
            rows_ok = False
            violations.append(f"row {i} not strictly decreasing")

    cols_ok = True
    sym_ok = True
    for j in range(1, n + 1):
        steps = np.diff(t[: j + 1, j])
        if not np.all(steps > 0):
            cols_ok = False
            violations.append(f"column {j} not strictly increasing")
        if not np.array_equal(steps, steps[::-1]):
            sym_ok = False
            violations.append(f"column {j} differences not symmetric")

    return PropertyReport(f, rank_sum, rows_ok, cols_ok, sym_ok, tuple(violations))


def _to_first_quadrant(dx: int, dy: int):
    """Rotate by a multiple of 90 degrees so that x > 0 and y >= 0."""
    if dx > 0 and dy >= 0:
        return 0, dx, dy
    if dx <= 0 and dy > 0:
        return 1, dy, -dx
    if dx < 0 and dy <= 0:
        return 2, -dx, -dy
    return 3, -dy, dx


@dataclass(frozen=True)
class DirectionTable:
    """Angle-ordered index of every reduced vector with components <= n.

    Index 1 is the direction (1, 0); indices grow with the angle measured
    from +x towards +y.  Each quarter turn spans ``2*f_max - 2`` indices so
    ``d_total = 8*f_max - 8``.
    """

    table: FareyTable
    seq: FareySequence

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def f_max(self) -> int:
        return self.table.f_max

    @property
    def quarter(self) -> int:
        return 2 * self.table.f_max - 2

    @property
    def d_total(self) -> int:
        return 8 * self.table.f_max - 8

    @cached_property
    def grid(self) -> np.ndarray:
        """``grid[dy + n, dx + n]`` is the index of (dx, dy); 0 at the origin."""
        n, f = self.order, self.f_max
        dy, dx = np.mgrid[-n:n + 1, -n:n + 1]
        quad = np.select(
            [(dx > 0) & (dy >= 0), (dx <= 0) & (dy > 0), (dx < 0) & (dy <= 0)],
            [0, 1, 2], 3)
        x = np.choose(quad, [dx, dy, -dx, -dy])
        y = np.choose(quad, [dy, -dx, -dy, dx])
        ranks = self.table.ranks.astype(np.int64)
        lo = ranks[np.minimum(x, y), np.maximum(x, y)]
        local = np.where(y <= x, lo, 2 * f - lo)
        out = quad * self.quarter + local
        out[n, n] = 0
        out.setflags(write=False)
        return out

    @cached_property
    def _rows(self) -> list:
        return self.grid.tolist()


def build_directions(seq: FareySequence, table: FareyTable | None = None) -> DirectionTable:
    if table is None:
        table = build_table(seq)
    return DirectionTable(table, seq)


def direction_table(order: int) -> DirectionTable:
    seq = generate_sequence(order)
    return DirectionTable(build_table(seq), seq)


def direction_index(dt: DirectionTable, dx: int, dy: int, snap: bool = False) -> int:
    """Direction index of the vector (dx, dy), in 1..d_total.

    Vectors whose reduced components exceed the order raise OutOfTable, or
    with ``snap=True`` have their slope replaced by the closest member of F_n.
    """
    n = dt.order
    if -n <= dx <= n and -n <= dy <= n:
        if dx == 0 and dy == 0:
            raise ZeroVector("direction of the zero vector is undefined")
        return dt._rows[dy + n][dx + n]
    g = gcd(dx, dy)
    rx, ry = dx // g, dy // g
    if -n <= rx <= n and -n <= ry <= n:
        return dt._rows[ry + n][rx + n]
    if not snap:
        raise OutOfTable(f"reduced vector ({rx}, {ry}) exceeds order {n}")
    return _snapped_index(dt, rx, ry)


def _snapped_index(dt: DirectionTable, dx: int, dy: int) -> int:
    from .search import SearchKey, closest_regula_falsi

    quad, x, y = _to_first_quadrant(dx, dy)
    if y <= x:
        local = closest_regula_falsi(dt.seq, dt.table, SearchKey(y, x)).rank
    else:
        local = 2 * dt.f_max - closest_regula_falsi(dt.seq, dt.table, SearchKey(x, y)).rank
    return (quad * dt.quarter + local - 1) % dt.d_total + 1


def cyclic_distance(dt: DirectionTable, a: int, b: int) -> int:
    d = abs(a - b)
    return min(d, dt.d_total - d)
