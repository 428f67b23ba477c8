import itertools
import random
from fractions import Fraction as Q

import numpy as np
import pytest

from fareyrank.errors import DegenerateObject, InvalidArgument, NoObject, OutOfTable
from fareyrank.geometry import (ApproxConfig, DigitalContour, GridPoint, Polygon,
                                approximate_polygon, cross_collinear, deviation_of,
                                is_collinear, trace_boundary)
from fareyrank.synthetic import disk_bitmap, rasterize, rotate, square_bitmap

from conftest import directions_of


def _perimeter(side):
    return {(x, y) for x in range(side) for y in range(side)
            if x in (0, side - 1) or y in (0, side - 1)}


def test_trace_4x4_block():
    img = np.zeros((8, 8), dtype=bool)
    img[2:6, 2:6] = True
    c = trace_boundary(img)
    assert c.closed and len(c) == 12
    assert {(p.x - 2, p.y - 2) for p in c.points} == _perimeter(4)
    assert c.points[0] == (2, 2)
    # clockwise as displayed: first move goes east along the top row
    assert c.points[1] == (3, 2)


def test_trace_single_pixel_is_degenerate():
    img = np.zeros((5, 5), dtype=bool)
    img[2, 2] = True
    with pytest.raises(DegenerateObject):
        trace_boundary(img)


def test_trace_empty_bitmap():
    with pytest.raises(NoObject):
        trace_boundary(np.zeros((4, 4), dtype=bool))


def test_trace_picks_largest_component():
    img = np.zeros((10, 12), dtype=bool)
    img[1, 1:6] = True          # 5 pixels
    img[5:8, 7:10] = True       # 9 pixels
    c = trace_boundary(img)
    assert {(p.x, p.y) for p in c.points} == {(x, y) for x in range(7, 10) for y in range(5, 8)} - {(8, 6)}


def test_trace_thin_and_concave_shapes():
    img = np.zeros((9, 9), dtype=bool)
    img[4, 1:8] = True                      # one-pixel-wide bar
    c = trace_boundary(img)
    assert len(c) == 12                     # out along the bar and back
    img = np.zeros((10, 10), dtype=bool)
    img[1:9, 1:9] = True
    img[3:9, 4:6] = False                   # U shape
    c = trace_boundary(img)
    padded = np.pad(img, 1)
    boundary = {(int(x), int(y)) for y, x in zip(*np.nonzero(img))
                if not (padded[y, x + 1] and padded[y + 2, x + 1]
                        and padded[y + 1, x] and padded[y + 1, x + 2])}
    assert {(p.x, p.y) for p in c.points} == boundary


def test_trace_disk_every_pixel_on_boundary():
    img = disk_bitmap(12)
    c = trace_boundary(img)
    for p in c.points:
        assert img[p.y, p.x]
    assert len(set(c.points)) == len(c)


def test_contour_validation():
    with pytest.raises(InvalidArgument):
        DigitalContour(((0, 0), (2, 0), (3, 0)), closed=False)
    with pytest.raises(DegenerateObject):
        DigitalContour(((0, 0), (1, 0)), closed=True)
    with pytest.raises(InvalidArgument):
        DigitalContour(((0, 0), (1, 0), (2, 0)), closed=True)


def test_collinear_examples():
    dt = directions_of(12)
    assert is_collinear(dt, (0, 0), (2, 1), (4, 2))
    assert not is_collinear(dt, (0, 0), (2, 1), (4, 3))
    assert is_collinear(dt, (4, 2), (0, 0), (2, 1))   # antipodal directions


def test_collinear_out_of_table():
    with pytest.raises(OutOfTable):
        is_collinear(directions_of(4), (0, 0), (5, 1), (10, 2))


def test_collinear_exhaustive_small_grid():
    dt = directions_of(6)
    pts = list(itertools.product(range(6), repeat=2))
    for a, b, c in itertools.permutations(pts, 3):
        assert is_collinear(dt, a, b, c) == cross_collinear(a, b, c)


def test_antipodal_soundness():
    for n in (1, 5, 20):
        dt = directions_of(n)
        for x in range(-n, n + 1):
            for y in range(-n, n + 1):
                if (x, y) == (0, 0):
                    continue
                from fareyrank.table import direction_index
                diff = direction_index(dt, -x, -y) - direction_index(dt, x, y)
                assert diff % dt.d_total == dt.d_total // 2


def test_diagonal_run_becomes_one_edge():
    dt = directions_of(50)
    contour = DigitalContour(tuple((i, i) for i in range(6)), closed=False)
    for df in (0, 3, 500):
        poly, metrics = approximate_polygon(dt, contour, ApproxConfig(50, df))
        assert poly.vertices == ((0, 0), (5, 5))
        assert metrics.max_deviation_sq == 0


def test_square_boundary_gives_corners():
    dt = directions_of(50)
    contour = trace_boundary(square_bitmap(8))
    poly, metrics = approximate_polygon(dt, contour, ApproxConfig(50, 0))
    assert set(poly.vertices) == {(2, 2), (9, 2), (9, 9), (2, 9)}
    assert len(poly) == 4
    assert metrics.max_deviation_sq == 0
    assert metrics.compression_ratio == Q(28, 4)


def test_seam_vertex_dropped_when_start_is_mid_edge():
    dt = directions_of(50)
    square = trace_boundary(square_bitmap(8)).points
    start = square.index((5, 2))
    rolled = DigitalContour(square[start:] + square[:start])
    poly, _ = approximate_polygon(dt, rolled, ApproxConfig(50, 0))
    assert set(poly.vertices) == {(2, 2), (9, 2), (9, 9), (2, 9)}


def _shapes():
    return {
        "disk": trace_boundary(disk_bitmap(20)),
        "rect": trace_boundary(rasterize(rotate([(20, 30), (100, 30), (100, 80), (20, 80)], 30,
                                                (60, 55)), 120, 120)),
        "tri": trace_boundary(rasterize([(10, 10), (110, 40), (40, 100)], 120, 120)),
    }


@pytest.mark.parametrize("n", [4, 5, 50])
def test_vertex_count_non_increasing(n):
    dt = directions_of(n)
    for contour in _shapes().values():
        counts = [len(approximate_polygon(dt, contour, ApproxConfig(n, df))[0])
                  for df in range(0, dt.d_total // 2 + 1, max(1, dt.d_total // 64))]
        assert counts == sorted(counts, reverse=True)


def test_polygon_invariants():
    dt = directions_of(20)
    for contour in _shapes().values():
        for df in (0, 10, 60, 200, dt.d_total):
            poly, metrics = approximate_polygon(dt, contour, ApproxConfig(20, df))
            assert len(poly) >= 3
            assert list(poly.indices) == sorted(set(poly.indices))
            assert all(contour.points[i] == v for i, v in zip(poly.indices, poly.vertices))
            assert metrics.compression_ratio >= 1
            again, _ = approximate_polygon(dt, contour, ApproxConfig(20, df))
            assert again == poly


def test_open_contour_keeps_endpoints():
    dt = directions_of(10)
    rng = random.Random(3)
    pts = [(0, 0)]
    for _ in range(60):
        dx, dy = rng.choice([(1, 0), (1, 1), (0, 1), (1, -1)])
        pts.append((pts[-1][0] + dx, pts[-1][1] + dy))
    contour = DigitalContour(tuple(pts), closed=False)
    for df in (0, 5, 20, dt.d_total):
        poly, _ = approximate_polygon(dt, contour, ApproxConfig(10, df))
        assert poly.vertices[0] == pts[0] and poly.vertices[-1] == pts[-1]
        assert len(poly) >= 2


def test_config_checks():
    dt = directions_of(10)
    c = trace_boundary(square_bitmap(4))
    with pytest.raises(InvalidArgument):
        approximate_polygon(dt, c, ApproxConfig(11, 0))
    with pytest.raises(InvalidArgument):
        approximate_polygon(dt, c, ApproxConfig(10, -1))


def test_deviation_examples():
    straight = DigitalContour(((0, 0), (1, 0), (2, 0), (3, 0)), closed=False)
    assert deviation_of(Polygon(((0, 0), (3, 0)), closed=False), straight).max_deviation_sq == 0
    apex = DigitalContour(((0, 0), (1, 1), (2, 0)), closed=False)
    m = deviation_of(Polygon(((0, 0), (2, 0)), closed=False), apex)
    assert m.max_deviation_sq == 1
    assert m.vertex_count == 2 and m.compression_ratio == Q(3, 2)


def test_deviation_is_exact_rational():
    c = DigitalContour(((0, 0), (1, 0), (2, 1), (3, 1)), closed=False)
    m = deviation_of(Polygon(((0, 0), (3, 1)), closed=False), c)
    # point (1, 0): cross = 3*0 - 1*1 = -1 -> 1/10; point (2, 1): cross = 3 - 2 = 1 -> 1/10
    assert m.max_deviation_sq == Q(1, 10)
