"""Synthetic silhouettes for demos and tests.

Rasterization samples pixel centres in floating point; this module only
produces input bitmaps and is not part of the integer pipeline.
"""

from __future__ import annotations

import math

import numpy as np


def regular_polygon(sides: int, radius: float, center=(0.0, 0.0), angle: float = 0.0):
    cx, cy = center
    start = math.radians(angle)
    return [(cx + radius * math.cos(start + 2 * math.pi * k / sides),
             cy + radius * math.sin(start + 2 * math.pi * k / sides)) for k in range(sides)]


def rotate(points, degrees: float, center=(0.0, 0.0)):
    t = math.radians(degrees)
    c, s = math.cos(t), math.sin(t)
    cx, cy = center
    return [(cx + c * (x - cx) - s * (y - cy), cy + s * (x - cx) + c * (y - cy))
            for x, y in points]


def rasterize(vertices, width: int, height: int) -> np.ndarray:
    """Bool bitmap (rows = y) of pixels whose centres fall inside the polygon (even-odd rule)."""
    ys, xs = np.mgrid[0:height, 0:width]
    px = xs + 0.5
    py = ys + 0.5
    inside = np.zeros((height, width), dtype=bool)
    verts = list(vertices)
    for (x0, y0), (x1, y1) in zip(verts, verts[1:] + verts[:1]):
        if y0 == y1:
            continue
        crosses = (py >= min(y0, y1)) & (py < max(y0, y1))
        xint = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (px < xint)
    return inside


def square_bitmap(side: int, margin: int = 2) -> np.ndarray:
    size = side + 2 * margin
    img = np.zeros((size, size), dtype=bool)
    img[margin:margin + side, margin:margin + side] = True
    return img


def disk_bitmap(radius: int, margin: int = 2) -> np.ndarray:
    size = 2 * radius + 1 + 2 * margin
    ys, xs = np.mgrid[0:size, 0:size]
    c = radius + margin
    return (xs - c) ** 2 + (ys - c) ** 2 <= radius * radius
