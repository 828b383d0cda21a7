"""Planar geometry for the emulator: exact segment intersection, beam
membership tests, and line-of-sight checks against segment obstacles."""

from __future__ import annotations

import math

import numpy as np


def _orient(ax, ay, bx, by, cx, cy):
    """Signed area of the triangle (a, b, c); works on scalars and arrays."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py):
    """Whether p lies within the bounding box of segment a-b (call only when
    p is collinear with it)."""
    return (np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx)) \
        & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by))


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Exact orientation-based test; touching endpoints count as
    intersecting."""
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = q1
    x4, y4 = q2
    d1 = _orient(x3, y3, x4, y4, x1, y1)
    d2 = _orient(x3, y3, x4, y4, x2, y2)
    d3 = _orient(x1, y1, x2, y2, x3, y3)
    d4 = _orient(x1, y1, x2, y2, x4, y4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) \
            and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0:
        return True
    if d1 == 0 and _on_segment(x3, y3, x4, y4, x1, y1):
        return True
    if d2 == 0 and _on_segment(x3, y3, x4, y4, x2, y2):
        return True
    if d3 == 0 and _on_segment(x1, y1, x2, y2, x3, y3):
        return True
    if d4 == 0 and _on_segment(x1, y1, x2, y2, x4, y4):
        return True
    return False


def los_test(a, b, obstacles: np.ndarray) -> bool:
    """True when the open path a-b crosses no obstacle segment.

    ``obstacles`` is an (n, 4) array of segment endpoints (x1, y1, x2, y2);
    grazing contact counts as blocked.
    """
    if obstacles.size == 0:
        return True
    ax, ay = a
    bx, by = b
    ox1, oy1, ox2, oy2 = (obstacles[:, i] for i in range(4))

    d1 = _orient(ox1, oy1, ox2, oy2, ax, ay)
    d2 = _orient(ox1, oy1, ox2, oy2, bx, by)
    d3 = _orient(ax, ay, bx, by, ox1, oy1)
    d4 = _orient(ax, ay, bx, by, ox2, oy2)

    proper = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0)) \
        & (d1 != 0) & (d2 != 0) & (d3 != 0) & (d4 != 0)
    if proper.any():
        return False

    touch = ((d1 == 0) & _on_segment(ox1, oy1, ox2, oy2, ax, ay)) \
        | ((d2 == 0) & _on_segment(ox1, oy1, ox2, oy2, bx, by)) \
        | ((d3 == 0) & _on_segment(ax, ay, bx, by, ox1, oy1)) \
        | ((d4 == 0) & _on_segment(ax, ay, bx, by, ox2, oy2))
    return not touch.any()


def los_test_batch(a: np.ndarray, b: np.ndarray, obstacles: np.ndarray) -> np.ndarray:
    """Vectorized los_test for m point pairs at once.

    ``a`` and ``b`` are (m, 2) arrays; returns an (m,) boolean array that
    matches [los_test(a[i], b[i], obstacles) for i].
    """
    m = len(a)
    if obstacles.size == 0 or m == 0:
        return np.ones(m, dtype=bool)
    ax = a[:, 0:1]
    ay = a[:, 1:2]
    bx = b[:, 0:1]
    by = b[:, 1:2]
    ox1, oy1, ox2, oy2 = (obstacles[None, :, i] for i in range(4))

    d1 = _orient(ox1, oy1, ox2, oy2, ax, ay)
    d2 = _orient(ox1, oy1, ox2, oy2, bx, by)
    d3 = _orient(ax, ay, bx, by, ox1, oy1)
    d4 = _orient(ax, ay, bx, by, ox2, oy2)

    blocked = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0)) \
        & (d1 != 0) & (d2 != 0) & (d3 != 0) & (d4 != 0)
    blocked |= (d1 == 0) & _on_segment(ox1, oy1, ox2, oy2, ax, ay)
    blocked |= (d2 == 0) & _on_segment(ox1, oy1, ox2, oy2, bx, by)
    blocked |= (d3 == 0) & _on_segment(ax, ay, bx, by, ox1, oy1)
    blocked |= (d4 == 0) & _on_segment(ax, ay, bx, by, ox2, oy2)
    return ~blocked.any(axis=1)


def angle_of(a, b) -> float:
    """Direction of the vector a -> b in radians."""
    return math.atan2(b[1] - a[1], b[0] - a[0])


def within_beam(axis: float, beamwidth: float, a, b) -> bool:
    """Whether b falls inside the main lobe of a beam at a pointing along
    ``axis``."""
    diff = (angle_of(a, b) - axis + math.pi) % (2.0 * math.pi) - math.pi
    return abs(diff) <= 0.5 * beamwidth


def distance(a, b) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])
