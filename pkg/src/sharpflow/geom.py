"""Planar polygon and line-cell intersection kernels.

All polygons are (n, 2) float arrays with counter-clockwise vertex order.
Lines are written as n . x = c with |n|_2 = 1; the "inside" (kept) side is
n . x <= c.
"""

import numpy as np

__all__ = [
    "polygon_area",
    "polygon_centroid",
    "polygon_moment1",
    "clip_polygon_halfplane",
    "clip_polygon_box",
    "box_polygon",
    "box_fraction_below_line",
    "line_constant_for_fraction",
    "segment_fraction_below_line",
    "line_box_segment",
]

_EPS = 1e-14


def polygon_area(poly):
    """Signed area (positive for CCW order) via the shoelace formula."""
    if len(poly) < 3:
        return 0.0
    x = poly[:, 0]
    y = poly[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def polygon_moment1(poly):
    """First moment (integral of x over the polygon), shape (2,)."""
    if len(poly) < 3:
        return np.zeros(2)
    x0 = poly[:, 0]
    y0 = poly[:, 1]
    x1 = np.roll(x0, -1)
    y1 = np.roll(y0, -1)
    cross = x0 * y1 - x1 * y0
    mx = np.sum(cross * (x0 + x1)) / 6.0
    my = np.sum(cross * (y0 + y1)) / 6.0
    return np.array([mx, my])


def polygon_centroid(poly):
    """Area centroid; falls back to the vertex mean for degenerate polygons."""
    a = polygon_area(poly)
    if abs(a) < _EPS:
        return poly.mean(axis=0)
    return polygon_moment1(poly) / a


def clip_polygon_halfplane(poly, n, c):
    """Clip a polygon against the half-plane n . x <= c (Sutherland-Hodgman)."""
    if len(poly) == 0:
        return poly
    d = poly @ np.asarray(n) - c
    if np.all(d <= _EPS):
        return poly
    if np.all(d >= -_EPS):
        return np.zeros((0, 2))
    out = []
    m = len(poly)
    for i in range(m):
        j = (i + 1) % m
        di, dj = d[i], d[j]
        if di <= 0.0:
            out.append(poly[i])
            if dj > 0.0:
                t = di / (di - dj)
                out.append(poly[i] + t * (poly[j] - poly[i]))
        elif dj <= 0.0:
            t = di / (di - dj)
            out.append(poly[i] + t * (poly[j] - poly[i]))
    if len(out) < 3:
        return np.zeros((0, 2))
    return np.array(out)


def box_polygon(x0, y0, x1, y1):
    """CCW rectangle polygon."""
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])


def clip_polygon_box(poly, x0, y0, x1, y1):
    """Clip a polygon against an axis-aligned box."""
    poly = clip_polygon_halfplane(poly, (-1.0, 0.0), -x0)
    poly = clip_polygon_halfplane(poly, (1.0, 0.0), x1)
    poly = clip_polygon_halfplane(poly, (0.0, -1.0), -y0)
    poly = clip_polygon_halfplane(poly, (0.0, 1.0), y1)
    return poly


def _normalise_line(nx, ny, c, x0, y0, h):
    """Map n.x<=c on [x0,x0+h]x[y0,y0+h] to m1*u+m2*v<=s on the unit square.

    Returns (m1, m2, s) with m1, m2 >= 0, m1 + m2 = 1. Fractions are
    invariant under the sign flips used here.
    """
    c = c - nx * x0 - ny * y0
    a1 = nx * h
    a2 = ny * h
    if a1 < 0.0:
        c -= a1
        a1 = -a1
    if a2 < 0.0:
        c -= a2
        a2 = -a2
    scale = a1 + a2
    if scale < _EPS:
        # Degenerate normal: whole cell is on one side.
        return 0.5, 0.5, np.inf if c >= 0 else -np.inf
    return a1 / scale, a2 / scale, c / scale


def _unit_fraction(m1, m2, s):
    """Area of {m1*u + m2*v <= s} in the unit square, m1+m2=1, m1,m2>=0."""
    if s <= 0.0:
        return 0.0
    if s >= 1.0:
        return 1.0
    lo, hi = (m1, m2) if m1 <= m2 else (m2, m1)
    flip = s > 0.5
    if flip:
        s = 1.0 - s
    if s <= lo:
        f = s * s / (2.0 * lo * hi) if lo > _EPS else s / hi
    else:  # lo < s <= 1/2 <= hi
        f = (s - 0.5 * lo) / hi
    return 1.0 - f if flip else f


def box_fraction_below_line(nx, ny, c, x0, y0, h):
    """Area fraction of the square cell on the side n . x <= c."""
    m1, m2, s = _normalise_line(nx, ny, c, x0, y0, h)
    if not np.isfinite(s):
        return 1.0 if s > 0 else 0.0
    return _unit_fraction(m1, m2, s)


def _unit_constant(m1, m2, f):
    """Inverse of _unit_fraction in s for a given fraction f in [0, 1]."""
    f = min(max(f, 0.0), 1.0)
    lo, hi = (m1, m2) if m1 <= m2 else (m2, m1)
    flip = f > 0.5
    if flip:
        f = 1.0 - f
    fl = lo / (2.0 * hi) if lo > _EPS else 0.0  # fraction at s = lo
    if f <= fl and lo > _EPS:
        s = np.sqrt(2.0 * f * lo * hi)
    else:
        s = f * hi + 0.5 * lo
    return 1.0 - s if flip else s


def line_constant_for_fraction(nx, ny, frac, x0, y0, h):
    """Line constant c so that box_fraction_below_line(n, c, cell) == frac."""
    a1 = nx * h
    a2 = ny * h
    shift = nx * x0 + ny * y0
    neg = 0.0
    if a1 < 0.0:
        neg += a1
        a1 = -a1
    if a2 < 0.0:
        neg += a2
        a2 = -a2
    scale = a1 + a2
    if scale < _EPS:
        return shift
    m1 = a1 / scale
    m2 = a2 / scale
    s = _unit_constant(m1, m2, frac)
    return s * scale + neg + shift


def segment_fraction_below_line(p0, p1, n, c):
    """Fraction of the segment p0-p1 lying on the side n . x <= c."""
    d0 = float(np.dot(n, p0) - c)
    d1 = float(np.dot(n, p1) - c)
    if d0 <= 0.0 and d1 <= 0.0:
        return 1.0
    if d0 >= 0.0 and d1 >= 0.0:
        return 0.0
    t = d0 / (d0 - d1)
    return t if d0 <= 0.0 else 1.0 - t


def line_box_segment(nx, ny, c, x0, y0, h):
    """Endpoints of the line n . x = c clipped to the cell, or None."""
    pts = []
    corners = box_polygon(x0, y0, x0 + h, y0 + h)
    d = corners @ np.array([nx, ny]) - c
    for i in range(4):
        j = (i + 1) % 4
        di, dj = d[i], d[j]
        if (di <= 0.0 < dj) or (dj <= 0.0 < di):
            t = di / (di - dj)
            pts.append(corners[i] + t * (corners[j] - corners[i]))
    if len(pts) < 2:
        return None
    pts = np.array(pts)
    if len(pts) > 2:
        # Collinear duplicates from grazing corners; keep the extreme pair.
        t = pts @ np.array([-ny, nx])
        pts = pts[[np.argmin(t), np.argmax(t)]]
    return pts
