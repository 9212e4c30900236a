"""Exact initial volume-fraction fields for the analytic interface shapes.

Convergence and balance studies need initialisation error at round-off
level, so fractions come from closed-form cell integrals (half-plane,
circle, single-valued wave) or from finely sampled boundary polygons.
"""

import numpy as np

from . import geom


def halfplane_fractions(mesh, n, c):
    """Liquid = {n . x <= c}; exact per-cell fractions."""
    n = np.asarray(n, float)
    alpha = np.empty((mesh.nx, mesh.ny))
    for i in range(mesh.nx):
        x0 = mesh.x0 + i * mesh.h
        for j in range(mesh.ny):
            y0 = mesh.y0 + j * mesh.h
            alpha[i, j] = geom.box_fraction_below_line(n[0], n[1], c, x0, y0, mesh.h)
    return alpha


def _circle_area_primitive(u, R):
    """Antiderivative of sqrt(R^2 - u^2)."""
    u = np.clip(u, -R, R)
    return 0.5 * (u * np.sqrt(max(R * R - u * u, 0.0)) + R * R * np.arcsin(u / R))


def _circle_box_area(cx, cy, R, x0, y0, x1, y1):
    """Exact area of the disc intersected with the box."""
    a = max(x0, cx - R)
    b = min(x1, cx + R)
    if b <= a:
        return 0.0
    splits = {a, b}
    for ye in (y0, y1):
        d = R * R - (ye - cy) ** 2
        if d > 0.0:
            r = np.sqrt(d)
            for xs in (cx - r, cx + r):
                if a < xs < b:
                    splits.add(xs)
    xs = sorted(splits)
    area = 0.0
    for p, q in zip(xs[:-1], xs[1:]):
        m = 0.5 * (p + q)
        s = np.sqrt(max(R * R - (m - cx) ** 2, 0.0))
        top_is_edge = (cy + s) > y1
        bot_is_edge = (cy - s) < y0
        top_m = y1 if top_is_edge else cy + s
        bot_m = y0 if bot_is_edge else cy - s
        if top_m <= bot_m:
            continue
        if top_is_edge:
            ti = y1 * (q - p)
        else:
            ti = cy * (q - p) + (_circle_area_primitive(q - cx, R)
                                 - _circle_area_primitive(p - cx, R))
        if bot_is_edge:
            bi = y0 * (q - p)
        else:
            bi = cy * (q - p) - (_circle_area_primitive(q - cx, R)
                                 - _circle_area_primitive(p - cx, R))
        area += ti - bi
    return area


def circle_fractions(mesh, cx, cy, R, liquid_inside=True):
    """Exact fractions for a circular interface."""
    alpha = np.empty((mesh.nx, mesh.ny))
    vol = mesh.cell_volume
    for i in range(mesh.nx):
        for j in range(mesh.ny):
            x0, y0, x1, y1 = mesh.cell_box(i, j)
            # quick accept/reject by corner distances
            dx = max(x0 - cx, cx - x1, 0.0)
            dy = max(y0 - cy, cy - y1, 0.0)
            if dx * dx + dy * dy >= R * R:
                alpha[i, j] = 0.0
                continue
            fx = max(abs(x0 - cx), abs(x1 - cx))
            fy = max(abs(y0 - cy), abs(y1 - cy))
            if fx * fx + fy * fy <= R * R:
                alpha[i, j] = 1.0
                continue
            alpha[i, j] = _circle_box_area(cx, cy, R, x0, y0, x1, y1) / vol
    if not liquid_inside:
        alpha = 1.0 - alpha
    return np.clip(alpha, 0.0, 1.0)


def wave_fractions(mesh, y_base, amplitude, wavelength, liquid_below=True,
                   x_phase=0.0):
    """Exact fractions for the interface y = y_base + amplitude*cos(k(x - x_phase))."""
    k = 2.0 * np.pi / wavelength

    def Y(x):
        return y_base + amplitude * np.cos(k * (x - x_phase))

    def Yint(x):  # antiderivative
        return y_base * x + (amplitude / k) * np.sin(k * (x - x_phase))

    alpha = np.empty((mesh.nx, mesh.ny))
    for i in range(mesh.nx):
        x0 = mesh.x0 + i * mesh.h
        x1 = x0 + mesh.h
        for j in range(mesh.ny):
            y0 = mesh.y0 + j * mesh.h
            y1 = y0 + mesh.h
            splits = {x0, x1}
            if amplitude != 0.0:
                for ye in (y0, y1):
                    v = (ye - y_base) / amplitude
                    if -1.0 < v < 1.0:
                        t = np.arccos(v)  # k(x - x_phase) = +-t + 2 pi m
                        for tt in (t, -t):
                            m0 = np.floor((k * (x0 - x_phase) - tt) / (2 * np.pi))
                            for m in (m0, m0 + 1, m0 + 2):
                                xs = x_phase + (tt + 2 * np.pi * m) / k
                                if x0 < xs < x1:
                                    splits.add(xs)
            area = 0.0
            for p, q in zip(*(lambda s: (s[:-1], s[1:]))(sorted(splits))):
                ym = Y(0.5 * (p + q))
                if ym >= y1:
                    area += (y1 - y0) * (q - p)
                elif ym > y0:
                    area += Yint(q) - Yint(p) - y0 * (q - p)
            alpha[i, j] = area / mesh.cell_volume
    alpha = np.clip(alpha, 0.0, 1.0)
    return alpha if liquid_below else 1.0 - alpha


def polygon_fractions(mesh, polygon):
    """Fractions of cells covered by a (possibly non-convex) CCW polygon."""
    alpha = np.zeros((mesh.nx, mesh.ny))
    bx0, by0 = polygon.min(axis=0)
    bx1, by1 = polygon.max(axis=0)
    i0 = max(int(np.floor((bx0 - mesh.x0) / mesh.h)), 0)
    i1 = min(int(np.ceil((bx1 - mesh.x0) / mesh.h)), mesh.nx)
    j0 = max(int(np.floor((by0 - mesh.y0) / mesh.h)), 0)
    j1 = min(int(np.ceil((by1 - mesh.y0) / mesh.h)), mesh.ny)
    for i in range(i0, i1):
        for j in range(j0, j1):
            x0, y0, x1, y1 = mesh.cell_box(i, j)
            clipped = geom.clip_polygon_box(polygon, x0, y0, x1, y1)
            alpha[i, j] = geom.polygon_area(clipped) / mesh.cell_volume
    return np.clip(alpha, 0.0, 1.0)


def perturbed_circle_polygon(cx, cy, R, eps, k, npts=4096):
    """Boundary polygon of r(theta) = R (1 + eps cos(k theta))."""
    th = np.linspace(0.0, 2.0 * np.pi, npts, endpoint=False)
    r = R * (1.0 + eps * np.cos(k * th))
    return np.stack([cx + r * np.cos(th), cy + r * np.sin(th)], axis=-1)


def tilted_wave_fractions(mesh, N, S, amplitude, wavelength, npts=8192):
    """Liquid = {N . x <= S + amplitude cos(2 pi (T . x)/wavelength)}, T perp N.

    amplitude = 0 delegates to the exact half-plane integral; otherwise the
    boundary curve is finely polygonised (graph over the T coordinate, single
    valued for amplitude << wavelength).
    """
    N = np.asarray(N, float)
    N = N / np.hypot(*N)
    if amplitude == 0.0:
        return halfplane_fractions(mesh, N, S)
    T = np.array([-N[1], N[0]])
    # t-range covering the whole domain with margin
    corners = np.array([
        [mesh.x0, mesh.y0], [mesh.x0 + mesh.lx, mesh.y0],
        [mesh.x0, mesh.y0 + mesh.ly], [mesh.x0 + mesh.lx, mesh.y0 + mesh.ly]])
    t_vals = corners @ T
    n_vals = corners @ N
    t0, t1 = t_vals.min() - wavelength, t_vals.max() + wavelength
    far = n_vals.min() - 10.0 * (n_vals.max() - n_vals.min() + 1.0)
    t = np.linspace(t0, t1, npts)
    s = S + amplitude * np.cos(2.0 * np.pi * t / wavelength)
    curve = t[:, None] * T[None, :] + s[:, None] * N[None, :]
    closure = np.array([t1 * T + far * N, t0 * T + far * N])
    poly = np.vstack([curve, closure])
    if geom.polygon_area(poly) < 0:
        poly = poly[::-1]
    return polygon_fractions(mesh, poly)
