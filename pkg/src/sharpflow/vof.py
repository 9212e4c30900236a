"""Geometric (unsplit) volume-of-fluid advection.

Each face's total volume flux over a step is the exact algebraic value
dt |f| u_f; the back-traced flux polygon, clipped against the upwind PLIC
liquid geometry, only apportions that total between liquid and gas. Pure
regions therefore stay exactly pure for discretely divergence-free
velocities, and the flux-form fraction update conserves liquid volume to
round-off on periodic domains.
"""

import numpy as np

from . import geom
from .mesh import FaceField
from .plic import EPS_FRAC


class CflError(RuntimeError):
    """Raised when the donating-region CFL bound is violated."""


def node_velocities(mesh, u):
    """Velocity vectors at nodes, averaged from the face-normal components."""
    if mesh.per_y:
        vx = 0.5 * (u.x + np.roll(u.x, 1, axis=1))
    else:
        vx = np.empty((mesh.nfx, mesh.nfy))
        vx[:, 1:-1] = 0.5 * (u.x[:, 1:] + u.x[:, :-1])
        vx[:, 0] = u.x[:, 0]
        vx[:, -1] = u.x[:, -1]
    if mesh.per_x:
        vy = 0.5 * (u.y + np.roll(u.y, 1, axis=0))
    else:
        vy = np.empty((mesh.nfx, mesh.nfy))
        vy[1:-1, :] = 0.5 * (u.y[1:, :] + u.y[:-1, :])
        vy[0, :] = u.y[0, :]
        vy[-1, :] = u.y[-1, :]
    return vx, vy


def extend_liquid_velocity(mesh, u_l, astag_l, passes=3):
    """Extend the liquid velocity into the gas-side band.

    Constant extension by repeated averaging of defined face neighbours;
    values are consumed only within one CFL cell of the interface.
    """
    out = u_l.copy()
    def_x = astag_l.x > EPS_FRAC
    def_y = astag_l.y > EPS_FRAC
    out.x[~def_x] = 0.0
    out.y[~def_y] = 0.0
    for _ in range(passes):
        def_x, out.x = _extend_once(out.x, def_x, mesh.per_x, mesh.per_y)
        def_y, out.y = _extend_once(out.y, def_y, mesh.per_x, mesh.per_y)
    return out


def _shift(arr, axis, step, periodic, fill=0.0):
    if periodic:
        return np.roll(arr, step, axis=axis)
    out = np.full_like(arr, fill)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    if step == 1:
        src[axis] = slice(None, -1)
        dst[axis] = slice(1, None)
    else:
        src[axis] = slice(1, None)
        dst[axis] = slice(None, -1)
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _extend_once(vals, defined, per0, per1):
    v = np.where(defined, vals, 0.0)
    d = defined.astype(float)
    num = np.zeros_like(v)
    den = np.zeros_like(d)
    for axis, per in ((0, per0), (1, per1)):
        for step in (1, -1):
            num += _shift(v, axis, step, per)
            den += _shift(d, axis, step, per)
    newly = (~defined) & (den > 0)
    vals = vals.copy()
    vals[newly] = num[newly] / den[newly]
    return defined | newly, vals


def _liquid_area_in_cell(g, poly, i, j):
    """Liquid area of `poly` inside (unwrapped) cell (i, j)."""
    mesh = g.mesh
    iw = mesh.wrap_i(i)
    jw = mesh.wrap_j(j)
    if not (0 <= iw < mesh.nx and 0 <= jw < mesh.ny):
        return 0.0  # outside a wall: no liquid there
    x0 = mesh.x0 + i * mesh.h
    y0 = mesh.y0 + j * mesh.h
    part = geom.clip_polygon_box(poly, x0, y0, x0 + mesh.h, y0 + mesh.h)
    if len(part) == 0:
        return 0.0
    area = geom.polygon_area(part)
    if not g.mixed[iw, jw]:
        return area if g.alpha[iw, jw] >= 0.5 else 0.0
    n = g.normal[iw, jw]
    # shift the stored line constant to the unwrapped cell position
    c = g.const[iw, jw] + n[0] * (i - iw) * mesh.h + n[1] * (j - jw) * mesh.h
    wet = geom.clip_polygon_halfplane(part, n, c)
    return geom.polygon_area(wet) if len(wet) else 0.0


def _flux_ratio(g, quad, i_lo, i_hi, j_lo, j_hi):
    total = abs(geom.polygon_area(quad))
    if total < 1e-300:
        return None
    liquid = 0.0
    for i in range(i_lo, i_hi + 1):
        for j in range(j_lo, j_hi + 1):
            liquid += _liquid_area_in_cell(g, quad, i, j)
    return min(max(liquid / total, 0.0), 1.0)


def advect_vof(g, u_adv, dt, max_cfl=1.0):
    """One geometric advection step of the liquid fraction.

    Parameters
    ----------
    g : InterfaceGeometry
        Current reconstruction (defines the liquid geometry being fluxed).
    u_adv : FaceField
        Advecting velocity (extended liquid velocity or the mass-averaged
        field, depending on the formulation).
    dt : float
        Time step; the local control-volume CFL number must stay below 1.

    Returns
    -------
    alpha_new : ndarray
        Updated (clipped and volume-repaired) liquid fraction.
    V_l : FaceField
        Liquid volume fluxed through each face (volume units, signed along
        the face normal).
    V_t : FaceField
        Total volume flux dt |f| u_f.
    clipped : float
        Total liquid volume clipped before repair (diagnostic).
    """
    from .transport import cfl_number

    mesh = g.mesh
    theta = cfl_number(mesh, u_adv, dt)
    if np.max(theta) >= max_cfl:
        raise CflError(f"control-volume CFL {np.max(theta):.3f} >= {max_cfl}")

    h = mesh.h
    vx, vy = node_velocities(mesh, u_adv)
    V_t = FaceField(mesh, dt * h * u_adv.x, dt * h * u_adv.y)
    V_l = FaceField(mesh)

    alpha = g.alpha
    # faces needing polygon work: any cell of the upwind neighbourhood mixed;
    # elsewhere the whole flux region shares the pure upwind state
    near = _dilate(mesh, _dilate(mesh, g.mixed))
    liquid_cell = np.where(alpha >= 0.5, 1.0, 0.0)

    for fam in ("x", "y"):
        uf = u_adv.x if fam == "x" else u_adv.y
        Vl = V_l.x if fam == "x" else V_l.y
        Vt = V_t.x if fam == "x" else V_t.y
        axis = 0 if fam == "x" else 1
        per = mesh.per_x if fam == "x" else mesh.per_y
        # vectorised far-field apportioning by the upwind pure state
        lw = _face_pair(mesh, liquid_cell, axis, per)
        nearf = _face_pair(mesh, near.astype(float), axis, per)
        up_liquid = np.where(uf > 0, lw[0], lw[1])
        needs_geom = (nearf[0] + nearf[1]) > 0
        Vl[:] = np.where(needs_geom, 0.0, Vt * up_liquid)
        for fi, fj in zip(*np.nonzero(needs_geom & (Vt != 0.0))):
            total = Vt[fi, fj]
            quad = _flux_polygon(mesh, fam, fi, fj, vx, vy, dt)
            if quad is None:
                a_up = g.a_l.x[fi, fj] if fam == "x" else g.a_l.y[fi, fj]
                Vl[fi, fj] = total * a_up
                continue
            bb0 = quad.min(axis=0)
            bb1 = quad.max(axis=0)
            i_lo = int(np.floor((bb0[0] - mesh.x0) / h))
            i_hi = int(np.ceil((bb1[0] - mesh.x0) / h)) - 1
            j_lo = int(np.floor((bb0[1] - mesh.y0) / h))
            j_hi = int(np.ceil((bb1[1] - mesh.y0) / h)) - 1
            ratio = _flux_ratio(g, quad, i_lo, i_hi, j_lo, j_hi)
            if ratio is None:
                a_up = g.a_l.x[fi, fj] if fam == "x" else g.a_l.y[fi, fj]
                ratio = a_up
            Vl[fi, fj] = total * ratio

    V_l.zero_boundary()
    V_t.zero_boundary()
    alpha_raw = alpha - _flux_divergence(mesh, V_l) / mesh.cell_volume
    alpha_new, clipped = _clip_and_repair(mesh, alpha_raw)
    return alpha_new, V_l, V_t, clipped


def _dilate(mesh, mask):
    out = mask.copy()
    for axis, per in ((0, mesh.per_x), (1, mesh.per_y)):
        grown = out.copy()
        for step in (1, -1):
            if per:
                grown |= np.roll(out, step, axis=axis)
            else:
                sh = np.zeros_like(out)
                if axis == 0:
                    if step == 1:
                        sh[1:] = out[:-1]
                    else:
                        sh[:-1] = out[1:]
                else:
                    if step == 1:
                        sh[:, 1:] = out[:, :-1]
                    else:
                        sh[:, :-1] = out[:, 1:]
                grown |= sh
        out = grown
    return out


def _face_pair(mesh, q, axis, per):
    """Cell values on the two sides of each face of a family: (lower, upper).

    Wall boundary faces replicate the single interior neighbour.
    """
    if per:
        return np.roll(q, 1, axis=axis), q
    if axis == 0:
        lo = np.vstack([q[:1, :], q])
        hi = np.vstack([q, q[-1:, :]])
    else:
        lo = np.hstack([q[:, :1], q])
        hi = np.hstack([q, q[:, -1:]])
    return lo, hi


def _flux_polygon(mesh, fam, fi, fj, vx, vy, dt):
    """Back-traced donating quad of a face, or None when degenerate."""
    h = mesh.h
    if fam == "x":
        xA = mesh.x0 + fi * h
        yA = mesh.y0 + fj * h
        A = np.array([xA, yA])
        B = np.array([xA, yA + h])
        nA = (fi, fj)
        nB = (fi, fj + 1)
    else:
        xA = mesh.x0 + fi * h
        yA = mesh.y0 + fj * h
        A = np.array([xA, yA])
        B = np.array([xA + h, yA])
        nA = (fi, fj)
        nB = (fi + 1, fj)
    nA = (nA[0] % mesh.nfx if mesh.per_x else nA[0],
          nA[1] % mesh.nfy if mesh.per_y else nA[1])
    nB = (nB[0] % mesh.nfx if mesh.per_x else nB[0],
          nB[1] % mesh.nfy if mesh.per_y else nB[1])
    vA = np.array([vx[nA], vy[nA]])
    vB = np.array([vx[nB], vy[nB]])
    Ab = A - dt * vA
    Bb = B - dt * vB
    quad = np.array([A, B, Bb, Ab])
    area = geom.polygon_area(quad)
    if abs(area) < 1e-300:
        return None
    if area < 0:
        quad = quad[::-1]
    return quad


def _flux_divergence(mesh, V):
    if mesh.per_x:
        dx = np.roll(V.x, -1, axis=0) - V.x
    else:
        dx = V.x[1:, :] - V.x[:-1, :]
    if mesh.per_y:
        dy = np.roll(V.y, -1, axis=1) - V.y
    else:
        dy = V.y[:, 1:] - V.y[:, :-1]
    return dx + dy


def _clip_and_repair(mesh, alpha_raw):
    """Clip to [0, 1] and push the clipped volume into neighbouring mixed cells."""
    alpha = np.clip(alpha_raw, 0.0, 1.0)
    resid = alpha_raw - alpha  # signed fraction excess per cell
    clipped = float(np.sum(np.abs(resid))) * mesh.cell_volume
    if clipped == 0.0:
        return alpha, 0.0
    for _ in range(3):
        ri, rj = np.nonzero(np.abs(resid) > 1e-300)
        if len(ri) == 0:
            break
        for i, j in zip(ri, rj):
            r = resid[i, j]
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                if r == 0.0:
                    break
                ci, cj = i + di, j + dj
                if not mesh.cell_in_domain(ci, cj):
                    continue
                ci, cj = mesh.wrap_i(ci), mesh.wrap_j(cj)
                if r > 0:
                    room = 1.0 - alpha[ci, cj]
                    take = min(r, room)
                else:
                    room = alpha[ci, cj]
                    take = max(r, -room)
                alpha[ci, cj] += take
                r -= take
            resid[i, j] = r
    # whatever remains is spread uniformly over cells with room
    rest = float(np.sum(resid))
    if rest != 0.0:
        room = (1.0 - alpha) if rest > 0 else alpha
        total_room = float(np.sum(room))
        if total_room > 0:
            alpha += np.sign(rest) * room * (abs(rest) / total_room)
    return np.clip(alpha, 0.0, 1.0), clipped
