"""Mass-flux-consistent momentum advection on staggered control volumes.

Momentum moves with the same per-phase mass fluxes that move the fractions:
liquid fluxes are the geometric VOF fluxes, gas fluxes are the algebraic
complement computed from the gas velocity. The advection operator is
first-order upwind between staggered volumes; the staggered-face fluxes are
two-face averages of the cell-face fluxes, which makes the implied staggered
mass update exactly consistent with the fraction update and turns every
uniform velocity field into an exact fixed point.
"""

import numpy as np

from .mesh import FaceField
from .vof import _shift, _flux_polygon, _flux_ratio, _dilate, _face_pair, node_velocities

THETA_MAX_DEFAULT = 0.75
MASS_EPS = 1e-9


def cfl_number(mesh, u, dt):
    """Local control-volume CFL number per cell (inflow volume fraction)."""
    if mesh.per_x:
        u_w, u_e = u.x, np.roll(u.x, -1, axis=0)
    else:
        u_w, u_e = u.x[:-1, :], u.x[1:, :]
    if mesh.per_y:
        u_s, u_n = u.y, np.roll(u.y, -1, axis=1)
    else:
        u_s, u_n = u.y[:, :-1], u.y[:, 1:]
    inflow = (np.maximum(u_w, 0.0) + np.maximum(-u_e, 0.0)
              + np.maximum(u_s, 0.0) + np.maximum(-u_n, 0.0))
    return dt * inflow / mesh.h


def gas_volume_flux(g, u_g, dt):
    """Gas volume flux: algebraic total minus the liquid part of the quads."""
    mesh = g.mesh
    h = mesh.h
    vx, vy = node_velocities(mesh, u_g)
    V_t = FaceField(mesh, dt * h * u_g.x, dt * h * u_g.y)
    near = _dilate(mesh, _dilate(mesh, g.mixed))
    liquid_cell = np.where(g.alpha >= 0.5, 1.0, 0.0)
    out = FaceField(mesh)
    for fam in ("x", "y"):
        uf = u_g.x if fam == "x" else u_g.y
        Vt = V_t.x if fam == "x" else V_t.y
        Vg = out.x if fam == "x" else out.y
        axis = 0 if fam == "x" else 1
        per = mesh.per_x if fam == "x" else mesh.per_y
        lo, hi = _face_pair(mesh, liquid_cell, axis, per)
        n_lo, n_hi = _face_pair(mesh, near.astype(float), axis, per)
        up_liquid = np.where(uf > 0, lo, hi)
        needs_geom = (n_lo + n_hi) > 0
        Vg[:] = np.where(needs_geom, 0.0, Vt * (1.0 - up_liquid))
        for fi, fj in zip(*np.nonzero(needs_geom & (Vt != 0.0))):
            total = Vt[fi, fj]
            quad = _flux_polygon(mesh, fam, fi, fj, vx, vy, dt)
            if quad is None:
                a_up = g.a_l.x[fi, fj] if fam == "x" else g.a_l.y[fi, fj]
                Vg[fi, fj] = total * (1.0 - a_up)
                continue
            bb0 = quad.min(axis=0)
            bb1 = quad.max(axis=0)
            ratio = _flux_ratio(
                g, quad,
                int(np.floor((bb0[0] - mesh.x0) / h)),
                int(np.ceil((bb1[0] - mesh.x0) / h)) - 1,
                int(np.floor((bb0[1] - mesh.y0) / h)),
                int(np.ceil((bb1[1] - mesh.y0) / h)) - 1)
            if ratio is None:
                ratio = g.a_l.x[fi, fj] if fam == "x" else g.a_l.y[fi, fj]
            Vg[fi, fj] = total * (1.0 - ratio)
    out.zero_boundary()
    return out


def staggered_mass_fluxes(mesh, M):
    """Fluxes through the staggered control-volume faces of both families.

    Input M is a face field of (mass or volume) fluxes through cell faces.
    Returns ((cx, nx_f), (cy, ny_f)):
      cx (nx, ny):    x-family flux through staggered faces at cell centres
      nx_f (nfx,nfy): x-family flux through staggered faces at nodes (+y)
      cy (nx, ny):    y-family flux at cell centres (+y)
      ny_f (nfx,nfy): y-family flux at nodes (+x)
    """
    if mesh.per_x:
        cx = 0.5 * (M.x + np.roll(M.x, -1, axis=0))
    else:
        cx = 0.5 * (M.x[:-1, :] + M.x[1:, :])
    if mesh.per_y:
        cy = 0.5 * (M.y + np.roll(M.y, -1, axis=1))
    else:
        cy = 0.5 * (M.y[:, :-1] + M.y[:, 1:])
    # node fluxes: average over the two cells sharing the node column/row
    if mesh.per_x:
        nx_f = 0.5 * (M.y + np.roll(M.y, 1, axis=0))
    else:
        nx_f = np.zeros((mesh.nfx, mesh.nfy))
        nx_f[1:-1, :] = 0.5 * (M.y[1:, :] + M.y[:-1, :])
        nx_f[0, :] = 0.5 * M.y[0, :]
        nx_f[-1, :] = 0.5 * M.y[-1, :]
    if mesh.per_y:
        ny_f = 0.5 * (M.x + np.roll(M.x, 1, axis=1))
    else:
        ny_f = np.zeros((mesh.nfx, mesh.nfy))
        ny_f[:, 1:-1] = 0.5 * (M.x[:, 1:] + M.x[:, :-1])
        ny_f[:, 0] = 0.5 * M.x[:, 0]
        ny_f[:, -1] = 0.5 * M.x[:, -1]
    return (cx, nx_f), (cy, ny_f)


def _x_family_divergences(mesh, ux, cx, nxf):
    """(mass divergence, upwind momentum divergence) on the x-face lattice."""
    u_lo = ux if mesh.per_x else ux[:-1, :]
    u_hi = np.roll(ux, -1, axis=0) if mesh.per_x else ux[1:, :]
    mom_c = cx * np.where(cx > 0, u_lo, u_hi)
    # node flux at (i, jn) moves momentum between x-faces (i, jn-1) and (i, jn)
    u_below = _shift(ux, 1, 1, mesh.per_y)
    if mesh.per_y:
        u_at = ux
    else:
        u_at = np.zeros((mesh.nfx, mesh.nfy))
        u_at[:, :-1] = ux
        u_below_w = np.zeros((mesh.nfx, mesh.nfy))
        u_below_w[:, 1:] = ux
        u_below = u_below_w
    mom_n = nxf * np.where(nxf > 0, u_below, u_at)

    def fam_div(cell_arr, node_arr):
        if mesh.per_x:
            dc = cell_arr - np.roll(cell_arr, 1, axis=0)
        else:
            dc = np.zeros((mesh.nfx, mesh.ny))
            dc[1:-1, :] = cell_arr[1:, :] - cell_arr[:-1, :]
        if mesh.per_y:
            dn = np.roll(node_arr, -1, axis=1) - node_arr
        else:
            dn = node_arr[:, 1:] - node_arr[:, :-1]
        return dc + dn

    return fam_div(cx, nxf), fam_div(mom_c, mom_n)


def _y_family_divergences(mesh, uy, cy, nyf):
    u_lo = uy if mesh.per_y else uy[:, :-1]
    u_hi = np.roll(uy, -1, axis=1) if mesh.per_y else uy[:, 1:]
    mom_c = cy * np.where(cy > 0, u_lo, u_hi)
    if mesh.per_x:
        u_left = _shift(uy, 0, 1, True)
        u_at = uy
    else:
        u_at = np.zeros((mesh.nfx, mesh.nfy))
        u_at[:-1, :] = uy
        u_left = np.zeros((mesh.nfx, mesh.nfy))
        u_left[1:, :] = uy
    mom_n = nyf * np.where(nyf > 0, u_left, u_at)

    def fam_div(cell_arr, node_arr):
        if mesh.per_y:
            dc = cell_arr - np.roll(cell_arr, 1, axis=1)
        else:
            dc = np.zeros((mesh.nx, mesh.nfy))
            dc[:, 1:-1] = cell_arr[:, 1:] - cell_arr[:, :-1]
        if mesh.per_x:
            dn = np.roll(node_arr, -1, axis=0) - node_arr
        else:
            dn = node_arr[1:, :] - node_arr[:-1, :]
        return dc + dn

    return fam_div(cy, nyf), fam_div(mom_c, mom_n)


def advect_momentum(mesh, u, mass_old, M, divisor=None, mass_floor=None):
    """Upwind momentum advection of one velocity field.

    Parameters
    ----------
    u : FaceField
        Velocity at time level n.
    mass_old : FaceField
        Extensive staggered mass (alpha~ rho |omega|) at level n.
    M : FaceField
        Mass flux through cell faces over the step.
    divisor : FaceField or None
        Extensive staggered mass used as divisor (defaults to the flux
        update of mass_old).
    mass_floor : float or None
        Faces with divisor mass below this are left with zero velocity.

    Returns
    -------
    u_star : FaceField  (zero where the divisor mass vanishes)
    mass_flux : FaceField  (flux-updated extensive mass)
    """
    (cx, nxf), (cy, nyf) = staggered_mass_fluxes(mesh, M)
    mdiv_x, momdiv_x = _x_family_divergences(mesh, u.x, cx, nxf)
    mdiv_y, momdiv_y = _y_family_divergences(mesh, u.y, cy, nyf)
    mass_flux = FaceField(mesh, mass_old.x - mdiv_x, mass_old.y - mdiv_y)
    mom_new_x = mass_old.x * u.x - momdiv_x
    mom_new_y = mass_old.y * u.y - momdiv_y
    div_ = mass_flux if divisor is None else divisor
    if mass_floor is None:
        mass_floor = MASS_EPS * mesh.cell_volume * max(
            float(np.max(np.abs(div_.x)) if div_.x.size else 0.0),
            float(np.max(np.abs(div_.y)) if div_.y.size else 0.0),
            1e-300) / mesh.cell_volume
    u_star = FaceField(mesh)
    okx = div_.x > mass_floor
    oky = div_.y > mass_floor
    u_star.x[okx] = mom_new_x[okx] / div_.x[okx]
    u_star.y[oky] = mom_new_y[oky] / div_.y[oky]
    u_star.zero_boundary()
    return u_star, mass_flux


def extensive_mass(mesh, astag_l, rho, liquid=True):
    """alpha~^pi rho^pi |omega_f| as a FaceField."""
    wx = mesh.xface_volumes()
    wy = mesh.yface_volumes()
    if liquid:
        return FaceField(mesh, astag_l.x * rho * wx, astag_l.y * rho * wy)
    return FaceField(mesh, (1.0 - astag_l.x) * rho * wx, (1.0 - astag_l.y) * rho * wy)


def momentum_totals(mesh, u_l, u_g, astag_l, props):
    """Total liquid/gas momentum vectors (sum over faces of |omega| m u n)."""
    wx = mesh.xface_volumes()
    wy = mesh.yface_volumes()
    ml = (astag_l.x * props.rho_l, astag_l.y * props.rho_l)
    mg = ((1 - astag_l.x) * props.rho_g, (1 - astag_l.y) * props.rho_g)
    pl = np.array([np.sum(wx * ml[0] * u_l.x), np.sum(wy * ml[1] * u_l.y)])
    pg = np.array([np.sum(wx * mg[0] * u_g.x), np.sum(wy * mg[1] * u_g.y)])
    return pl, pg
