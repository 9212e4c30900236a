"""Generalised height-function curvature on mixed cells.

Column sums of the liquid fraction along the dominant interface-normal
direction give a discrete height function; its second difference gives the
curvature (positive for convex liquid). Cells without a valid column fall
back to the average of neighbouring valid curvatures, then to zero.
"""

import logging

import numpy as np

from .plic import _padded_alpha

log = logging.getLogger(__name__)

_COL = 3  # half-height of the summation column


def curvature_ghf(mesh, alpha, normal, mixed):
    """Curvature per mixed cell.

    Returns (kappa, valid) where kappa is zero outside mixed cells and valid
    marks cells with a direct height-function estimate or neighbour average.
    """
    ap = _padded_alpha(mesh, alpha, _COL)
    h = mesh.h
    kappa = np.zeros_like(alpha)
    valid = np.zeros(alpha.shape, dtype=bool)
    mi, mj = np.nonzero(mixed)
    for i, j in zip(mi, mj):
        n = normal[i, j]
        vertical = abs(n[1]) >= abs(n[0])
        k = _column_curvature(ap, i + _COL, j + _COL, h, vertical)
        if k is None:
            k = _column_curvature(ap, i + _COL, j + _COL, h, not vertical)
        if k is not None:
            kappa[i, j] = k
            valid[i, j] = True

    # neighbour-average fallback for the remaining mixed cells
    for _ in range(2):
        missing = mixed & ~valid
        if not np.any(missing):
            break
        fi, fj = np.nonzero(missing)
        newly = []
        for i, j in zip(fi, fj):
            acc = []
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1),
                           (1, 1), (1, -1), (-1, 1), (-1, -1)):
                ci, cj = i + di, j + dj
                if not mesh.cell_in_domain(ci, cj):
                    continue
                ci, cj = mesh.wrap_i(ci), mesh.wrap_j(cj)
                if valid[ci, cj]:
                    acc.append(kappa[ci, cj])
            if acc:
                newly.append((i, j, float(np.mean(acc))))
        for i, j, k in newly:
            kappa[i, j] = k
            valid[i, j] = True
        if not newly:
            break
    leftover = int(np.sum(mixed & ~valid))
    if leftover:
        log.warning("curvature: %d mixed cells without valid height column, "
                    "using kappa = 0", leftover)
    return kappa, valid


def _column_curvature(ap, pi, pj, h, vertical):
    """Height-function curvature at padded index (pi, pj), or None."""
    heights = np.empty(3)
    for t in (-1, 0, 1):
        if vertical:
            col = ap[pi + t, pj - _COL:pj + _COL + 1]
        else:
            col = ap[pi - _COL:pi + _COL + 1, pj + t]
        if np.any(np.isnan(col)):
            return None
        # the column must bracket the interface: pure and distinct ends
        e0, e1 = col[0], col[-1]
        if min(e0, e1) > 1e-9 or max(e0, e1) < 1.0 - 1e-9 or abs(e0 - e1) < 0.5:
            return None
        heights[t + 1] = np.sum(col) * h
    d1 = (heights[2] - heights[0]) / (2.0 * h)
    d2 = (heights[2] - 2.0 * heights[1] + heights[0]) / (h * h)
    return -d2 / (1.0 + d1 * d1) ** 1.5


def face_curvature(mesh, kappa, valid):
    """Average adjacent valid cell curvatures onto faces (0 when none)."""
    num = np.where(valid, kappa, 0.0)
    den = valid.astype(float)

    def avg(np_roll_axis, per, nf_shape):
        if per:
            s = num + np.roll(num, 1, axis=np_roll_axis)
            d = den + np.roll(den, 1, axis=np_roll_axis)
        else:
            s = np.zeros(nf_shape)
            d = np.zeros(nf_shape)
            if np_roll_axis == 0:
                s[1:-1], d[1:-1] = num[1:] + num[:-1], den[1:] + den[:-1]
                s[0], d[0] = num[0], den[0]
                s[-1], d[-1] = num[-1], den[-1]
            else:
                s[:, 1:-1], d[:, 1:-1] = num[:, 1:] + num[:, :-1], den[:, 1:] + den[:, :-1]
                s[:, 0], d[:, 0] = num[:, 0], den[:, 0]
                s[:, -1], d[:, -1] = num[:, -1], den[:, -1]
        return np.divide(s, d, out=np.zeros_like(s), where=d > 0)

    kx = avg(0, mesh.per_x, (mesh.nfx, mesh.ny))
    ky = avg(1, mesh.per_y, (mesh.nx, mesh.nfy))
    return kx, ky
