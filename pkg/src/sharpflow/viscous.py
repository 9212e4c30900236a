"""Implicit-midpoint diffusion acting on the mass-averaged velocity.

The stress tensor is mu~ * (grad w + grad w^T) with w = u* + u**, the
geometric-mean viscosity living on the staggered tensor locations. Both
phases then receive the same stag_div(T)/<alpha~ rho> increment, so the
velocity jump is untouched by this step.
"""

import numpy as np
from scipy.sparse.linalg import LinearOperator, bicgstab, gmres

from .mesh import FaceField, EdgeTensorField, node_average, stag_div, stag_grad


def viscosity_mean(mesh, alpha, mu_l, mu_g):
    """Weighted geometric mean of the phase viscosities.

    Returns (mu_cell, mu_node): values at cell centres (for the diagonal
    stress entries) and at nodes (off-diagonal entries).
    """
    if mu_l <= 0.0 or mu_g <= 0.0:
        raise ValueError("geometric viscosity mean requires positive viscosities")
    log_l = np.log(mu_l)
    log_g = np.log(mu_g)
    mu_cell = np.exp(alpha * log_l + (1.0 - alpha) * log_g)
    a_node = node_average(mesh, alpha)
    mu_node = np.exp(a_node * log_l + (1.0 - a_node) * log_g)
    return mu_cell, mu_node


def _stress(mesh, u, mu_cell, mu_node):
    G = stag_grad(mesh, u)
    T = EdgeTensorField(mesh)
    T.xx = mu_cell * G.xx
    T.yy = mu_cell * G.yy
    off = 0.5 * (G.xy + G.yx)
    T.xy = mu_node * off
    T.yx = mu_node * off
    return T


def diffuse(mesh, u_bar, mass, mu_cell, mu_node, dt, rtol=1e-12, maxiter=500):
    """Implicit midpoint diffusion step of the mass-averaged velocity.

    mass is the intensive staggered mass <alpha~ rho> (always positive).
    Returns (u_bar_new, T, iterations) where T is the stress built from
    u* + u** for the per-phase updates.
    """
    nx_dof = u_bar.x.size
    n_dof = nx_dof + u_bar.y.size

    def pack(ff):
        return np.concatenate([ff.x.ravel(), ff.y.ravel()])

    def unpack(v):
        ff = FaceField(mesh,
                       v[:nx_dof].reshape(u_bar.x.shape).copy(),
                       v[nx_dof:].reshape(u_bar.y.shape).copy())
        return ff

    def L(ff):
        T = _stress(mesh, ff, mu_cell, mu_node)
        d = stag_div(mesh, T)
        out = FaceField(mesh, dt * d.x / mass.x, dt * d.y / mass.y)
        out.zero_boundary()
        return out

    def matvec(v):
        ff = unpack(v)
        ff.zero_boundary()
        return pack(ff - L(ff))

    A = LinearOperator((n_dof, n_dof), matvec=matvec)
    ub = u_bar.copy()
    ub.zero_boundary()
    b = pack(ub + L(ub))
    count = [0]

    def cb(_):
        count[0] += 1

    x, info = bicgstab(A, b, x0=pack(ub), rtol=rtol,
                       atol=rtol * max(np.linalg.norm(b), 1e-300),
                       maxiter=maxiter, callback=cb)
    if info != 0:
        x, info = gmres(A, b, x0=x, rtol=rtol,
                        atol=rtol * max(np.linalg.norm(b), 1e-300),
                        maxiter=maxiter)
        if info != 0:
            raise RuntimeError(f"diffusion solve did not converge (info={info})")
    u_new = unpack(x)
    u_new.zero_boundary()
    w = u_bar + u_new  # midpoint argument (u* + u**)
    T = _stress(mesh, w, mu_cell, mu_node)
    return u_new, T, count[0]


def kinetic_energy(mesh, u_l, u_g, astag_l, props):
    """E_k = 1/2 sum_F |omega| <alpha~ rho u^2>."""
    wx = mesh.xface_volumes()
    wy = mesh.yface_volumes()
    ex = wx * (astag_l.x * props.rho_l * u_l.x ** 2
               + (1.0 - astag_l.x) * props.rho_g * u_g.x ** 2)
    ey = wy * (astag_l.y * props.rho_l * u_l.y ** 2
               + (1.0 - astag_l.y) * props.rho_g * u_g.y ** 2)
    return 0.5 * float(np.sum(ex) + np.sum(ey))
