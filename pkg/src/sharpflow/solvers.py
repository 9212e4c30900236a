"""Sparse linear solves: ILU-preconditioned Krylov with a direct fallback."""

import logging

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import LinearOperator, bicgstab, gmres, spilu, splu

log = logging.getLogger(__name__)


class SolveInfo:
    __slots__ = ("iterations", "residual", "method")

    def __init__(self, iterations, residual, method):
        self.iterations = iterations
        self.residual = residual
        self.method = method


def solve_sparse(A, b, rtol=1e-12, maxiter=2000):
    """Solve A x = b; BiCGStab + ILU, then GMRES, then direct LU.

    Rows are equilibrated first so the convergence criterion is row-relative
    (the coupled pressure/jump systems mix very different row scales).
    """
    A = csc_matrix(A)
    row_max = np.asarray(abs(A).max(axis=1).todense()).ravel()
    row_max[row_max == 0.0] = 1.0
    R = 1.0 / row_max
    A = csc_matrix(A.multiply(R[:, None]))
    b = b * R
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros_like(b), SolveInfo(0, 0.0, "trivial")
    atol = rtol * bnorm
    M = None
    try:
        ilu = spilu(A, drop_tol=1e-8, fill_factor=20)
        M = LinearOperator(A.shape, ilu.solve)
    except RuntimeError:
        log.debug("spilu failed, trying unpreconditioned Krylov")
    count = [0]

    def cb(_):
        count[0] += 1

    x, info = bicgstab(A, b, rtol=rtol, atol=atol, maxiter=maxiter, M=M,
                       callback=cb)
    res = float(np.linalg.norm(A @ x - b))
    if info == 0 and res <= atol:
        return x, SolveInfo(count[0], res, "bicgstab")
    count_g = [0]

    def cbg(_):
        count_g[0] += 1

    x, info = gmres(A, b, rtol=rtol, atol=atol, maxiter=maxiter, M=M,
                    callback=cbg, callback_type="pr_norm")
    res = float(np.linalg.norm(A @ x - b))
    if info == 0 and res <= atol:
        return x, SolveInfo(count[0] + count_g[0], res, "gmres")
    lu = splu(A)
    x = lu.solve(b)
    # one step of iterative refinement for near-singular scalings
    x += lu.solve(b - A @ x)
    res = float(np.linalg.norm(A @ x - b))
    return x, SolveInfo(count[0] + count_g[0], res, "direct")
