"""Uniform 2D staggered mesh and the mimetic discrete operators.

Cell-centred scalars live on (nx, ny) arrays. Face-normal vector components
live on two families: x-normal faces of shape (nfx, ny) and y-normal faces of
shape (nx, nfy), where the boundary faces are dropped on periodic axes
(nfx = nx) and kept on wall axes (nfx = nx + 1). Staggered-tensor entries
live at cell centres (diagonal) and at cell corners/nodes (off-diagonal).

Boundary conditions per axis are either 'periodic' or free-slip 'wall'
(u_n = 0, homogeneous Neumann for scalars and tangential velocity).
"""

import numpy as np

PERIODIC = "periodic"
WALL = "wall"


class Mesh:
    """Uniform square-cell staggered mesh on [x0, x0+nx*h] x [y0, y0+ny*h]."""

    def __init__(self, nx, ny, h, x0=0.0, y0=0.0, bc_x=PERIODIC, bc_y=PERIODIC):
        if bc_x not in (PERIODIC, WALL) or bc_y not in (PERIODIC, WALL):
            raise ValueError(f"unknown boundary condition: {bc_x!r}/{bc_y!r}")
        self.nx = int(nx)
        self.ny = int(ny)
        self.h = float(h)
        self.x0 = float(x0)
        self.y0 = float(y0)
        self.bc_x = bc_x
        self.bc_y = bc_y
        self.per_x = bc_x == PERIODIC
        self.per_y = bc_y == PERIODIC
        self.nfx = self.nx if self.per_x else self.nx + 1
        self.nfy = self.ny if self.per_y else self.ny + 1
        self.cell_volume = self.h * self.h
        self.face_area = self.h

    # -- coordinates ----------------------------------------------------

    @property
    def lx(self):
        return self.nx * self.h

    @property
    def ly(self):
        return self.ny * self.h

    def cell_centers(self):
        """Arrays (nx, ny) of cell centroid coordinates."""
        x = self.x0 + (np.arange(self.nx) + 0.5) * self.h
        y = self.y0 + (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def xface_centers(self):
        x = self.x0 + np.arange(self.nfx) * self.h
        y = self.y0 + (np.arange(self.ny) + 0.5) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def yface_centers(self):
        x = self.x0 + (np.arange(self.nx) + 0.5) * self.h
        y = self.y0 + np.arange(self.nfy) * self.h
        return np.meshgrid(x, y, indexing="ij")

    def cell_box(self, i, j):
        """(x0, y0, x1, y1) of cell (i, j)."""
        x = self.x0 + i * self.h
        y = self.y0 + j * self.h
        return x, y, x + self.h, y + self.h

    # -- staggered volumes and boundary masks ---------------------------

    def xface_volumes(self):
        """|omega_f| for the x-face family (halved on wall boundary faces)."""
        w = np.full((self.nfx, self.ny), self.cell_volume)
        if not self.per_x:
            w[0, :] *= 0.5
            w[-1, :] *= 0.5
        return w

    def yface_volumes(self):
        w = np.full((self.nx, self.nfy), self.cell_volume)
        if not self.per_y:
            w[:, 0] *= 0.5
            w[:, -1] *= 0.5
        return w

    def xface_is_boundary(self):
        m = np.zeros((self.nfx, self.ny), dtype=bool)
        if not self.per_x:
            m[0, :] = True
            m[-1, :] = True
        return m

    def yface_is_boundary(self):
        m = np.zeros((self.nx, self.nfy), dtype=bool)
        if not self.per_y:
            m[:, 0] = True
            m[:, -1] = True
        return m

    # -- index wrapping --------------------------------------------------

    def wrap_i(self, i):
        return i % self.nx if self.per_x else i

    def wrap_j(self, j):
        return j % self.ny if self.per_y else j

    def cell_in_domain(self, i, j):
        ok_x = self.per_x or (0 <= i < self.nx)
        ok_y = self.per_y or (0 <= j < self.ny)
        return ok_x and ok_y


class FaceField:
    """Face-normal components on both face families."""

    __slots__ = ("mesh", "x", "y")

    def __init__(self, mesh, x=None, y=None):
        self.mesh = mesh
        self.x = np.zeros((mesh.nfx, mesh.ny)) if x is None else np.asarray(x, float)
        self.y = np.zeros((mesh.nx, mesh.nfy)) if y is None else np.asarray(y, float)
        if self.x.shape != (mesh.nfx, mesh.ny) or self.y.shape != (mesh.nx, mesh.nfy):
            raise ValueError("face field shape does not match mesh")

    def copy(self):
        return FaceField(self.mesh, self.x.copy(), self.y.copy())

    def fill(self, value):
        self.x.fill(value)
        self.y.fill(value)
        return self

    def zero_boundary(self):
        """Zero the wall-boundary normal components (no-penetration)."""
        if not self.mesh.per_x:
            self.x[0, :] = 0.0
            self.x[-1, :] = 0.0
        if not self.mesh.per_y:
            self.y[:, 0] = 0.0
            self.y[:, -1] = 0.0
        return self

    def max_abs(self):
        mx = np.max(np.abs(self.x)) if self.x.size else 0.0
        my = np.max(np.abs(self.y)) if self.y.size else 0.0
        return max(mx, my)

    def __add__(self, other):
        return FaceField(self.mesh, self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return FaceField(self.mesh, self.x - other.x, self.y - other.y)

    def __mul__(self, s):
        return FaceField(self.mesh, self.x * s, self.y * s)

    __rmul__ = __mul__


class EdgeTensorField:
    """Staggered tensor: xx, yy at cell centres; xy, yx at nodes."""

    __slots__ = ("mesh", "xx", "yy", "xy", "yx")

    def __init__(self, mesh, xx=None, yy=None, xy=None, yx=None):
        self.mesh = mesh
        cshape = (mesh.nx, mesh.ny)
        nshape = (mesh.nfx, mesh.nfy)
        self.xx = np.zeros(cshape) if xx is None else np.asarray(xx, float)
        self.yy = np.zeros(cshape) if yy is None else np.asarray(yy, float)
        self.xy = np.zeros(nshape) if xy is None else np.asarray(xy, float)
        self.yx = np.zeros(nshape) if yx is None else np.asarray(yx, float)

    def copy(self):
        return EdgeTensorField(
            self.mesh, self.xx.copy(), self.yy.copy(), self.xy.copy(), self.yx.copy()
        )


# ---------------------------------------------------------------------------
# mimetic operators
# ---------------------------------------------------------------------------


def div(mesh, u):
    """Cell divergence: (div u)_c = (1/|c|) sum_f o_{c,f} |f| u_f."""
    if u.x.shape != (mesh.nfx, mesh.ny):
        raise ValueError("face field does not match mesh")
    if mesh.per_x:
        dux = np.roll(u.x, -1, axis=0) - u.x
    else:
        dux = u.x[1:, :] - u.x[:-1, :]
    if mesh.per_y:
        duy = np.roll(u.y, -1, axis=1) - u.y
    else:
        duy = u.y[:, 1:] - u.y[:, :-1]
    return (dux + duy) / mesh.h


def grad(mesh, p):
    """Face gradient, the negative adjoint of div.

    Zero on wall boundary faces (homogeneous Neumann).
    """
    g = FaceField(mesh)
    if mesh.per_x:
        g.x[:] = (p - np.roll(p, 1, axis=0)) / mesh.h
    else:
        g.x[1:-1, :] = (p[1:, :] - p[:-1, :]) / mesh.h
    if mesh.per_y:
        g.y[:] = (p - np.roll(p, 1, axis=1)) / mesh.h
    else:
        g.y[:, 1:-1] = (p[:, 1:] - p[:, :-1]) / mesh.h
    return g


def face_average(mesh, q):
    """Volume-weighted two-cell average of a cell field onto faces.

    This is the staggered-fraction rule; on wall boundary faces the single
    neighbouring cell value is used (the staggered volume is halved there).
    """
    a = FaceField(mesh)
    if mesh.per_x:
        a.x[:] = 0.5 * (q + np.roll(q, 1, axis=0))
    else:
        a.x[1:-1, :] = 0.5 * (q[1:, :] + q[:-1, :])
        a.x[0, :] = q[0, :]
        a.x[-1, :] = q[-1, :]
    if mesh.per_y:
        a.y[:] = 0.5 * (q + np.roll(q, 1, axis=1))
    else:
        a.y[:, 1:-1] = 0.5 * (q[:, 1:] + q[:, :-1])
        a.y[:, 0] = q[:, 0]
        a.y[:, -1] = q[:, -1]
    return a


def node_average(mesh, q):
    """Arithmetic average of a cell field onto nodes (up to 4 neighbours)."""
    if mesh.per_x:
        qx = 0.5 * (q + np.roll(q, 1, axis=0))
    else:
        qx = np.empty((mesh.nfx, mesh.ny))
        qx[1:-1, :] = 0.5 * (q[1:, :] + q[:-1, :])
        qx[0, :] = q[0, :]
        qx[-1, :] = q[-1, :]
    if mesh.per_y:
        return 0.5 * (qx + np.roll(qx, 1, axis=1))
    out = np.empty((mesh.nfx, mesh.nfy))
    out[:, 1:-1] = 0.5 * (qx[:, 1:] + qx[:, :-1])
    out[:, 0] = qx[:, 0]
    out[:, -1] = qx[:, -1]
    return out


def stag_grad(mesh, u):
    """Staggered gradient: diagonal entries at cells, off-diagonal at nodes.

    Exact for linear face-sampled fields; at free-slip walls the tangential
    normal-derivative entries are zero.
    """
    h = mesh.h
    T = EdgeTensorField(mesh)
    # d u_x / d x and d u_y / d y at cell centres
    if mesh.per_x:
        T.xx[:] = (np.roll(u.x, -1, axis=0) - u.x) / h
    else:
        T.xx[:] = (u.x[1:, :] - u.x[:-1, :]) / h
    if mesh.per_y:
        T.yy[:] = (np.roll(u.y, -1, axis=1) - u.y) / h
    else:
        T.yy[:] = (u.y[:, 1:] - u.y[:, :-1]) / h
    # d u_x / d y at nodes
    if mesh.per_y:
        T.xy[:] = (u.x - np.roll(u.x, 1, axis=1)) / h
    else:
        T.xy[:, 1:-1] = (u.x[:, 1:] - u.x[:, :-1]) / h
    # d u_y / d x at nodes
    if mesh.per_x:
        T.yx[:] = (u.y - np.roll(u.y, 1, axis=0)) / h
    else:
        T.yx[1:-1, :] = (u.y[1:, :] - u.y[:-1, :]) / h
    return T


def strain(mesh, u):
    """Symmetric part of stag_grad; off-diagonals are collocated at nodes."""
    T = stag_grad(mesh, u)
    off = 0.5 * (T.xy + T.yx)
    T.xy = off
    T.yx = off.copy()
    return T


def stag_div(mesh, T):
    """Staggered divergence over the faces of each staggered control volume.

    Returns a FaceField; zero on wall boundary faces (their normal velocity
    is prescribed, no update is ever applied there).
    """
    h = mesh.h
    out = FaceField(mesh)
    # x-faces: x-difference of xx (cell values) + y-difference of xy (nodes)
    if mesh.per_x:
        dxx = T.xx - np.roll(T.xx, 1, axis=0)
    else:
        dxx = np.zeros((mesh.nfx, mesh.ny))
        dxx[1:-1, :] = T.xx[1:, :] - T.xx[:-1, :]
    if mesh.per_y:
        dxy = np.roll(T.xy, -1, axis=1) - T.xy
    else:
        dxy = T.xy[:, 1:] - T.xy[:, :-1]
    out.x[:] = (dxx + dxy) / h
    # y-faces
    if mesh.per_y:
        dyy = T.yy - np.roll(T.yy, 1, axis=1)
    else:
        dyy = np.zeros((mesh.nx, mesh.nfy))
        dyy[:, 1:-1] = T.yy[:, 1:] - T.yy[:, :-1]
    if mesh.per_x:
        dyx = np.roll(T.yx, -1, axis=0) - T.yx
    else:
        dyx = T.yx[1:, :] - T.yx[:-1, :]
    out.y[:] = (dyy + dyx) / h
    out.zero_boundary()
    return out


def integrate_cells(mesh, q):
    """sum_C |c| q_c."""
    return mesh.cell_volume * float(np.sum(q))


def integrate_faces(mesh, u, v=None):
    """sum_F |omega_f| u_f v_f (v defaults to 1)."""
    wx = mesh.xface_volumes()
    wy = mesh.yface_volumes()
    if v is None:
        return float(np.sum(wx * u.x) + np.sum(wy * u.y))
    return float(np.sum(wx * u.x * v.x) + np.sum(wy * u.y * v.y))


def boundary_flux(mesh, u):
    """sum over boundary faces of |f| u_f with outward-pointing normals."""
    total = 0.0
    if not mesh.per_x:
        total += mesh.face_area * (np.sum(u.x[-1, :]) - np.sum(u.x[0, :]))
    if not mesh.per_y:
        total += mesh.face_area * (np.sum(u.y[:, -1]) - np.sum(u.y[:, 0]))
    return total
