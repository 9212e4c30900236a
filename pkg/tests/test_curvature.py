import numpy as np
import pytest

from sharpflow import init
from sharpflow.mesh import Mesh
from sharpflow.curvature import curvature_ghf, face_curvature
from sharpflow.plic import reconstruct_plic


def circle_kappa_error(n, R=0.3):
    mesh = Mesh(n, n, 1.0 / n)
    alpha = init.circle_fractions(mesh, 0.5, 0.5, R)
    g = reconstruct_plic(mesh, alpha)
    kappa, valid = curvature_ghf(mesh, alpha, g.normal, g.mixed)
    assert np.all(valid[g.mixed])
    err = np.abs(kappa[g.mixed] - 1.0 / R) * R
    return float(np.mean(err))


def test_flat_interface_zero_curvature():
    mesh = Mesh(8, 8, 0.125)
    alpha = init.halfplane_fractions(mesh, (0.0, 1.0), 0.5)
    g = reconstruct_plic(mesh, alpha)
    kappa, valid = curvature_ghf(mesh, alpha, g.normal, g.mixed)
    assert np.max(np.abs(kappa)) == pytest.approx(0.0, abs=1e-12)


def test_circle_curvature_sign_and_accuracy():
    # h = R/13, mean relative error below 5 percent, positive for a droplet
    R = 0.3
    n = int(round(13 / R))
    mesh = Mesh(n, n, 1.0 / n)
    alpha = init.circle_fractions(mesh, 0.5, 0.5, R)
    g = reconstruct_plic(mesh, alpha)
    kappa, valid = curvature_ghf(mesh, alpha, g.normal, g.mixed)
    vals = kappa[g.mixed]
    assert np.all(vals > 0)
    assert np.mean(np.abs(vals - 1.0 / R)) * R < 0.05


def test_circle_curvature_second_order():
    e1 = circle_kappa_error(32)
    e2 = circle_kappa_error(64)
    assert 3.0 <= e1 / e2 <= 5.0


def test_gas_bubble_negative_curvature():
    mesh = Mesh(32, 32, 1.0 / 32)
    alpha = init.circle_fractions(mesh, 0.5, 0.5, 0.3, liquid_inside=False)
    g = reconstruct_plic(mesh, alpha)
    kappa, _ = curvature_ghf(mesh, alpha, g.normal, g.mixed)
    assert np.all(kappa[g.mixed] < 0)


def test_face_curvature_averages_cells():
    mesh = Mesh(32, 32, 1.0 / 32)
    alpha = init.circle_fractions(mesh, 0.5, 0.5, 0.3)
    g = reconstruct_plic(mesh, alpha)
    kappa, valid = curvature_ghf(mesh, alpha, g.normal, g.mixed)
    kx, ky = face_curvature(mesh, kappa, valid)
    # every mixed face adjacent to a valid cell has a sensible value
    R = 0.3
    for arr, mask in ((kx, g.mixed_x), (ky, g.mixed_y)):
        vals = arr[mask]
        vals = vals[vals != 0.0]
        assert np.all(np.abs(vals * R - 1.0) < 0.2)
