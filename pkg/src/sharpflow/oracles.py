"""Closed-form linear-theory references and the manufactured Poisson problem.

Pure functions of the fluid properties; no discretisation anywhere. The
jump/sum conventions follow the rest of the package: jump = gas - liquid,
phase sum = gas + liquid.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


def capillary_timescale(props, wavelength):
    """T_sigma = sqrt((rho_l + rho_g) lambda^3 / (2 pi sigma))."""
    return float(np.sqrt(props.rho_sum * wavelength ** 3 / (TWO_PI * props.sigma)))


def gravity_timescale(props, wavelength):
    """T_g = sqrt((rho_l + rho_g)/(rho_l - rho_g) * 2 pi lambda / |g|)."""
    return float(np.sqrt(props.rho_sum / (props.rho_l - props.rho_g)
                         * TWO_PI * wavelength / props.g_norm))


def weber_number(props, jump_U, wavelength):
    """We = rho_g rho_l [[U]]^2 lambda / (2 pi sigma (rho_g + rho_l))."""
    return (props.rho_g * props.rho_l * jump_U ** 2 * wavelength
            / (TWO_PI * props.sigma * props.rho_sum))


def bond_number(props, wavelength):
    """Bo = (rho_l - rho_g) |g| lambda^2 / (4 pi^2 sigma) = (T_sigma/T_g)^2."""
    return ((props.rho_l - props.rho_g) * props.g_norm * wavelength ** 2
            / (4.0 * np.pi ** 2 * props.sigma))


def laplace_number(props, length):
    """La = sigma rho_l L / mu_l^2."""
    if props.mu_l == 0.0:
        return np.inf
    return props.sigma * props.rho_l * length / props.mu_l ** 2


def galilei_number(props, wavelength):
    """Ga = |g| lambda^3 rho_l^2 / mu_l^2."""
    if props.mu_l == 0.0:
        return np.inf
    return props.g_norm * wavelength ** 3 * props.rho_l ** 2 / props.mu_l ** 2


def droplet_period_2d(props, R, k):
    """Oscillation period of a 2D droplet, harmonic perturbation wavenumber k."""
    return TWO_PI * np.sqrt(props.rho_sum * R ** 3
                            / (props.sigma * k * (k + 1) * (k - 1)))


def droplet_period_3d(props, R, k):
    return TWO_PI * np.sqrt(((k + 1) * props.rho_l + k * props.rho_g) * R ** 3
                            / (props.sigma * k * (k + 1) * (k - 1) * (k + 2)))


def kh_dispersion(k, props, U_l, U_g):
    """Frequencies (aleph_+, aleph_-) of a sheared interface perturbation.

    aleph_pm = k <rho U>/<rho> +- (2 pi / T_sigma) sqrt(1 - We).
    """
    wavelength = TWO_PI / k
    T_sigma = capillary_timescale(props, wavelength)
    We = weber_number(props, U_g - U_l, wavelength)
    drift = k * (props.rho_g * U_g + props.rho_l * U_l) / props.rho_sum
    root = (TWO_PI / T_sigma) * np.sqrt(complex(1.0 - We))
    return drift + root, drift - root


def rt_dispersion(k, props):
    """Frequencies under gravity: aleph_pm = +-(2 pi / T_sigma) sqrt(1 - Bo)."""
    wavelength = TWO_PI / k
    T_sigma = capillary_timescale(props, wavelength)
    Bo = bond_number(props, wavelength)
    root = (TWO_PI / T_sigma) * np.sqrt(complex(1.0 - Bo))
    return root, -root


def is_unstable(aleph, tol=1e-12):
    """Exponential growth iff the frequency has a nonzero imaginary part."""
    return abs(aleph.imag) > tol


def amplitude_model(t, aleph_plus, aleph_minus, delta0):
    """delta(t) = delta0 (e^{-i aleph_+ t} + e^{-i aleph_- t})/2 (real part)."""
    t = np.asarray(t, float)
    val = 0.5 * (np.exp(-1j * aleph_plus * t) + np.exp(-1j * aleph_minus * t))
    return delta0 * val.real


def kh_most_unstable_wavelength(U_tau, props):
    """lambda_KH = 3 pi sigma (rho_l + rho_g) / (rho_g rho_l U_tau^2)."""
    return 3.0 * np.pi * props.sigma * props.rho_sum / (
        props.rho_g * props.rho_l * U_tau ** 2)


def blasius_thickness(tau, U_tau, props):
    """0.99 shear-layer thickness 4.91 sqrt(mu_g tau / (rho_g U_tau))."""
    return 4.91 * np.sqrt(props.mu_g * tau / (props.rho_g * U_tau))


@dataclass
class ManufacturedPoisson:
    """Closed-form pressure-projection problem on [0,1]^2.

    Liquid inside the circle of radius R centred at (1/2, 1/2). The exact
    pressure is unique up to a constant; the predictor u*** is the exact
    velocity plus the per-phase scaled pressure gradient (unit time step),
    so the projected field is divergence free and normal-continuous.
    """

    rho_ratio: float
    sigma: float = 0.1
    R: float = 0.3
    rho_l: float = 1.0

    @property
    def rho_g(self):
        return self.rho_l * self.rho_ratio

    def inside(self, x, y):
        return (x - 0.5) ** 2 + (y - 0.5) ** 2 <= self.R ** 2

    def pressure(self, x, y):
        base = x - y
        r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
        bump = self.sigma / self.R + 40.0 * (r2 - self.R ** 2) * (x - y)
        return np.where(self.inside(x, y), base + bump, base)

    def grad_pressure_phase(self, x, y, phase):
        """Branch-wise pressure gradient (each phase's smooth extension)."""
        if phase == "g":
            return np.ones_like(x), -np.ones_like(np.asarray(y, float))
        r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
        gx = 1.0 + 40.0 * (2.0 * (x - 0.5) * (x - y) + (r2 - self.R ** 2))
        gy = -1.0 + 40.0 * (2.0 * (y - 0.5) * (x - y) - (r2 - self.R ** 2))
        return gx, gy

    def velocity_phase(self, x, y, phase):
        """Exact projected velocity branches: azimuthal liquid, zero gas."""
        if phase == "g":
            z = np.zeros_like(np.asarray(x, float))
            return z, z.copy()
        r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2
        c = np.cos(TWO_PI * r2)
        return c * 2.0 * (y - 0.5), -c * 2.0 * (x - 0.5)

    def velocity(self, x, y):
        """Exact projected velocity with the sharp phase switch."""
        ulx, uly = self.velocity_phase(x, y, "l")
        inside = self.inside(x, y)
        return np.where(inside, ulx, 0.0), np.where(inside, uly, 0.0)

    def predictor(self, x, y, phase):
        """u*** per phase: exact velocity + (1/rho^pi) grad p^pi (unit dt)."""
        gx, gy = self.grad_pressure_phase(x, y, phase)
        rho = self.rho_l if phase == "l" else self.rho_g
        ux, uy = self.velocity_phase(x, y, phase)
        return ux + gx / rho, uy + gy / rho

    def tangential_gradient_jump(self, tau_x, tau_y):
        """[[rho^{-1} d_tau p]] = [[1/rho]] (tau_x - tau_y) at the interface."""
        return (1.0 / self.rho_g - 1.0 / self.rho_l) * (tau_x - tau_y)
