"""Frequency extraction from interface-amplitude time series.

The measured amplitude is fitted against the two-mode linear model
delta(t) = delta0 Re[(e^{-i aleph_+ t} + e^{-i aleph_- t})/2] with
aleph_pm = mu +- nu (mu real drift, nu complex), by Nelder-Mead started
from the analytic dispersion value.
"""

import numpy as np
from scipy.optimize import minimize


def model_amplitude(t, mu, nu_r, nu_i, delta0):
    """Re[e^{-i mu t} cos((nu_r + i nu_i) t)] delta0."""
    t = np.asarray(t, float)
    re_cos = np.cos(nu_r * t) * np.cosh(nu_i * t)
    im_cos = -np.sin(nu_r * t) * np.sinh(nu_i * t)
    return delta0 * (np.cos(mu * t) * re_cos + np.sin(mu * t) * im_cos)


def fit_frequency(t, amplitude, delta0, guess_plus, guess_minus):
    """Fit aleph_pm to the measured series; returns (plus, minus, cost).

    The guesses usually come from the analytic dispersion relation.
    Raises RuntimeError when the optimiser fails to converge.
    """
    t = np.asarray(t, float)
    amplitude = np.asarray(amplitude, float)
    if len(t) < 4:
        raise ValueError("need at least four samples to fit")
    mu0 = 0.5 * (guess_plus + guess_minus)
    nu0 = 0.5 * (guess_plus - guess_minus)
    x0 = np.array([mu0.real, nu0.real, nu0.imag])
    dt = np.gradient(t)

    def cost(x):
        m = model_amplitude(t, x[0], x[1], x[2], delta0)
        return float(np.sum((amplitude - m) ** 2 * dt))

    best = minimize(cost, x0, method="Nelder-Mead",
                    options={"xatol": 1e-10, "fatol": 1e-16,
                             "maxiter": 4000, "maxfev": 8000})
    # restart once from the optimum; Nelder-Mead stalls on narrow valleys
    best = minimize(cost, best.x, method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-18,
                             "maxiter": 4000, "maxfev": 8000})
    if not np.isfinite(best.fun):
        raise RuntimeError(f"frequency fit failed: {best.message}")
    mu, nu_r, nu_i = best.x
    # the model is even in nu: normalise the sign
    if nu_r < 0 or (nu_r == 0 and nu_i < 0):
        nu_r, nu_i = -nu_r, -nu_i
    nu = nu_r + 1j * nu_i
    return mu + nu, mu - nu, float(best.fun)
