"""Fluid properties and the jump/sum notation used throughout.

jump(q) = q_gas - q_liquid, phase_sum(q) = q_gas + q_liquid.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class FluidProps:
    """Densities, viscosities, surface tension and gravity vector."""

    rho_l: float
    rho_g: float
    mu_l: float = 0.0
    mu_g: float = 0.0
    sigma: float = 0.0
    gravity: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        self.gravity = np.asarray(self.gravity, float)
        if self.rho_l <= 0.0 or self.rho_g <= 0.0:
            raise ValueError("densities must be positive")
        if self.mu_l < 0.0 or self.mu_g < 0.0 or self.sigma < 0.0:
            raise ValueError("viscosities and surface tension must be non-negative")

    @property
    def density_ratio(self):
        return self.rho_g / self.rho_l

    @property
    def viscosity_ratio(self):
        return self.mu_g / self.mu_l if self.mu_l > 0 else np.inf

    @property
    def rho_sum(self):
        return self.rho_l + self.rho_g

    @property
    def rho_jump(self):
        return self.rho_g - self.rho_l

    @property
    def g_norm(self):
        return float(np.hypot(*self.gravity))

    @property
    def viscous(self):
        return self.mu_l > 0.0 or self.mu_g > 0.0
