"""Inertial Unruh-DeWitt detector with Gaussian switching and smearing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .axion import CoherentAmplitude
from .errors import DomainError, PointLimitError
from .units import Quantity, gamma_from_speed, speed_from_gamma, value_of


@dataclass(frozen=True)
class DetectorConfig:
    """Energy gap ``Omega`` (eV), duration ``T`` (1/eV), size ``R`` (1/eV),
    3-velocity, and coupling ``lam`` (eV^-2)."""

    Omega: float
    T: float
    R: float = 0.0
    velocity: tuple = (0.0, 0.0, 0.0)
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "Omega", value_of(self.Omega, 1))
        object.__setattr__(self, "T", value_of(self.T, -1))
        object.__setattr__(self, "R", value_of(self.R, -1))
        object.__setattr__(self, "lam", value_of(self.lam, -2))
        v = np.asarray(self.velocity, dtype=float)
        if v.shape != (3,):
            raise DomainError(f"velocity must be a 3-vector, got shape {v.shape}")
        object.__setattr__(self, "velocity", tuple(float(x) for x in v))
        if not self.Omega > 0:
            raise DomainError(f"energy gap must be positive, got {self.Omega!r}")
        if not self.T > 0:
            raise DomainError(f"interaction duration must be positive, got {self.T!r}")
        if not self.R >= 0:
            raise DomainError(f"detector size must be non-negative, got {self.R!r}")
        if not self.lam >= 0:
            raise DomainError(f"coupling must be non-negative, got {self.lam!r}")
        if not self.speed < 1:
            raise DomainError(f"detector speed must be below 1, got {self.speed!r}")

    @classmethod
    def with_gamma(cls, gamma, axis=(1.0, 0.0, 0.0), **kwargs):
        """Detector moving along ``axis`` (unit vector) with Lorentz factor ``gamma``."""
        speed = speed_from_gamma(gamma)
        return cls(velocity=tuple(speed * np.asarray(axis, dtype=float)), **kwargs)

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))

    @property
    def gamma(self) -> float:
        return gamma_from_speed(self.speed)


def switching(cfg: DetectorConfig, tau):
    """chi(tau) = exp(-tau^2 / (pi T^2)) / (pi T); unit area."""
    tau = np.asarray(tau)
    return np.exp(-(tau**2) / (math.pi * cfg.T**2)) / (math.pi * cfg.T)


def switching_width(cfg: DetectorConfig) -> float:
    """Standard deviation of the switching Gaussian, sqrt(pi/2) T."""
    return math.sqrt(math.pi / 2.0) * cfg.T


def smearing(cfg: DetectorConfig, xi):
    """f(xi) = exp(-|xi|^2 / (pi R^2)) / (pi R)^3.

    ``xi`` has shape (..., 3).  Raises PointLimitError for R = 0; the point
    detector only enters through :func:`smearing_fourier`.
    """
    if cfg.R == 0:
        raise PointLimitError("smearing is a delta function for R = 0; use smearing_fourier")
    xi = np.asarray(xi, dtype=float)
    r2 = np.sum(xi**2, axis=-1)
    return np.exp(-r2 / (math.pi * cfg.R**2)) / (math.pi * cfg.R) ** 3


def smearing_fourier(cfg: DetectorConfig, k):
    """Fourier transform of the smearing profile, exp(-pi R^2 |k|^2 / 4).

    Equals 1 for a point detector (R = 0).
    """
    k = np.asarray(k, dtype=float)
    k2 = np.sum(k**2, axis=-1)
    return np.exp(-math.pi * cfg.R**2 * k2 / 4.0)


def doppler_frequency(cfg: DetectorConfig, amp: CoherentAmplitude) -> Quantity:
    """gamma (omega_p - p.v): the mode frequency in the detector's proper time.

    This is the magnitude |p.u| of the four-product along the worldline
    x(tau) = u tau, u = gamma (1, v).  It is positive for any massive mode.
    """
    pv = float(np.dot(amp.p_vector, cfg.velocity))
    return Quantity(cfg.gamma * (amp.omega_p - pv), 1)
