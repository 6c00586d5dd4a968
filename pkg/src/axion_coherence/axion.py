"""Coherent axion dark-matter background.

All inputs and outputs are natural units (powers of eV) unless the function
name says otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .units import Quantity, density_GeV_cm3_to_eV4, length_inverse_eV_to_cm, value_of

LOCAL_DM_DENSITY_GEV_CM3 = 0.3
HALO_SPEED = 0.5e-3


def _unit_vector(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise DomainError(f"direction must be a 3-vector, got shape {d.shape}")
    return d


@dataclass(frozen=True)
class AxionBackground:
    m_a: float
    rho_dm: float = field(default_factory=lambda: density_GeV_cm3_to_eV4(LOCAL_DM_DENSITY_GEV_CM3).value)
    v_a: float = HALO_SPEED
    theta: float = 0.0
    direction: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "m_a", value_of(self.m_a, 1))
        object.__setattr__(self, "rho_dm", value_of(self.rho_dm, 4))
        if not self.m_a > 0:
            raise DomainError(f"axion mass must be positive, got {self.m_a!r}")
        if not self.rho_dm >= 0:
            raise DomainError(f"dark-matter density must be non-negative, got {self.rho_dm!r}")
        if not 0 <= self.v_a < 1:
            raise DomainError(f"axion speed must lie in [0, 1), got {self.v_a!r}")
        d = _unit_vector(self.direction)
        if abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise DomainError(f"direction must be a unit vector, |d| = {np.linalg.norm(d)!r}")
        object.__setattr__(self, "direction", tuple(float(x) for x in d))

    @classmethod
    def from_lab(cls, m_a_eV, rho_GeV_cm3=LOCAL_DM_DENSITY_GEV_CM3, **kwargs):
        return cls(m_a=m_a_eV, rho_dm=density_GeV_cm3_to_eV4(rho_GeV_cm3).value, **kwargs)

    @property
    def momentum(self) -> float:
        return self.m_a * self.v_a

    @property
    def momentum_vector(self) -> np.ndarray:
        return self.momentum * np.asarray(self.direction)

    @property
    def omega_p(self) -> float:
        return math.hypot(self.momentum, self.m_a)


@dataclass(frozen=True)
class CoherentAmplitude:
    """Single-mode coherent-state data: a0 = A e^{i theta} at momentum p."""

    a0: complex
    p: tuple
    omega_p: float

    @property
    def A(self) -> float:
        return abs(self.a0)

    @property
    def p_vector(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)

    def field_expectation(self, t, x=(0.0, 0.0, 0.0)):
        """<phi(t, x)> = Re(a0 e^{-i(omega_p t - p.x)}) = A cos(omega_p t - p.x - theta)."""
        phase = self.omega_p * np.asarray(t, dtype=float) - float(np.dot(self.p_vector, x))
        return np.real(self.a0 * np.exp(-1j * phase))


def amplitude(bg: AxionBackground) -> Quantity:
    return Quantity(math.sqrt(2.0 * bg.rho_dm) / bg.m_a, 1)


def energy_density(A, m_a) -> Quantity:
    A = value_of(A, 1)
    m_a = value_of(m_a, 1)
    return Quantity(0.5 * A**2 * m_a**2, 4)


def pressure(A, m_a, t) -> Quantity:
    """Instantaneous pressure of the oscillating field; averages to zero."""
    A = value_of(A, 1)
    m_a = value_of(m_a, 1)
    t = value_of(t, -1)
    return Quantity(-0.5 * A**2 * m_a**2 * math.cos(2.0 * m_a * t), 4)


def occupation_number(bg: AxionBackground) -> float:
    # n / k^3 with n = rho / m_a, no (2 pi)^3 phase-space factor
    if bg.v_a == 0:
        raise DomainError("occupation number diverges for an axion at rest (v_a = 0)")
    k = bg.m_a * bg.v_a
    return bg.rho_dm / (bg.m_a * k**3)


def de_broglie_wavelength(bg: AxionBackground) -> Quantity:
    if bg.v_a == 0:
        raise DomainError("de Broglie wavelength is infinite for v_a = 0")
    return Quantity(2.0 * math.pi / (bg.m_a * bg.v_a), -1)


def de_broglie_wavelength_cm(bg: AxionBackground) -> float:
    return length_inverse_eV_to_cm(de_broglie_wavelength(bg))


def coherent_amplitude(bg: AxionBackground) -> CoherentAmplitude:
    # The delta-function mode profile is never materialised: every mode
    # integral downstream is evaluated directly at k = p.
    a0 = amplitude(bg).value * cmath.exp(1j * bg.theta)
    return CoherentAmplitude(a0=a0, p=tuple(bg.momentum_vector), omega_p=bg.omega_p)
