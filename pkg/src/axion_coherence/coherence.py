"""Reduced detector state, l1 coherence, and the closed-form harvested coherence."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .axion import AxionBackground, CoherentAmplitude, coherent_amplitude
from .detector import DetectorConfig, doppler_frequency
from .errors import DomainError, PerturbativityError, PerturbativityWarning, RegimeError
from .response import ResponsePair, response_analytic
from .units import Quantity, density_GeV_cm3_to_eV4, seconds_to_inverse_eV

PERTURBATIVE_WARN = 0.1
PERTURBATIVE_MAX = 1.0
LONGTIME_MIN_X = 10.0

# axion-electron coupling bound (red giants) in units of 1/m_e, and m_e
G_AE_BOUND = 3.3e-13
ELECTRON_MASS_EV = 0.5e6


class Regime(Enum):
    EXACT = "exact"
    LONG_TIME = "long_time"


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 detector state in the basis (|g>, |e>)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) > 1e-12:
            raise DomainError(f"density matrix trace is {np.trace(m)!r}, expected 1")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def excited_population(self) -> float:
        return float(self.entries[1, 1].real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True)
class CoherenceResult:
    C: float
    C_max: float
    C_min: float
    theta: float
    regime: Regime
    log_C: float


def l1_coherence(rho) -> float:
    """Sum of the moduli of the off-diagonal elements."""
    if isinstance(rho, DensityMatrix2):
        rho = rho.entries
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {rho.shape}")
    off = ~np.eye(rho.shape[0], dtype=bool)
    return math.fsum(np.abs(rho[off]).tolist())


def maximally_coherent_state(d: int) -> np.ndarray:
    """|psi><psi| with |psi> = sum_i |i> / sqrt(d)."""
    return np.full((d, d), 1.0 / d, dtype=complex)


def trace_phi_sigma(amp: CoherentAmplitude, resp: ResponsePair) -> complex:
    """tr(Phi sigma) for the single-mode coherent state."""
    return 0.5 * (resp.f_minus * amp.a0 + resp.f_plus.conjugate() * amp.a0.conjugate())


def _excited_population(x: float) -> float:
    # Pure-state completion p(1 - p) = x^2; equals x^2 + O(x^4).
    if x > 0.5:
        return 0.5
    return 2.0 * x * x / (1.0 + math.sqrt((1.0 - 2.0 * x) * (1.0 + 2.0 * x)))


def reduced_density_matrix(cfg: DetectorConfig, amp: CoherentAmplitude, resp: ResponsePair | None = None):
    """Leading-order detector state after the interaction.

    The off-diagonal element is i lam tr(Phi sigma).  The excited population
    keeps only the coherent-signal part, completed so the state stays
    positive; the vacuum-fluctuation contribution is not modelled.
    """
    if resp is None:
        resp = response_analytic(cfg, amp)
    t = trace_phi_sigma(amp, resp)
    x = cfg.lam * abs(t)
    if x > PERTURBATIVE_MAX:
        raise PerturbativityError(f"lambda |tr(Phi sigma)| = {x:.3g} exceeds {PERTURBATIVE_MAX}")
    if x > PERTURBATIVE_WARN:
        warnings.warn(
            f"lambda |tr(Phi sigma)| = {x:.3g} > {PERTURBATIVE_WARN}; leading order may be inaccurate",
            PerturbativityWarning,
            stacklevel=2,
        )
    p = _excited_population(x)
    off = 1j * cfg.lam * t
    return DensityMatrix2(np.array([[1.0 - p, off], [off.conjugate(), p]]))


def _log_resonant_prefactor(lam, A, w, Omega, T):
    """log(lam A w) - (pi/4)(w - Omega)^2 T^2.

    This is the prefactor e^{-(pi/4)(w^2 + Omega^2) T^2} with e^{X} pulled in
    analytically; at laboratory scales both exponents are ~1e18 and would
    cancel catastrophically if formed separately.
    """
    if lam == 0 or A == 0:
        return -math.inf
    return math.log(lam) + math.log(A) + math.log(w) - 0.25 * math.pi * (w - Omega) ** 2 * T * T


def log_closed_form(lam, A, w, Omega, T, theta):
    """log of (C, C_max, C_min) from the closed form, never overflowing.

    |e^{i theta + X} + e^{-i theta - X}| = 2 sqrt(sinh^2 X + cos^2 theta)
        = e^X sqrt((1 - e^{-2X})^2 + 4 cos^2 theta e^{-2X}),
    so C_max (theta = 0) and C_min (theta = pi/2) are its two ends.
    Requires w, Omega > 0 so that X > 0.
    """
    X = 0.5 * math.pi * w * Omega * T * T
    base = _log_resonant_prefactor(lam, A, w, Omega, T)
    one_minus = math.log(-math.expm1(-2.0 * X)) if X > 0 else -math.inf
    c = math.cos(theta)
    cross = math.log(4.0) + 2.0 * math.log(abs(c)) - 2.0 * X if c != 0 else -math.inf
    log_c = base + 0.5 * float(np.logaddexp(2.0 * one_minus, cross))
    log_max = base + 0.5 * float(np.logaddexp(2.0 * one_minus, math.log(4.0) - 2.0 * X))
    log_min = base + one_minus
    return log_c, log_max, log_min


def _exp(x):
    return math.exp(x) if x > -math.inf else 0.0


def _theta(amp: CoherentAmplitude) -> float:
    return cmath.phase(amp.a0) if amp.a0 != 0 else 0.0


def coherence_exact(cfg: DetectorConfig, amp: CoherentAmplitude) -> CoherenceResult:
    """C = lam A w e^{-(pi/4)(w^2 + Omega^2) T^2} |e^{i theta + X} + e^{-i theta - X}|,
    X = (pi/2) w Omega T^2, with w the Doppler-shifted mode frequency."""
    w = doppler_frequency(cfg, amp).value
    theta = _theta(amp)
    log_c, log_max, log_min = log_closed_form(cfg.lam, amp.A, w, cfg.Omega, cfg.T, theta)
    return CoherenceResult(_exp(log_c), _exp(log_max), _exp(log_min), theta, Regime.EXACT, log_c)


def saddle_parameter(cfg: DetectorConfig, amp: CoherentAmplitude) -> float:
    """X = (pi/2) w Omega T^2."""
    w = doppler_frequency(cfg, amp).value
    return 0.5 * math.pi * w * cfg.Omega * cfg.T**2


def coherence_longtime(cfg: DetectorConfig, amp: CoherentAmplitude) -> CoherenceResult:
    X = saddle_parameter(cfg, amp)
    if X < LONGTIME_MIN_X:
        raise RegimeError(
            f"long-time limit needs (pi/2) w Omega T^2 >= {LONGTIME_MIN_X}, got {X:.4g}; use coherence_exact"
        )
    w = doppler_frequency(cfg, amp).value
    theta = _theta(amp)
    log_c = _log_resonant_prefactor(cfg.lam, amp.A, w, cfg.Omega, cfg.T)
    _, log_max, log_min = log_closed_form(cfg.lam, amp.A, w, cfg.Omega, cfg.T, theta)
    return CoherenceResult(_exp(log_c), _exp(log_max), _exp(log_min), theta, Regime.LONG_TIME, log_c)


def coherence_estimate(cfg: DetectorConfig, bg: AxionBackground) -> float:
    """sqrt(2 rho_DM) lam gamma exp(-(pi/4)(m_a gamma - Omega)^2 T^2).

    Uses |p.u| ~ m_a gamma, so A |p.u| = sqrt(2 rho_DM) gamma.
    """
    g = cfg.gamma
    detune = bg.m_a * g - cfg.Omega
    return math.sqrt(2.0 * bg.rho_dm) * cfg.lam * g * math.exp(-0.25 * math.pi * detune**2 * cfg.T**2)


def electron_coupling(T_obs_s: float) -> Quantity:
    """lam = g_ae T with g_ae = 3.3e-13 / m_e, T in natural units (eV^-2)."""
    T = seconds_to_inverse_eV(T_obs_s)
    return Quantity(G_AE_BOUND / ELECTRON_MASS_EV, -1) * T


def electron_detector_coherence(T_obs_s: float, gamma: float = 1.0, rho_GeV_cm3: float = 0.3) -> float:
    """Resonant coherence for an atomic-electron two-level detector."""
    if not gamma >= 1:
        raise DomainError(f"Lorentz factor must be >= 1, got {gamma!r}")
    lam = electron_coupling(T_obs_s).value
    rho = density_GeV_cm3_to_eV4(rho_GeV_cm3).value
    return math.sqrt(2.0 * rho) * lam * gamma


def resonant_gap(bg: AxionBackground, cfg_velocity=(0.0, 0.0, 0.0)) -> float:
    """Energy gap tuned exactly to the Doppler-shifted mode frequency."""
    probe = DetectorConfig(Omega=1.0, T=1.0, velocity=cfg_velocity)
    return doppler_frequency(probe, coherent_amplitude(bg)).value

