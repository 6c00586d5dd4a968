"""Randomised cross-checks between independent computation routes.

Used by ``axc verify`` and by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .axion import AxionBackground, coherent_amplitude
from .coherence import coherence_exact, trace_phi_sigma
from .detector import DetectorConfig, doppler_frequency
from . import response

QUADRATURE_TOL = 1e-8
IDENTITY_TOL = 1e-10
UNDERFLOW = 1e-30
UNDERFLOW_ABS = 1e-20


@dataclass(frozen=True)
class Case:
    bg: AxionBackground
    cfg: DetectorConfig

    @property
    def amp(self):
        return coherent_amplitude(self.bg)

    def describe(self) -> str:
        w = doppler_frequency(self.cfg, self.amp).value
        return (
            f"m_a={self.bg.m_a!r} v_a={self.bg.v_a!r} theta={self.bg.theta!r} rho={self.bg.rho_dm!r} "
            f"Omega={self.cfg.Omega!r} T={self.cfg.T!r} velocity={self.cfg.velocity!r} lam={self.cfg.lam!r} "
            f"(wT={w * self.cfg.T:.6g}, Omega T={self.cfg.Omega * self.cfg.T:.6g})"
        )


def _unit(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_cases(rng: np.random.Generator, n: int, wT=(0.1, 30.0), OmegaT=(0.1, 30.0)) -> list[Case]:
    """Random axion/detector pairs with w T and Omega T uniform in the given ranges."""
    cases = []
    for _ in range(n):
        bg = AxionBackground(
            m_a=10 ** rng.uniform(-10, 3),
            rho_dm=10 ** rng.uniform(-8, -4),
            v_a=rng.uniform(0, 1e-3),
            theta=rng.uniform(0, 2 * math.pi),
            direction=tuple(_unit(rng)),
        )
        velocity = tuple(rng.uniform(0, 0.9) * _unit(rng))
        probe = DetectorConfig(Omega=1.0, T=1.0, velocity=velocity)
        w = doppler_frequency(probe, coherent_amplitude(bg)).value
        T = rng.uniform(*wT) / w
        Omega = rng.uniform(*OmegaT) / T
        lam = 10 ** rng.uniform(-3, 3)
        cases.append(Case(bg, DetectorConfig(Omega=Omega, T=T, velocity=velocity, lam=lam)))
    return cases


@dataclass
class SuiteReport:
    name: str
    tolerance: float
    max_deviation: float = 0.0
    worst: Case | None = None
    failures: int = 0
    checked: int = 0
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, case, deviation, ok):
        self.checked += 1
        if deviation > self.max_deviation or self.worst is None:
            self.max_deviation = max(deviation, self.max_deviation)
            self.worst = case
        if not ok:
            self.failures += 1


def quadrature_deviation(case: Case):
    """Largest deviation between the two response routes for one case.

    Returns (deviation, ok).  Relative deviation where |F| is representable;
    where the analytic value is below 1e-30 w, the quadrature value itself
    must be below 1e-20 w and the reported deviation is |F_quad| / w.
    """
    amp = case.amp
    w = doppler_frequency(case.cfg, amp).value
    a = response.response_analytic(case.cfg, amp)
    q = response.response_quadrature(case.cfg, amp)
    worst, ok = 0.0, True
    for fa, fq in ((a.f_minus, q.f_minus), (a.f_plus, q.f_plus)):
        if abs(fa) < UNDERFLOW * w:
            dev = abs(fq) / w
            ok &= dev < UNDERFLOW_ABS
        else:
            dev = abs(fq - fa) / abs(fa)
            ok &= dev < QUADRATURE_TOL
        worst = max(worst, dev)
    return worst, ok


def identity_deviation(case: Case):
    """Relative deviation between the closed-form C and lam |F_- a0 + F_+^* a0^*|."""
    amp = case.amp
    closed = coherence_exact(case.cfg, amp).C
    via_response = 2.0 * case.cfg.lam * abs(trace_phi_sigma(amp, response.response_analytic(case.cfg, amp)))
    if closed == 0.0 and via_response == 0.0:
        return 0.0, True
    dev = abs(closed - via_response) / max(abs(closed), abs(via_response))
    return dev, dev < IDENTITY_TOL


def run_suites(seed: int = 0, n: int = 1000) -> list[SuiteReport]:
    rng = np.random.default_rng(seed)
    cases = random_cases(rng, n)
    quad = SuiteReport("response quadrature vs closed form", QUADRATURE_TOL)
    ident = SuiteReport("coherence closed form vs lam|F_- a0 + F_+* a0*|", IDENTITY_TOL)
    for case in cases:
        quad.record(case, *quadrature_deviation(case))
        ident.record(case, *identity_deviation(case))
    return [quad, ident]
