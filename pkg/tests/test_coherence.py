import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from axion_coherence.axion import AxionBackground, coherent_amplitude
from axion_coherence.coherence import (
    DensityMatrix2,
    Regime,
    coherence_estimate,
    coherence_exact,
    coherence_longtime,
    electron_coupling,
    electron_detector_coherence,
    l1_coherence,
    log_closed_form,
    maximally_coherent_state,
    reduced_density_matrix,
    resonant_gap,
    saddle_parameter,
    trace_phi_sigma,
)
from axion_coherence.detector import DetectorConfig, doppler_frequency
from axion_coherence.errors import DomainError, PerturbativityError, PerturbativityWarning, RegimeError
from axion_coherence.oracle import random_cases
from axion_coherence.response import response_analytic
from axion_coherence.units import density_GeV_cm3_to_eV4


def setup(w, Omega, T, theta=0.0, lam=1.0, rho=1e-6):
    bg = AxionBackground(m_a=w, rho_dm=rho, v_a=0.0, theta=theta)
    return DetectorConfig(Omega=Omega, T=T, lam=lam), coherent_amplitude(bg)


def direct(w, Omega, T, theta, lam, A):
    X = 0.5 * math.pi * w * Omega * T * T
    pre = lam * A * w * math.exp(-0.25 * math.pi * (w * w + Omega * Omega) * T * T)
    return pre * abs(np.exp(1j * theta + X) + np.exp(-1j * theta - X))


@given(
    st.floats(min_value=0.1, max_value=3),
    st.floats(min_value=0.1, max_value=3),
    st.floats(min_value=0.2, max_value=2),
    st.floats(min_value=0, max_value=2 * math.pi),
)
def test_log_form_matches_direct_evaluation(w, Omega, T, theta):
    log_c, _, _ = log_closed_form(1.0, 1.0, w, Omega, T, theta)
    assert math.exp(log_c) == pytest.approx(direct(w, Omega, T, theta, 1.0, 1.0), rel=1e-11)


def test_extremes():
    for theta in (0.0, math.pi / 2):
        cfg, amp = setup(1.0, 1.2, 1.5, theta=theta)
        r = coherence_exact(cfg, amp)
        target = r.C_max if theta == 0 else r.C_min
        assert r.C == pytest.approx(target, rel=1e-12)
        assert r.regime is Regime.EXACT


@given(st.floats(min_value=0, max_value=2 * math.pi))
def test_C_between_extremes(theta):
    cfg, amp = setup(1.0, 0.8, 1.2, theta=theta)
    r = coherence_exact(cfg, amp)
    assert r.C_min * (1 - 1e-12) <= r.C <= r.C_max * (1 + 1e-12)


def test_zero_coupling():
    cfg, amp = setup(1.0, 1.0, 1.0, lam=0.0)
    r = coherence_exact(cfg, amp)
    assert r.C == 0.0 and r.C_max == 0.0


def test_laboratory_scale_does_not_overflow():
    # X ~ 1e18 at m_a = 1e-6 eV and T = 1 s
    bg = AxionBackground.from_lab(1e-6, 0.3)
    amp = coherent_amplitude(bg)
    w = doppler_frequency(DetectorConfig(Omega=1.0, T=1.0), amp).value
    cfg = DetectorConfig(Omega=w, T=1.519e15, lam=1.0)
    r = coherence_exact(cfg, amp)
    assert r.C == pytest.approx(amp.A * w, rel=1e-12)


@pytest.mark.parametrize("X", [10.0, 12.0, 20.0, 200.0])
def test_longtime_ratio(X):
    T = 1.0
    w = math.sqrt(2 * X / math.pi) / T
    cfg, amp = setup(w, w, T)
    assert saddle_parameter(cfg, amp) == pytest.approx(X, rel=1e-14)
    exact = coherence_exact(cfg, amp).C
    lt = coherence_longtime(cfg, amp)
    assert lt.regime is Regime.LONG_TIME
    assert abs(exact / lt.C - 1) <= math.exp(-2 * X) + 1e-12


def test_longtime_rejects_short_times():
    cfg, amp = setup(1.0, 1.0, 1.0)
    with pytest.raises(RegimeError, match="coherence_exact"):
        coherence_longtime(cfg, amp)


@pytest.mark.parametrize("d", range(2, 9))
def test_maximally_coherent(d):
    assert l1_coherence(maximally_coherent_state(d)) == d - 1


def test_diagonal_is_incoherent():
    assert l1_coherence(np.diag([0.2, 0.3, 0.5])) == 0.0
    with pytest.raises(DomainError):
        l1_coherence(np.ones((2, 3)))


def test_density_matrix_validation():
    with pytest.raises(DomainError):
        DensityMatrix2(np.array([[0.5, 1j], [1j, 0.5]]))
    with pytest.raises(DomainError):
        DensityMatrix2(np.eye(2))
    rho = DensityMatrix2(np.array([[0.75, 0.1j], [-0.1j, 0.25]]))
    assert rho.excited_population == 0.25
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


def test_density_matrix_sanity_randomised():
    rng = np.random.default_rng(5)
    checked = 0
    for case in random_cases(rng, 500):
        t = trace_phi_sigma(case.amp, response_analytic(case.cfg, case.amp))
        if abs(t) == 0:
            continue
        # rescale the coupling so lam |t| is uniform in (0, 1/2]
        lam = rng.uniform(0, 0.5) / abs(t)
        cfg = DetectorConfig(Omega=case.cfg.Omega, T=case.cfg.T, velocity=case.cfg.velocity, lam=lam)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PerturbativityWarning)
            rho = reduced_density_matrix(cfg, case.amp)
        m = rho.entries
        assert np.allclose(m, m.conj().T, atol=1e-15)
        assert abs(np.trace(m) - 1) <= 1e-12
        assert rho.eigenvalues().min() >= -1e-12
        checked += 1
    assert checked > 400


def test_density_matrix_off_diagonal_is_half_C():
    cfg, amp = setup(1.0, 1.1, 1.3, theta=0.4, lam=1e-3)
    rho = reduced_density_matrix(cfg, amp)
    via_response = 2 * cfg.lam * abs(trace_phi_sigma(amp, response_analytic(cfg, amp)))
    assert l1_coherence(rho) == pytest.approx(via_response, rel=1e-14)


def test_perturbativity_guard():
    cfg, amp = setup(1.0, 1.0, 1.0, rho=0.5)
    t = abs(trace_phi_sigma(amp, response_analytic(cfg, amp)))
    for x, expect in ((0.05, None), (0.3, PerturbativityWarning)):
        c = DetectorConfig(Omega=1.0, T=1.0, lam=x / t)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            reduced_density_matrix(c, amp)
        kinds = {w.category for w in caught}
        assert (expect in kinds) if expect else not kinds
    with pytest.raises(PerturbativityError):
        reduced_density_matrix(DetectorConfig(Omega=1.0, T=1.0, lam=2.0 / t), amp)


def test_response_path_is_closed_form_at_shifted_phase():
    # lam |F_- a0 + F_+^* a0^*| reproduces the closed form with theta + pi/2
    rng = np.random.default_rng(9)
    for case in random_cases(rng, 300):
        amp = case.amp
        via_response = 2 * case.cfg.lam * abs(trace_phi_sigma(amp, response_analytic(case.cfg, amp)))
        w = doppler_frequency(case.cfg, amp).value
        log_c, _, _ = log_closed_form(case.cfg.lam, amp.A, w, case.cfg.Omega, case.cfg.T, case.bg.theta + math.pi / 2)
        closed = math.exp(log_c)
        if closed == 0 and via_response == 0:
            continue
        assert via_response == pytest.approx(closed, rel=1e-10)


def test_estimate_coefficient():
    bg = AxionBackground.from_lab(1e-6, 0.3)
    for gamma in (1.0, 2.5, 10.0):
        cfg = DetectorConfig.with_gamma(gamma, Omega=bg.m_a * gamma, T=1.0)
        assert coherence_estimate(cfg, bg) / gamma == pytest.approx(2.147e-3, rel=1e-3)


def test_estimate_detuned_is_suppressed():
    bg = AxionBackground.from_lab(1e-6, 0.3)
    cfg = DetectorConfig(Omega=2e-6, T=1e7)
    assert coherence_estimate(cfg, bg) < 1e-30


def test_electron_coupling_dimension():
    lam = electron_coupling(1.0)
    assert lam.dim == -2
    assert lam.value == pytest.approx(3.3e-13 / 0.5e6 * 1.5192674e15, rel=1e-7)


@pytest.mark.parametrize("T, expected", [(1.0, 2.2e-6), (10.0, 2.2e-5)])
def test_electron_scenario(T, expected):
    assert electron_detector_coherence(T) == pytest.approx(expected, rel=0.05)


def test_electron_scales_with_gamma():
    assert electron_detector_coherence(1.0, gamma=3.0) == pytest.approx(3 * electron_detector_coherence(1.0))
    with pytest.raises(DomainError):
        electron_detector_coherence(1.0, gamma=0.5)


def test_electron_matches_general_resonant_coherence():
    rho = density_GeV_cm3_to_eV4(0.3).value
    lam = electron_coupling(1.0).value
    bg = AxionBackground(m_a=1e-6, rho_dm=rho, v_a=0.0)
    amp = coherent_amplitude(bg)
    cfg = DetectorConfig(Omega=resonant_gap(bg), T=1.519e15, lam=lam)
    assert coherence_longtime(cfg, amp).C == pytest.approx(electron_detector_coherence(1.0), rel=1e-12)
