import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from fockfringe.analysis import (FringeScan, analytic_single, analytic_three,
                                 contrast_sign_changes, dominant_harmonic, fit_sinusoid,
                                 fringe_scan, harmonic_content, interference_budget,
                                 interfering_parts, probability_at, scan_grid, visibility_curve,
                                 visibility_point)
from fockfringe.errors import FitError, ParameterError
from fockfringe.fock import apply_delay_to_path_b, build_nm_superposition
from fockfringe.optics import DetectionPattern as P, all_patterns, apply_beam_splitter
from fockfringe.wavepacket import WavepacketSpec, decompose, tau_for_overlap

SPEC = WavepacketSpec()
FS = 1e-15
PAIRS = [(n, m) for n in range(1, 9) for m in range(0, n) if n + m <= 8]
TAU_TWO_THIRDS = tau_for_overlap(2 / 3, SPEC)


def amag(tau):
    return math.exp(-((SPEC.delta_omega * tau) ** 2) / 4)


# closed forms

def test_analytic_single_examples():
    assert analytic_single(1, 0) == (0.0, 1)
    assert analytic_single(0, 1.234) == (0.5, 0)
    p, v = analytic_single(0.9530, 0)
    assert p == pytest.approx(0.0235, abs=1e-12)
    assert v == 0.9530


def test_analytic_three_examples():
    p3, p2, p0, v = analytic_three(1.0, 0.3)
    assert p2 == 0 and p0 == 0 and v == 1
    *_, v = analytic_three(math.sqrt(2 / 3), 0.0)
    assert v < 1e-15
    # fully distinguishable: |2,1~> still yields 3/16 of two-photon bunching signal
    p3, p2, p0, v = analytic_three(0.0, 2.0)
    assert (p3, p2, p0, v) == (0, 3 / 16, 3 / 16, 0)


@pytest.mark.parametrize("f", [analytic_single, analytic_three])
@pytest.mark.parametrize("a", [-0.1, 1.01])
def test_analytic_range(f, a):
    with pytest.raises(ParameterError):
        f(a, 0.0)


# scans

@pytest.mark.parametrize("n,m,pattern,tau", [
    (1, 0, P(0, 1), 0.0), (2, 1, P(2, 1), 150 * FS), (3, 2, P(4, 1), 90 * FS),
    (5, 3, P(6, 2), 260 * FS), (4, 0, P(2, 2), 40 * FS)])
def test_scan_matches_pointwise_pipeline(n, m, pattern, tau):
    scan = fringe_scan(n, m, pattern, tau, SPEC, samples=64)
    for th, p in list(zip(scan.thetas, scan.probabilities))[::7]:
        assert abs(probability_at(n, m, pattern, tau, th, SPEC) - p) < 1e-12


def test_scan_single_photon_zero_delay():
    scan = fringe_scan(1, 0, P(0, 1), 0.0, SPEC)
    assert np.max(np.abs(scan.probabilities - (1 - np.cos(scan.thetas)) / 2)) < 1e-12


def test_scan_four_photon_zero_delay_is_dark():
    scan = fringe_scan(3, 1, P(2, 2), 0.0, SPEC)
    assert np.max(scan.probabilities) < 1e-12


def test_scan_flat_at_critical_delay():
    scan = fringe_scan(2, 1, P(2, 1), TAU_TWO_THIRDS, SPEC)
    assert np.max(np.abs(scan.probabilities - (6 - 8 / 3) / 16)) < 1e-10


def test_scan_is_deterministic():
    a = fringe_scan(5, 3, P(6, 2), 300 * FS, SPEC)
    b = fringe_scan(5, 3, P(6, 2), 300 * FS, SPEC)
    assert np.array_equal(a.probabilities, b.probabilities)


def test_scan_validation():
    with pytest.raises(ParameterError):
        fringe_scan(2, 1, P(2, 2), 0.0, SPEC)
    with pytest.raises(ParameterError):
        fringe_scan(2, 1, P(2, 1), 0.0, SPEC, samples=32)


@pytest.mark.parametrize("n,m", PAIRS)
def test_single_harmonic_law(n, m):
    for pattern in all_patterns(n + m):
        for tau in (0.0, 120 * FS, 350 * FS):
            c = harmonic_content(fringe_scan(n, m, pattern, tau, SPEC))
            others = [abs(v) for k, v in c.items() if k not in (0, n - m)]
            assert max(others) < 1e-10


@pytest.mark.parametrize("n,m,pattern,h", [
    (2, 1, P(2, 1), 1), (3, 1, P(2, 2), 2), (4, 0, P(3, 1), 4), (4, 0, P(2, 2), 4),
    (1, 0, P(0, 1), 1), (5, 3, P(6, 2), 2)])
def test_dominant_harmonic(n, m, pattern, h):
    c = harmonic_content(fringe_scan(n, m, pattern, 200 * FS, SPEC))
    assert dominant_harmonic(c) == h


def test_flat_scan_has_no_dominant_harmonic():
    scan = fringe_scan(3, 1, P(2, 2), 0.0, SPEC)
    assert dominant_harmonic(harmonic_content(scan)) == 0
    assert visibility_point(scan).visibility == 0.0


def test_harmonic_content_rejects_nonuniform_grid():
    thetas = np.sort(np.random.default_rng(0).uniform(0, 2 * np.pi, 64))
    with pytest.raises(ParameterError):
        harmonic_content(FringeScan(thetas, np.zeros(64), P(1, 0), 0.0))


# visibilities

def test_single_photon_visibility_curve():
    taus = [k * 55 * FS for k in range(15)]
    for pt in visibility_curve(1, 0, P(0, 1), taus, SPEC):
        assert abs(pt.visibility - amag(pt.tau)) < 1e-9
        assert abs(abs(pt.signed_contrast) - pt.visibility) < 1e-9


def test_three_photon_visibility_at_quartz_delays():
    pts = visibility_curve(2, 1, P(2, 1), [k * 110 * FS for k in range(8)], SPEC)
    a = amag(220 * FS)
    assert pts[2].visibility == pytest.approx(abs(a * (2 - 3 * a * a)) / (3 - 2 * a * a), abs=1e-12)
    assert pts[2].visibility == pytest.approx(0.0205, abs=1e-4)
    assert pts[2].signed_contrast < 0 < pts[3].signed_contrast


def test_three_photon_single_sign_change():
    roots = contrast_sign_changes(2, 1, P(2, 1), 5 / SPEC.delta_omega, SPEC)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(TAU_TWO_THIRDS, abs=1e-18)


def test_eight_photon_double_sign_change():
    roots = contrast_sign_changes(5, 3, P(6, 2), 5 / SPEC.delta_omega, SPEC)
    assert len(roots) == 2


def test_visibility_curve_validation():
    with pytest.raises(ParameterError):
        visibility_curve(1, 0, P(0, 1), [], SPEC)
    with pytest.raises(ParameterError):
        visibility_curve(1, 0, P(0, 1), [2e-13, 1e-13], SPEC)
    with pytest.raises(ParameterError):
        visibility_curve(1, 0, P(0, 1), [0.0], SPEC, samples=128)


@pytest.mark.parametrize("n", range(1, 9))
def test_noon_decay(n):
    pattern = P(n // 2, n - n // 2)
    taus = [k * 40 * FS for k in range(12)]
    pts = visibility_curve(n, 0, pattern, taus, SPEC)
    for pt in pts:
        assert abs(pt.visibility - amag(pt.tau) ** n) < 1e-9
    assert all(b.visibility < a.visibility for a, b in zip(pts, pts[1:]))


def test_entangled_states_tolerate_delay_better_than_noon():
    noon = lambda t: visibility_curve(4, 0, P(2, 2), [t], SPEC)[0].visibility - 0.1  # noqa: E731
    tau = brentq(noon, 1 * FS, 1000 * FS, xtol=1e-22)
    assert visibility_curve(3, 1, P(2, 2), [tau], SPEC)[0].visibility > 0.1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PAIRS), st.floats(min_value=0, max_value=1e-12))
def test_signed_contrast_matches_visibility(pair, tau):
    n, m = pair
    for pattern in all_patterns(n + m)[:3]:
        pt = visibility_point(fringe_scan(n, m, pattern, tau, SPEC))
        assert abs(abs(pt.signed_contrast) - pt.visibility) < 1e-9
        assert 0 <= pt.visibility <= 1


# interference budget

@pytest.mark.parametrize("tau", [0.0, 80 * FS, 226 * FS, 500 * FS])
def test_budget_matches_closed_form(tau):
    budget = interference_budget(2, 1, P(2, 1), tau, SPEC)
    a = amag(tau)
    thetas = np.linspace(0, 2 * np.pi, 37)
    for th in thetas:
        p3, p2, p0, _ = analytic_three(a, th)
        assert abs(budget.part(3, th) - p3) < 1e-12
        assert abs(budget.part(2, th) - p2) < 1e-12
        assert abs(budget.part(1, th) - p0) < 1e-12


def test_budget_zero_delay_has_only_three_photon_part():
    budget = interference_budget(2, 1, P(2, 1), 0.0, SPEC)
    assert set(budget.parts) == {3}


def test_budget_cancellation_at_critical_delay():
    budget = interference_budget(2, 1, P(2, 1), TAU_TWO_THIRDS, SPEC)
    three, two = budget.parts[3], budget.parts[2]
    assert three.amplitude == pytest.approx(two.amplitude, abs=1e-12)
    assert abs(math.remainder(three.phase - two.phase, 2 * math.pi)) == pytest.approx(math.pi)


@pytest.mark.parametrize("n,m,pattern", [(2, 1, P(2, 1)), (3, 1, P(2, 2)), (5, 3, P(6, 2)),
                                         (3, 2, P(4, 1))])
def test_budget_reconstructs_scan(n, m, pattern):
    for tau in (50 * FS, 300 * FS):
        budget = interference_budget(n, m, pattern, tau, SPEC)
        scan = fringe_scan(n, m, pattern, tau, SPEC)
        assert np.max(np.abs(budget.total(scan.thetas) - scan.probabilities)) < 1e-12


def test_interfering_parts_pointwise():
    tau, theta = 190 * FS, 0.7
    state = apply_delay_to_path_b(build_nm_superposition(2, 1),
                                  decompose(tau, SPEC, theta_override=theta))
    parts = interfering_parts(apply_beam_splitter(state), P(2, 1))
    p3, p2, p0, _ = analytic_three(amag(tau), theta)
    assert parts[3] == pytest.approx(p3, abs=1e-12)
    assert parts[2] == pytest.approx(p2, abs=1e-12)
    assert parts[1] == pytest.approx(p0, abs=1e-12)


# fitting

def test_fit_noiseless_round_trip():
    th = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    fit = fit_sinusoid(th, 0.5 + 0.25 * np.cos(th))
    assert fit.offset == pytest.approx(0.5, abs=1e-9)
    assert fit.amplitude == pytest.approx(0.25, abs=1e-9)
    assert abs(math.remainder(fit.phase, 2 * math.pi)) < 1e-9


def test_fit_recovers_single_photon_visibility():
    th = np.linspace(0, 2 * np.pi, 25)
    counts = [analytic_single(0.9530, t)[0] for t in th]
    assert fit_sinusoid(th, counts).visibility == pytest.approx(0.9530, abs=1e-6)


def test_fit_flat_data():
    fit = fit_sinusoid(np.arange(8.0), np.full(8, 3.0))
    assert fit.amplitude < 1e-12
    assert fit.visibility < 1e-12


def test_fit_degenerate():
    with pytest.raises(FitError):
        fit_sinusoid(np.full(6, 0.3), np.arange(6.0))
    with pytest.raises(ParameterError):
        fit_sinusoid([0, 1, 2], [1, 2, 3])


def test_fit_negative_offset_flagged():
    th = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    fit = fit_sinusoid(th, -1 + np.cos(th))
    assert fit.negative_offset


def test_fit_weighted_ignores_outlier_with_large_error():
    th = np.linspace(0, 2 * np.pi, 30, endpoint=False)
    y = 2 + np.cos(2 * th + 0.4)
    y[3] += 50
    sigma = np.ones_like(y)
    sigma[3] = 1e9
    fit = fit_sinusoid(th, y, sigma, harmonic=2)
    assert fit.amplitude == pytest.approx(1.0, abs=1e-6)
    assert fit.phase == pytest.approx(0.4, abs=1e-6)


@settings(max_examples=50)
@given(st.floats(0.5, 10), st.floats(0, 0.49), st.floats(0, 2 * np.pi - 1e-6),
       st.integers(1, 4))
def test_fit_round_trip_property(offset, rel_amp, phase, h):
    th = scan_grid(64)
    amp = rel_amp * offset
    fit = fit_sinusoid(th, offset + amp * np.cos(h * th + phase), harmonic=h)
    assert fit.offset == pytest.approx(offset, abs=1e-9)
    assert fit.amplitude == pytest.approx(amp, abs=1e-9)
    if amp > 1e-6:
        assert abs(math.remainder(fit.phase - phase, 2 * math.pi)) < 1e-6
