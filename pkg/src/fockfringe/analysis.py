"""Closed-form fringes, simulated phase scans, visibilities and sinusoid fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import FitError, ParameterError
from .fock import Path, PureState, apply_delay_to_path_b, build_nm_superposition
from .optics import (BALANCED, BeamSplitterConvention, DetectionPattern,
                     apply_beam_splitter, detection_probability)
from .wavepacket import WavepacketSpec, decompose

MIN_SCAN_SAMPLES = 64
CURVE_SAMPLES = 256
FRINGE_FLOOR = 1e-10  # Fourier magnitude below which a harmonic counts as absent
ZERO_PROBABILITY = 1e-12


def _check_alpha(alpha_mag):
    if not 0.0 <= alpha_mag <= 1.0:
        raise ParameterError(f"|alpha| must lie in [0, 1], got {alpha_mag!r}")


def analytic_single(alpha_mag: float, theta: float) -> tuple[float, float]:
    """(0,1) detection for the delayed single photon: probability and visibility."""
    _check_alpha(alpha_mag)
    return (1.0 - alpha_mag * math.cos(theta)) / 2.0, alpha_mag


def analytic_three(alpha_mag: float, theta: float) -> tuple[float, float, float, float]:
    """(2,1) detection for the delayed three-photon state.

    Returns the three-, two- and no-interference contributions and the
    fringe visibility.
    """
    _check_alpha(alpha_mag)
    a, c = alpha_mag, math.cos(theta)
    b2 = 1.0 - a * a
    p_three = a * a * (a * a - 2 * a * c + 1) / 16
    p_two = b2 * (4 * a * a + 4 * a * c + 3) / 16
    p_no = 3 * b2 * b2 / 16
    visibility = abs(a * (2 - 3 * a * a)) / (3 - 2 * a * a)
    return p_three, p_two, p_no, visibility


def _check_inputs(n, m, pattern):
    if m < 0 or n < m:
        raise ParameterError(f"need n >= m >= 0, got n={n}, m={m}")
    if pattern.total != n + m:
        raise ParameterError(f"pattern {pattern} does not hold {n + m} photons")


def probability_at(n: int, m: int, pattern: DetectionPattern, tau: float, theta: float,
                   spec: WavepacketSpec | None = None,
                   convention: BeamSplitterConvention = BALANCED) -> float:
    """One point of the full pipeline: build, delay, beam splitter, count."""
    _check_inputs(n, m, pattern)
    d = decompose(tau, spec, theta_override=theta)
    state = apply_delay_to_path_b(build_nm_superposition(n, m), d)
    return detection_probability(apply_beam_splitter(state, convention), pattern)


def _phase_components(n, m, pattern, tau, spec, convention):
    """Output amplitudes split by the number of photons that went through path B.

    Both delay coefficients share the factor exp(i theta), so a basis state
    with k photons in B picks up exp(i k theta). Returns the phase exponents,
    the matching output basis states and an amplitude matrix
    ``amps[exponent_index, output_index]`` evaluated at theta = 0.
    """
    _check_inputs(n, m, pattern)
    state = apply_delay_to_path_b(build_nm_superposition(n, m),
                                  decompose(tau, spec, theta_override=0.0))
    groups: dict[int, dict] = {}
    for basis, amp in state:
        groups.setdefault(basis.path_total(Path.B), {})[basis] = amp
    images = {k: apply_beam_splitter(PureState(g), convention) for k, g in groups.items()}
    outputs = sorted({s for img in images.values() for s, _ in img
                      if s.path_total(Path.C) == pattern.m},
                     key=lambda s: s.occupation)
    exps = sorted(images)
    amps = np.array([[images[k].amplitude(s) for s in outputs] for k in exps],
                    dtype=complex).reshape(len(exps), len(outputs))
    return np.array(exps), outputs, amps


def scan_grid(samples: int) -> np.ndarray:
    return 2 * np.pi * np.arange(samples) / samples


@dataclass(frozen=True)
class FringeScan:
    thetas: np.ndarray
    probabilities: np.ndarray
    pattern: DetectionPattern
    tau: float

    def __post_init__(self):
        if len(self.thetas) != len(self.probabilities):
            raise ParameterError("thetas and probabilities differ in length")
        if len(self.thetas) < MIN_SCAN_SAMPLES:
            raise ParameterError(f"a scan needs at least {MIN_SCAN_SAMPLES} samples")


def _scan_by_group(n, m, pattern, tau, spec, convention, thetas):
    """Probability per theta, split by the count of reference-mode photons."""
    exps, outputs, amps = _phase_components(n, m, pattern, tau, spec, convention)
    phases = np.exp(1j * np.outer(thetas, exps))  # (theta, exponent)
    out_amps = phases @ amps  # (theta, output)
    probs = np.abs(out_amps) ** 2
    parts: dict[int, np.ndarray] = {}
    for j, s in enumerate(outputs):
        k = s.internal_total(0)
        parts[k] = parts.get(k, 0.0) + probs[:, j]
    return parts


def fringe_scan(n: int, m: int, pattern: DetectionPattern, tau: float,
                spec: WavepacketSpec | None = None, samples: int = CURVE_SAMPLES,
                convention: BeamSplitterConvention = BALANCED) -> FringeScan:
    """Detection probability of ``pattern`` on a uniform phase grid over [0, 2pi)."""
    if samples < MIN_SCAN_SAMPLES:
        raise ParameterError(f"a scan needs at least {MIN_SCAN_SAMPLES} samples")
    thetas = scan_grid(samples)
    parts = _scan_by_group(n, m, pattern, tau, spec, convention, thetas)
    total = sum(parts.values()) if parts else np.zeros(samples)
    return FringeScan(thetas, np.clip(total, 0.0, 1.0), pattern, tau)


def harmonic_content(scan: FringeScan) -> dict[int, complex]:
    """Fourier coefficients ``c_k`` with ``P(theta) = sum_k c_k e^{ik theta} + c.c.``.

    ``c_0`` is the mean; for k >= 1 the cosine amplitude is ``2|c_k|``.
    """
    thetas = np.asarray(scan.thetas, dtype=float)
    samples = len(thetas)
    if not np.allclose(thetas, scan_grid(samples), atol=1e-12, rtol=0):
        raise ParameterError("harmonic analysis needs a uniform grid over [0, 2pi)")
    coeffs = np.fft.rfft(np.asarray(scan.probabilities, dtype=float)) / samples
    return {k: complex(c) for k, c in enumerate(coeffs)}


def dominant_harmonic(coeffs: dict[int, complex]) -> int:
    best, mag = 0, FRINGE_FLOOR
    for k, c in coeffs.items():
        if k >= 1 and abs(c) >= mag:
            best, mag = k, abs(c)
    return best


@dataclass(frozen=True)
class VisibilityPoint:
    tau: float
    visibility: float
    signed_contrast: float
    dominant_harmonic: int


def visibility_point(scan: FringeScan) -> VisibilityPoint:
    """Visibility and signed contrast of the dominant single-harmonic fringe.

    With ``P = c0 + A cos(h theta + phi)`` the visibility is ``A/c0`` and the
    signed contrast compares ``P(0)`` with ``P(pi/h)``, which for ``h = 1``
    is the usual ``P(0)`` versus ``P(pi)``.
    """
    coeffs = harmonic_content(scan)
    h = dominant_harmonic(coeffs)
    offset = coeffs[0].real
    if h == 0 or float(np.max(scan.probabilities)) < ZERO_PROBABILITY or offset <= 0:
        return VisibilityPoint(scan.tau, 0.0, 0.0, h)
    ch = coeffs[h]
    visibility = min(2 * abs(ch) / offset, 1.0)
    signed = max(min(2 * ch.real / offset, 1.0), -1.0)
    return VisibilityPoint(scan.tau, visibility, signed, h)


def visibility_curve(n: int, m: int, pattern: DetectionPattern, tau_grid,
                     spec: WavepacketSpec | None = None, samples: int = CURVE_SAMPLES,
                     convention: BeamSplitterConvention = BALANCED) -> list[VisibilityPoint]:
    taus = [float(t) for t in tau_grid]
    if not taus:
        raise ParameterError("tau grid is empty")
    if any(b <= a for a, b in zip(taus, taus[1:])):
        raise ParameterError("tau grid must be strictly ascending")
    if samples < CURVE_SAMPLES:
        raise ParameterError(f"visibility curves use at least {CURVE_SAMPLES} phase samples")
    return [visibility_point(fringe_scan(n, m, pattern, t, spec, samples, convention))
            for t in taus]


def signed_contrast(n: int, m: int, pattern: DetectionPattern, tau: float,
                    spec: WavepacketSpec | None = None,
                    convention: BeamSplitterConvention = BALANCED) -> float:
    return visibility_point(fringe_scan(n, m, pattern, tau, spec, CURVE_SAMPLES,
                                        convention)).signed_contrast


def contrast_sign_changes(n: int, m: int, pattern: DetectionPattern, tau_max: float,
                          spec: WavepacketSpec | None = None, grid_points: int = 400,
                          convention: BeamSplitterConvention = BALANCED) -> list[float]:
    """Delays in (0, tau_max) where the signed contrast changes sign, refined by Brent's method.

    Grid points where the contrast is exactly zero (no fringe at all) are
    skipped, so an isolated null that does not flip the sign is not counted.
    """
    taus = np.linspace(0.0, tau_max, grid_points + 1)[1:-1]
    f = lambda t: signed_contrast(n, m, pattern, t, spec, convention)  # noqa: E731
    values = [(t, f(t)) for t in taus]
    values = [(t, v) for t, v in values if v != 0.0]
    roots = []
    for (t0, v0), (t1, v1) in zip(values, values[1:]):
        if (v0 > 0) != (v1 > 0):
            roots.append(brentq(f, t0, t1, xtol=1e-20, rtol=1e-14))
    return roots


@dataclass(frozen=True)
class BudgetPart:
    """``offset + amplitude * cos(harmonic * theta + phase)``."""

    offset: float
    amplitude: float
    phase: float

    def __call__(self, theta, harmonic: int):
        return self.offset + self.amplitude * np.cos(harmonic * np.asarray(theta) + self.phase)


@dataclass(frozen=True)
class InterferenceBudget:
    """Detection probability grouped by how many photons stay in the reference mode."""

    parts: dict[int, BudgetPart] = field(default_factory=dict)
    harmonic: int = 0
    tau: float = 0.0

    def part(self, count: int, theta):
        p = self.parts.get(count)
        return 0.0 * np.asarray(theta, dtype=float) if p is None else p(theta, self.harmonic)

    def total(self, theta):
        return sum((p(theta, self.harmonic) for p in self.parts.values()),
                   0.0 * np.asarray(theta, dtype=float))


def interfering_parts(state: PureState, pattern: DetectionPattern) -> dict[int, float]:
    """Split a detection probability by reference-mode photon count.

    The beam splitter conserves the photon number in each internal mode, so
    these contributions never interfere with one another and simply add up.
    """
    detection_probability(state, pattern)  # validates state and pattern
    parts: dict[int, float] = {}
    for s, a in state:
        if s.path_total(Path.C) == pattern.m:
            k = s.internal_total(0)
            parts[k] = parts.get(k, 0.0) + abs(a) ** 2
    return parts


def interference_budget(n: int, m: int, pattern: DetectionPattern, tau: float,
                        spec: WavepacketSpec | None = None, samples: int = CURVE_SAMPLES,
                        convention: BeamSplitterConvention = BALANCED) -> InterferenceBudget:
    thetas = scan_grid(samples)
    raw = _scan_by_group(n, m, pattern, tau, spec, convention, thetas)
    h = n - m
    parts = {}
    for k in sorted(raw, reverse=True):
        coeffs = np.fft.rfft(raw[k]) / samples
        ch = coeffs[h] if 0 < h < len(coeffs) else 0j
        amp = 2 * abs(ch)
        phase = float(np.angle(ch)) % (2 * np.pi) if amp >= FRINGE_FLOOR else 0.0
        parts[k] = BudgetPart(float(coeffs[0].real), float(amp), phase)
    return InterferenceBudget(parts, h, tau)


@dataclass(frozen=True)
class SinusoidFit:
    offset: float
    amplitude: float
    phase: float
    residual: float
    harmonic: int = 1

    @property
    def negative_offset(self) -> bool:
        return self.offset < 0

    @property
    def visibility(self) -> float:
        if self.amplitude == 0.0:
            return 0.0
        if self.offset <= 0:
            return math.nan
        return self.amplitude / self.offset

    def __call__(self, theta):
        return self.offset + self.amplitude * np.cos(self.harmonic * np.asarray(theta)
                                                     + self.phase)


def fit_sinusoid(thetas, counts, errors=None, harmonic: int = 1) -> SinusoidFit:
    """Weighted least squares for ``counts ~ offset + amplitude*cos(h*theta + phase)``.

    ``residual`` is the root-mean-square of the unweighted residuals.
    """
    x = np.asarray(thetas, dtype=float)
    y = np.asarray(counts, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("thetas and counts must be 1-D arrays of equal length")
    if len(x) < 4:
        raise ParameterError(f"need at least 4 points, got {len(x)}")
    if harmonic < 1:
        raise ParameterError(f"harmonic must be >= 1, got {harmonic}")
    if errors is None:
        w = np.ones_like(y)
    else:
        sigma = np.asarray(errors, dtype=float)
        if sigma.shape != y.shape or np.any(sigma <= 0):
            raise ParameterError("standard deviations must be positive, one per point")
        w = 1.0 / sigma
    design = np.column_stack([np.ones_like(x), np.cos(harmonic * x), np.sin(harmonic * x)])
    weighted = design * w[:, None]
    if np.linalg.matrix_rank(weighted) < 3:
        raise FitError("degenerate phase sampling: the sinusoid is not identifiable")
    (offset, c, s), *_ = np.linalg.lstsq(weighted, y * w, rcond=None)
    # c cos + s sin = A cos(h theta + phi) with A cos(phi) = c, A sin(phi) = -s
    amplitude = math.hypot(c, s)
    phase = math.atan2(-s, c) % (2 * math.pi) if amplitude > 0 else 0.0
    resid = y - design @ np.array([offset, c, s])
    return SinusoidFit(float(offset), amplitude, phase,
                       float(np.sqrt(np.mean(resid ** 2))), harmonic)
