"""Overlap of a time-delayed Gaussian wavepacket with the undelayed one.

A photon in a Gaussian wavepacket delayed by ``tau`` is written as
``alpha * A0 + beta * A1`` where ``A0`` creates the undelayed wavepacket and
``A1`` its normalized orthogonal complement (one Gram-Schmidt step).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ParameterError

DEFAULT_OMEGA0 = 2.41e15  # rad/s
DEFAULT_DELTA_OMEGA = 3.99e12  # rad/s


@dataclass(frozen=True)
class WavepacketSpec:
    """Central angular frequency and bandwidth of the photon wavepacket."""

    omega0: float = DEFAULT_OMEGA0
    delta_omega: float = DEFAULT_DELTA_OMEGA

    def __post_init__(self):
        for name in ("omega0", "delta_omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class DelayDecomposition:
    tau: float
    alpha: complex
    beta: complex

    @property
    def theta(self) -> float:
        return cmath.phase(self.alpha) if self.alpha != 0 else cmath.phase(self.beta)


def overlap_magnitude(tau: float, spec: WavepacketSpec) -> float:
    """|alpha| = exp(-delta_omega**2 tau**2 / 4)."""
    return math.exp(-((spec.delta_omega * tau) ** 2) / 4.0)


def decompose(tau: float, spec: WavepacketSpec | None = None,
              theta_override: float | None = None) -> DelayDecomposition:
    """Split the delayed creation operator into reference and complement parts.

    Both coefficients carry the common phase ``exp(i*theta)`` with
    ``theta = omega0 * tau`` unless ``theta_override`` is given, in which case
    only the magnitudes depend on ``tau``.
    """
    if spec is None:
        spec = WavepacketSpec()
    if not (math.isfinite(tau) and tau >= 0):
        raise ParameterError(f"tau must be finite and non-negative, got {tau!r}")
    x = (spec.delta_omega * tau) ** 2
    alpha_mag = math.exp(-x / 4.0)
    # sqrt(1 - exp(-x/2)) loses precision for small x; -expm1 keeps it.
    beta_mag = math.sqrt(-math.expm1(-x / 2.0))
    theta = spec.omega0 * tau if theta_override is None else theta_override
    phase = cmath.exp(1j * theta)
    return DelayDecomposition(tau=tau, alpha=alpha_mag * phase, beta=beta_mag * phase)


def tau_for_overlap(alpha_sq: float, spec: WavepacketSpec | None = None) -> float:
    """Delay at which |alpha|**2 equals ``alpha_sq`` (inverse of the Gaussian envelope)."""
    if spec is None:
        spec = WavepacketSpec()
    if not 0.0 < alpha_sq <= 1.0:
        raise ParameterError(f"alpha_sq must lie in (0, 1], got {alpha_sq!r}")
    return math.sqrt(-2.0 * math.log(alpha_sq)) / spec.delta_omega
