"""Transition amplitudes from matrix permanents, used to cross-check :mod:`optics`.

The interferometer is lifted to four modes ordered ``(path, internal)``:
``A0, A1, B0, B1`` on the input side and ``C0, C1, D0, D1`` on the output
side, i.e. ``network = kron(path_unitary, I2)``.  The amplitude of
``|in> -> |out>`` is ``Per(U_sub) / sqrt(prod in! prod out!)`` where
``U_sub`` repeats column ``j`` ``in_j`` times and row ``k`` ``out_k`` times.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterError, PreconditionError
from .fock import (INPUT_PATHS, OUTPUT_PATHS, PHOTON_CAP, FockBasisState,
                   ModeLabel, PureState)
from .optics import BALANCED, BeamSplitterConvention, DetectionPattern, all_patterns

MAX_PERMANENT_SIZE = 16

INPUT_MODES = tuple(ModeLabel(p, i) for p in INPUT_PATHS for i in (0, 1))
OUTPUT_MODES = tuple(ModeLabel(p, i) for p in OUTPUT_PATHS for i in (0, 1))


@lru_cache(maxsize=None)
def _gray_schedule(n: int):
    # Step k (1-based) of the binary-reflected Gray code flips bit ctz(k).
    k = np.arange(1, 2 ** n)
    flipped = np.zeros_like(k)
    kk = k.copy()
    while np.any(kk & 1 == 0):
        even = (kk & 1) == 0
        flipped[even] += 1
        kk[even] >>= 1
    gray = k ^ (k >> 1)
    added = ((gray >> flipped) & 1).astype(bool)
    popcount = np.array([bin(g).count("1") for g in gray])
    sign = np.where((n - popcount) % 2 == 0, 1.0, -1.0)
    return flipped, np.where(added, 1.0, -1.0), sign


def permanent(matrix) -> complex:
    """Ryser's formula walked in Gray-code order, O(2**n * n)."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not 1 <= n <= MAX_PERMANENT_SIZE:
        raise ParameterError(f"matrix size must be in [1, {MAX_PERMANENT_SIZE}], got {n}")
    if n == 1:
        return complex(a[0, 0])
    cols, direction, sign = _gray_schedule(n)
    row_sums = np.cumsum(a.T[cols] * direction[:, None], axis=0)
    return complex(np.sum(sign * np.prod(row_sums, axis=1)))


def permanent_naive(matrix) -> complex:
    """Sum over all permutations; only for cross-checking small matrices."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    return complex(sum(math.prod(a[i, p[i]] for i in range(n))
                       for p in itertools.permutations(range(n))))


def network_matrix(convention: BeamSplitterConvention = BALANCED) -> np.ndarray:
    return np.kron(convention.u, np.eye(2))


@dataclass(frozen=True, eq=False)
class TransitionQuery:
    input: FockBasisState
    output: FockBasisState
    network: np.ndarray

    def __post_init__(self):
        net = np.asarray(self.network, dtype=complex)
        if net.shape != (4, 4) or not np.allclose(net.conj().T @ net, np.eye(4),
                                                   atol=1e-12, rtol=0):
            raise ParameterError("network must be a 4x4 unitary")
        object.__setattr__(self, "network", net)
        if self.input.total != self.output.total:
            raise ParameterError(
                f"photon number mismatch: {self.input.total} in, {self.output.total} out")
        if self.input.total > PHOTON_CAP:
            raise ParameterError(f"oracle supports at most {PHOTON_CAP} photons")
        if self.input.paths - set(INPUT_PATHS) or self.output.paths - set(OUTPUT_PATHS):
            raise PreconditionError("input must be on paths A/B and output on C/D")


def _repeated_indices(basis: FockBasisState, modes) -> list[int]:
    return [modes.index(m) for m, n in basis for _ in range(n)]


def transition_amplitude(query: TransitionQuery) -> complex:
    n_in, n_out = query.input, query.output
    if n_in.total == 0:
        return 1.0 + 0j
    cols = _repeated_indices(n_in, INPUT_MODES)
    rows = _repeated_indices(n_out, OUTPUT_MODES)
    sub = query.network[np.ix_(rows, cols)]
    denom = math.prod(math.factorial(k) for _, k in n_in) * \
        math.prod(math.factorial(k) for _, k in n_out)
    return permanent(sub) / math.sqrt(denom)


@lru_cache(maxsize=None)
def output_basis(total: int) -> tuple[FockBasisState, ...]:
    """Every occupation of the four output modes with ``total`` photons."""
    states = []
    for combo in itertools.combinations_with_replacement(OUTPUT_MODES, total):
        states.append(FockBasisState(tuple((m, 1) for m in combo)))
    return tuple(states)


@lru_cache(maxsize=4096)
def _amplitude_row(basis: FockBasisState, convention: BeamSplitterConvention) -> np.ndarray:
    net = network_matrix(convention)
    return np.array([transition_amplitude(TransitionQuery(basis, out, net))
                     for out in output_basis(basis.total)])


def output_amplitudes(state: PureState,
                      convention: BeamSplitterConvention = BALANCED) -> np.ndarray:
    """Amplitudes over :func:`output_basis` for an input-path state."""
    total = state.total_photons
    vec = np.zeros(len(output_basis(total)), dtype=complex)
    for basis, amp in state:
        vec += amp * _amplitude_row(basis, convention)
    return vec


def oracle_distribution(state: PureState, convention: BeamSplitterConvention = BALANCED
                        ) -> dict[DetectionPattern, float]:
    total = state.total_photons
    probs = np.abs(output_amplitudes(state, convention)) ** 2
    dist = {p: 0.0 for p in all_patterns(total)}
    for out, p in zip(output_basis(total), probs):
        dist[DetectionPattern(out.path_total("C"), out.path_total("D"))] += float(p)
    return dist


def oracle_detection_probability(state: PureState, pattern: DetectionPattern,
                                 convention: BeamSplitterConvention = BALANCED) -> float:
    """Probability of ``pattern`` for an input-path state, by permanents."""
    if pattern.total != state.total_photons:
        raise ParameterError(
            f"pattern {pattern} has {pattern.total} photons, state has {state.total_photons}")
    return oracle_distribution(state, convention)[pattern]
