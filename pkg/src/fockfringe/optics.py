"""Beam-splitter evolution by creation-operator substitution, and photon counting."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .errors import ParameterError, PreconditionError
from .fock import (INPUT_PATHS, OUTPUT_PATHS, FockBasisState, ModeLabel, Path,
                   PureState)


def _balanced() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True, eq=False)
class BeamSplitterConvention:
    """Path unitary ``u``: input ``a`` (column 0) and ``b`` (column 1) map to
    ``u[0, j] c + u[1, j] d``.

    The default sends ``a -> (c + d)/sqrt(2)`` and ``b -> (c - d)/sqrt(2)``.
    """

    u: np.ndarray = field(default_factory=_balanced)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        if u.shape != (2, 2):
            raise ParameterError(f"beam splitter must be 2x2, got shape {u.shape}")
        if not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12, rtol=0):
            raise ParameterError("beam splitter matrix is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def key(self) -> tuple:
        return tuple(complex(x) for x in self.u.ravel())

    def __eq__(self, other):
        return isinstance(other, BeamSplitterConvention) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def swapped_outputs(self) -> BeamSplitterConvention:
        """Same device with outputs C and D relabeled."""
        return BeamSplitterConvention(self.u[::-1, :])

    def swapped_inputs(self) -> BeamSplitterConvention:
        return BeamSplitterConvention(self.u[:, ::-1])


BALANCED = BeamSplitterConvention()


@dataclass(frozen=True, order=True)
class DetectionPattern:
    """``m`` photons counted at output C and ``n`` at output D."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ParameterError(f"photon counts must be non-negative, got ({self.m},{self.n})")

    @property
    def total(self) -> int:
        return self.m + self.n

    @classmethod
    def parse(cls, text: str) -> DetectionPattern:
        try:
            m, n = (int(x) for x in text.split(","))
        except ValueError:
            raise ParameterError(f"pattern must look like 'm,n', got {text!r}") from None
        return cls(m, n)

    def __str__(self):
        return f"({self.m},{self.n})"


def all_patterns(total: int) -> list[DetectionPattern]:
    return [DetectionPattern(m, total - m) for m in range(total, -1, -1)]


Monomial = Tuple[ModeLabel, ...]  # sorted multiset of output creation operators
_IMAGE_CACHE: Dict[tuple, Dict[FockBasisState, complex]] = {}


def _basis_image(basis: FockBasisState, convention: BeamSplitterConvention):
    """Output amplitudes of one input basis state (memoized)."""
    key = (basis, convention.key)
    hit = _IMAGE_CACHE.get(key)
    if hit is not None:
        return hit
    u = convention.u
    poly: Dict[Monomial, complex] = {(): 1.0 + 0j}
    norm = 1.0
    for mode, count in basis:
        j = INPUT_PATHS.index(mode.path)
        linear = [(ModeLabel(out, mode.internal), u[i, j])
                  for i, out in enumerate(OUTPUT_PATHS) if u[i, j] != 0]
        norm *= math.factorial(count)
        for _ in range(count):
            nxt: Dict[Monomial, complex] = {}
            for mono, c in poly.items():
                for op, w in linear:
                    new = tuple(sorted(mono + (op,)))
                    nxt[new] = nxt.get(new, 0j) + c * w
            poly = nxt
    image: Dict[FockBasisState, complex] = {}
    for mono, c in poly.items():
        occ = Counter(mono)
        # (c^dag)^k |0> = sqrt(k!) |k>
        ordering = math.prod(math.factorial(k) for k in occ.values())
        image[FockBasisState(tuple(occ.items()))] = c * math.sqrt(ordering / norm)
    _IMAGE_CACHE[key] = image
    return image


def apply_beam_splitter(state: PureState,
                        convention: BeamSplitterConvention = BALANCED) -> PureState:
    """Map a state on paths A/B to paths C/D, acting as identity on internal modes."""
    if state.paths - set(INPUT_PATHS):
        raise PreconditionError("state is not on the input paths A/B")
    acc: Dict[FockBasisState, complex] = {}
    for basis, amp in state:
        for out, w in _basis_image(basis, convention).items():
            acc[out] = acc.get(out, 0j) + amp * w
    return PureState(acc)


def _require_output(state: PureState):
    if state.paths - set(OUTPUT_PATHS):
        raise PreconditionError("state is not on the output paths C/D")


def detection_probability(state: PureState, pattern: DetectionPattern) -> float:
    """Probability of ``pattern``, summed incoherently over internal modes."""
    _require_output(state)
    if pattern.total != state.total_photons:
        raise ParameterError(
            f"pattern {pattern} has {pattern.total} photons, state has {state.total_photons}")
    p = sum(abs(a) ** 2 for s, a in state
            if s.path_total(Path.C) == pattern.m and s.path_total(Path.D) == pattern.n)
    return min(max(p, 0.0), 1.0)


def detection_distribution(state: PureState) -> dict[DetectionPattern, float]:
    """Probabilities of every (m, n) pattern for the state's photon number."""
    _require_output(state)
    dist = {p: 0.0 for p in all_patterns(state.total_photons)}
    for s, a in state:
        dist[DetectionPattern(s.path_total(Path.C), s.path_total(Path.D))] += abs(a) ** 2
    return dist
