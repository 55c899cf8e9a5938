"""Sparse pure states over Fock basis states on a (path x internal mode) lattice.

Paths ``A`` and ``B`` are the interferometer inputs, ``C`` and ``D`` the
outputs.  Internal mode 0 is the undelayed reference wavepacket and internal
mode 1 its orthogonal complement, so a photon in internal mode 1 is a
"tilded" photon that cannot interfere with the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator, Mapping

from .errors import CapacityError, ParameterError, PreconditionError
from .wavepacket import DelayDecomposition

PHOTON_CAP = 8
PRUNE_THRESHOLD = 1e-15


class Path(IntEnum):
    A = 0
    B = 1
    C = 2
    D = 3

    def __str__(self):
        return self.name


INPUT_PATHS = (Path.A, Path.B)
OUTPUT_PATHS = (Path.C, Path.D)


@dataclass(frozen=True, order=True)
class ModeLabel:
    path: Path
    internal: int = 0

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path) if not isinstance(self.path, str)
                           else Path[self.path])
        if self.internal not in (0, 1):
            raise ParameterError(f"internal mode must be 0 or 1, got {self.internal!r}")

    def __str__(self):
        return f"{self.path}{self.internal}"


def _as_mode(key) -> ModeLabel:
    if isinstance(key, ModeLabel):
        return key
    if isinstance(key, str):
        return ModeLabel(key[0], int(key[1:]) if len(key) > 1 else 0)
    path, internal = key
    return ModeLabel(path, internal)


@dataclass(frozen=True)
class FockBasisState:
    """Occupation numbers, stored as a sorted tuple of ``(mode, count)`` with count > 0."""

    occupation: tuple[tuple[ModeLabel, int], ...] = ()

    def __post_init__(self):
        counts: dict[ModeLabel, int] = {}
        for key, n in self.occupation:
            n = int(n)
            if n < 0:
                raise ParameterError(f"negative photon count {n} in mode {key}")
            mode = _as_mode(key)
            counts[mode] = counts.get(mode, 0) + n
        object.__setattr__(
            self, "occupation", tuple(sorted((m, n) for m, n in counts.items() if n > 0)))

    @classmethod
    def from_counts(cls, counts: Mapping) -> FockBasisState:
        """Build from a mapping such as ``{"A0": 2, ("B", 1): 1}``."""
        return cls(tuple(counts.items()))

    def __iter__(self) -> Iterator[tuple[ModeLabel, int]]:
        return iter(self.occupation)

    def count(self, mode) -> int:
        mode = _as_mode(mode)
        for m, n in self.occupation:
            if m == mode:
                return n
        return 0

    @property
    def total(self) -> int:
        return sum(n for _, n in self.occupation)

    def path_total(self, path) -> int:
        path = Path[path] if isinstance(path, str) else Path(path)
        return sum(n for m, n in self.occupation if m.path == path)

    def internal_total(self, internal: int) -> int:
        return sum(n for m, n in self.occupation if m.internal == internal)

    @property
    def paths(self) -> frozenset[Path]:
        return frozenset(m.path for m, _ in self.occupation)

    def __str__(self):
        return "|" + ", ".join(f"{m}:{n}" for m, n in self.occupation) + ">"


def ket(a: int = 0, b: int = 0, a1: int = 0, b1: int = 0) -> FockBasisState:
    """Input-path ket with ``a``/``b`` reference photons and ``a1``/``b1`` tilded photons."""
    return FockBasisState.from_counts({"A0": a, "B0": b, "A1": a1, "B1": b1})


def out_ket(c: int = 0, d: int = 0, c1: int = 0, d1: int = 0) -> FockBasisState:
    """Output-path counterpart of :func:`ket`."""
    return FockBasisState.from_counts({"C0": c, "D0": d, "C1": c1, "D1": d1})


@dataclass(frozen=True)
class PureState:
    """Superposition of basis states sharing one total photon number.

    Amplitudes below ``PRUNE_THRESHOLD`` in magnitude are dropped on
    construction. Treat ``terms`` as read-only.
    """

    terms: Mapping[FockBasisState, complex] = field(default_factory=dict)

    def __post_init__(self):
        pruned = {s: complex(a) for s, a in self.terms.items() if abs(a) >= PRUNE_THRESHOLD}
        totals = {s.total for s in pruned}
        if len(totals) > 1:
            raise ParameterError(f"basis states with different photon numbers: {sorted(totals)}")
        object.__setattr__(self, "terms", pruned)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[FockBasisState, complex]]) -> PureState:
        """Accumulate amplitudes, summing repeated basis states."""
        acc: dict[FockBasisState, complex] = {}
        for s, a in pairs:
            acc[s] = acc.get(s, 0j) + a
        return cls(acc)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def amplitude(self, basis: FockBasisState) -> complex:
        return self.terms.get(basis, 0j)

    @property
    def total_photons(self) -> int:
        for s in self.terms:
            return s.total
        return 0

    @property
    def paths(self) -> frozenset[Path]:
        out: frozenset[Path] = frozenset()
        for s in self.terms:
            out |= s.paths
        return out

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def is_close(self, other: PureState, tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= tol for k in keys)

    def __str__(self):
        return " + ".join(f"({a:.6g}){s}" for s, a in self.terms.items()) or "0"


def check_photon_cap(total: int):
    if total > PHOTON_CAP:
        raise CapacityError(f"{total} photons exceed the cap of {PHOTON_CAP}")


def build_nm_superposition(n: int, m: int) -> PureState:
    """``(|n,m> + |m,n>)/sqrt(2)`` with every photon in the reference mode.

    For ``n == m`` both kets coincide and the result is ``|n,n>`` with
    amplitude 1.
    """
    if m < 0 or n < m:
        raise ParameterError(f"need n >= m >= 0, got n={n}, m={m}")
    if n + m < 1:
        raise ParameterError("need at least one photon")
    check_photon_cap(n + m)
    if n == m:
        return PureState({ket(n, n): 1.0})
    r = 1 / math.sqrt(2)
    return PureState({ket(n, m): r, ket(m, n): r})


def apply_delay_to_path_b(state: PureState, decomposition: DelayDecomposition) -> PureState:
    """Rewrite every reference photon in path B as ``alpha*A0 + beta*A1``.

    A block of ``k`` reference photons becomes
    ``sum_j sqrt(C(k, j)) alpha**(k-j) beta**j |k-j, j~>``.
    """
    if state.paths - set(INPUT_PATHS):
        raise PreconditionError("delay acts on input paths A/B only")
    alpha, beta = decomposition.alpha, decomposition.beta
    pairs = []
    for basis, amp in state:
        if basis.count("B1"):
            raise PreconditionError(f"{basis} already has tilded photons in path B")
        k = basis.count("B0")
        rest = {m: n for m, n in basis if m.path != Path.B}
        for j in range(k + 1):
            coeff = math.sqrt(math.comb(k, j)) * alpha ** (k - j) * beta ** j
            new = FockBasisState.from_counts({**rest, "B0": k - j, "B1": j})
            pairs.append((new, amp * coeff))
    return PureState.from_pairs(pairs)


def swap_input_paths(state: PureState) -> PureState:
    """Exchange the roles of paths A and B (or C and D) in every basis state."""
    swap = {Path.A: Path.B, Path.B: Path.A, Path.C: Path.D, Path.D: Path.C}
    return PureState({
        FockBasisState(tuple((ModeLabel(swap[m.path], m.internal), n) for m, n in s)): a
        for s, a in state
    })
