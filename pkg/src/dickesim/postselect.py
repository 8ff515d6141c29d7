"""Postselection patterns, qudit extraction, and symmetric target states.

A pattern is a conjunction of exact photon-count constraints over disjoint
spatial mode sets, with strict accounting: modes not covered by any
constraint must be empty for an occupation to be accepted. Projection keeps
the accepted terms; their squared norm is the postselection probability.

Accepted states that place exactly one photon in each register mode encode a
qudit word per term and convert to a dense :class:`QuditState`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    CapacityError,
    DegenerateStateError,
    DimensionMismatch,
    EncodingError,
    EntangledAncillaError,
    ParameterError,
)
from .fock import FockState, Occupation

# Dense qudit vectors are capped at levels**qudits <= 2**20 entries.
QUDIT_DIM_CAP = 1 << 20

_PHASE_TOL = 1e-14


@dataclass(frozen=True)
class CountConstraint:
    """Exact photon count over a spatial mode set, optionally level-filtered.

    With ``level`` set, every photon found in the constraint's modes must
    carry that internal level; heralding on ancillary photons uses this to
    reject events where a signal photon strays into the herald arm.
    """

    modes: frozenset[int]
    count: int
    level: int | None = None


class PostselectionPattern:
    """Conjunction of disjoint count constraints with strict accounting."""

    __slots__ = ("constraints", "_owner", "total")

    constraints: tuple[CountConstraint, ...]
    total: int

    def __init__(self, constraints: Iterable[CountConstraint | tuple]):
        normd: list[CountConstraint] = []
        for c in constraints:
            if not isinstance(c, CountConstraint):
                modes, count = c[0], c[1]
                level = c[2] if len(c) > 2 else None
                c = CountConstraint(frozenset(int(m) for m in modes), int(count), level)
            if c.count < 0:
                raise ParameterError(f"negative target count in {c}")
            if not c.modes:
                raise ParameterError("constraint needs at least one mode")
            normd.append(c)
        owner: dict[int, int] = {}
        for idx, c in enumerate(normd):
            for m in c.modes:
                if m in owner:
                    raise ParameterError(f"mode {m} appears in two constraints")
                owner[m] = idx
        self.constraints = tuple(normd)
        self._owner = owner
        self.total = sum(c.count for c in normd)

    @classmethod
    def one_photon_per_mode(
        cls, modes: Iterable[int], extra: Iterable[CountConstraint | tuple] = ()
    ) -> "PostselectionPattern":
        base = [CountConstraint(frozenset({int(m)}), 1) for m in modes]
        return cls([*base, *extra])

    def accepts(self, occ: Occupation) -> bool:
        got = [0] * len(self.constraints)
        for (mode, level), count in occ:
            idx = self._owner.get(mode)
            if idx is None:
                return False  # strict accounting: uncovered modes stay empty
            want = self.constraints[idx]
            if want.level is not None and level != want.level:
                return False
            got[idx] += count
        return all(g == c.count for g, c in zip(got, self.constraints))

    def __repr__(self) -> str:
        return f"<PostselectionPattern constraints={len(self.constraints)} photons={self.total}>"


def project(state: FockState, pattern: PostselectionPattern) -> tuple[FockState, float]:
    """Restrict ``state`` to pattern-accepted occupations.

    Returns the renormalized restriction together with the postselection
    probability (the squared norm of the unnormalized restriction). A
    probability of zero yields a null state, not an error.
    """
    kept = {occ: amp for occ, amp in state.items() if pattern.accepts(occ)}
    probability = sum(abs(a) ** 2 for a in kept.values())
    if probability <= 0.0:
        return FockState.null(state.modes, state.levels, state.photon_number), 0.0
    raw = FockState(state.modes, state.levels, kept, photon_number=state.photon_number)
    return raw.normalized(), float(probability)


@dataclass(frozen=True)
class DickeSpec:
    """Symmetric target: n qudits with k[j] of them in level j."""

    n: int
    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        if self.n < 1:
            raise ParameterError("need at least one qudit")
        if any(v < 0 for v in self.k) or sum(self.k) != self.n:
            raise ParameterError(f"level counts {self.k} must be nonnegative and sum to {self.n}")

    @property
    def levels(self) -> int:
        return len(self.k)

    @property
    def num_terms(self) -> int:
        """Number of distinct level arrangements, n!/prod(k_j!)."""
        out = math.factorial(self.n)
        for v in self.k:
            out //= math.factorial(v)
        return out


class QuditState:
    """Dense state vector of n qudits with d levels each.

    Basis index of the word (s_1, ..., s_n) is sum(s_i * d**(n-1-i)); the
    first qudit is the most significant digit.
    """

    __slots__ = ("amplitudes", "qudits", "levels")

    amplitudes: np.ndarray
    qudits: int
    levels: int

    def __init__(self, amplitudes: np.ndarray, qudits: int, levels: int):
        if qudits < 1 or levels < 1:
            raise DimensionMismatch(f"invalid register ({qudits} qudits, {levels} levels)")
        dim = levels**qudits
        if dim > QUDIT_DIM_CAP:
            raise CapacityError(f"dense dimension {levels}**{qudits} exceeds {QUDIT_DIM_CAP}")
        vec = np.array(amplitudes, dtype=np.complex128, copy=True)
        if vec.shape != (dim,):
            raise DimensionMismatch(f"expected vector of length {dim}, got shape {vec.shape}")
        vec.setflags(write=False)
        self.amplitudes = vec
        self.qudits = qudits
        self.levels = levels

    def index(self, word: Sequence[int]) -> int:
        if len(word) != self.qudits:
            raise DimensionMismatch(f"word length {len(word)} != {self.qudits}")
        idx = 0
        for s in word:
            if not 0 <= int(s) < self.levels:
                raise DimensionMismatch(f"level {s} outside 0..{self.levels - 1}")
            idx = idx * self.levels + int(s)
        return idx

    def amplitude(self, word: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.index(word)])

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __repr__(self) -> str:
        return f"<QuditState qudits={self.qudits} levels={self.levels}>"


def _fix_global_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate so the first nonzero amplitude is real and positive."""
    nz = np.flatnonzero(np.abs(vec) > _PHASE_TOL)
    if nz.size:
        pivot = vec[nz[0]]
        vec = vec * (abs(pivot) / pivot)
    return vec


def extract_qudits(state: FockState, register: Sequence[int]) -> QuditState:
    """Read the qudit word encoded in one photon per register mode.

    Every term must place exactly one photon in each register mode; the
    occupation outside the register must be identical across terms and is
    factored out. The result is normalized with its global phase fixed so
    the first nonzero amplitude is real positive.
    """
    register = [int(m) for m in register]
    if len(set(register)) != len(register) or not register:
        raise ParameterError("register modes must be distinct and nonempty")
    if len(state) == 0:
        raise DegenerateStateError("cannot extract qudits from a null state")
    n = len(register)
    d = state.levels
    position = {m: i for i, m in enumerate(register)}
    if d**n > QUDIT_DIM_CAP:
        raise CapacityError(f"dense dimension {d}**{n} exceeds {QUDIT_DIM_CAP}")
    vec = np.zeros(d**n, dtype=np.complex128)
    rest_ref: tuple | None = None
    for occ, amp in state.items():
        word = [-1] * n
        rest: list[tuple] = []
        for (mode, level), count in occ:
            pos = position.get(mode)
            if pos is None:
                rest.append(((mode, level), count))
                continue
            if count != 1 or word[pos] != -1:
                raise EncodingError(f"register mode {mode} does not hold exactly one photon")
            word[pos] = level
        if any(w < 0 for w in word):
            raise EncodingError("a register mode is empty in some term")
        rest_key = tuple(rest)
        if rest_ref is None:
            rest_ref = rest_key
        elif rest_key != rest_ref:
            raise EntangledAncillaError("non-register occupation varies across terms")
        idx = 0
        for s in word:
            idx = idx * d + s
        vec[idx] += amp
    norm = math.sqrt(float(np.vdot(vec, vec).real))
    if norm <= 0.0:
        raise DegenerateStateError("extracted amplitudes cancelled to zero")
    vec = _fix_global_phase(vec / norm)
    return QuditState(vec, n, d)


def embed_qudits(
    qudits: QuditState,
    register: Sequence[int],
    modes: int,
    rest: Occupation | None = None,
) -> FockState:
    """Write a qudit state back into Fock form, one photon per register mode."""
    register = [int(m) for m in register]
    if len(register) != qudits.qudits:
        raise DimensionMismatch("register size does not match the qudit count")
    rest = rest if rest is not None else Occupation()
    d = qudits.levels
    terms: dict[Occupation, complex] = {}
    for idx in np.flatnonzero(np.abs(qudits.amplitudes) > 0):
        word = []
        v = int(idx)
        for _ in range(qudits.qudits):
            word.append(v % d)
            v //= d
        word.reverse()
        occ = Occupation.from_photons((m, s) for m, s in zip(register, word))
        terms[occ.merge_disjoint(rest)] = complex(qudits.amplitudes[idx])
    return FockState(modes, d, terms)


def _distinct_arrangements(counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All distinct words containing counts[j] copies of level j."""
    total = sum(counts)
    remaining = list(counts)
    word: list[int] = []

    def emit() -> Iterator[tuple[int, ...]]:
        if len(word) == total:
            yield tuple(word)
            return
        for level, left in enumerate(remaining):
            if left:
                remaining[level] -= 1
                word.append(level)
                yield from emit()
                word.pop()
                remaining[level] += 1

    yield from emit()


def dicke(spec: DickeSpec) -> QuditState:
    """Symmetric state with equal weight on every arrangement of the level multiset.

    Each of the n!/prod(k_j!) arrangements carries amplitude
    sqrt(prod(k_j!)/n!).
    """
    d = spec.levels
    if d**spec.n > QUDIT_DIM_CAP:
        raise CapacityError(f"dense dimension {d}**{spec.n} exceeds {QUDIT_DIM_CAP}")
    amp = 1.0
    for v in spec.k:
        amp *= math.factorial(v)
    amp = math.sqrt(amp / math.factorial(spec.n))
    vec = np.zeros(d**spec.n, dtype=np.complex128)
    for word in _distinct_arrangements(spec.k):
        idx = 0
        for s in word:
            idx = idx * d + s
        vec[idx] = amp
    return QuditState(vec, spec.n, d)


def fidelity(a: QuditState, b: QuditState) -> float:
    """|<a|b>|^2 for equal-dimension qudit states."""
    if a.qudits != b.qudits or a.levels != b.levels:
        raise DimensionMismatch(
            f"register shapes differ: ({a.qudits}, {a.levels}) vs ({b.qudits}, {b.levels})"
        )
    val = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    return float(min(max(val, 0.0), 1.0))


def phase_correction(n: int, herald_mode: int) -> dict[int, complex]:
    """Feedforward phases cancelling the herald multiport's imprint.

    Conditioned on all ancillary photons leaving herald port ``herald_mode``
    (1-based), a level-0 photon remaining in output mode l (0-based) carries
    the residual phase exp(+2*pi*i*l*(herald_mode-1)/n); multiplying it by
    exp(-2*pi*i*l*(herald_mode-1)/n) restores the phase-free target for every
    herald port. Port 1 needs no correction.
    """
    if not 1 <= herald_mode <= n:
        raise ParameterError(f"herald mode {herald_mode} outside 1..{n}")
    h = herald_mode - 1
    return {l: cmath.exp(-2j * cmath.pi * l * h / n) for l in range(n)}


def apply_mode_phases(
    state: FockState, phases: Mapping[int, complex], level: int = 0
) -> FockState:
    """Multiply each photon of ``level`` in mode m by phases[m] (missing modes: 1)."""
    terms: dict[Occupation, complex] = {}
    for occ, amp in state.items():
        factor = 1.0 + 0j
        for (mode, lv), count in occ:
            if lv == level and mode in phases:
                factor *= phases[mode] ** count
        terms[occ] = amp * factor
    return FockState(state.modes, state.levels, terms, photon_number=state.photon_number)
