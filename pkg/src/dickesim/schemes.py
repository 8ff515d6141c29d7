"""Catalog of Dicke-state preparation schemes and the end-to-end runner.

Every scheme builds to the same shape: a composed circuit, an input Fock
state, a detection pattern, a qudit register, a Dicke target, a parallel
factor, and optional feedforward phases. :func:`run_scheme` simulates the
single detection window (fixed ports, fixed herald mode) and checks that the
simulated probability times the parallel factor reproduces the closed form
to 1e-10.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, ParameterError, VerificationFailure
from .evolve import apply_transfer
from .fock import FockState, Occupation, basis_state
from .formulas import p_opt, scheme_probability
from .interferometer import (
    TransferMatrix,
    all_one,
    beam_splitter,
    bs_tree,
    dft,
    identity,
    parallel,
    pbs,
    permutation,
    sequential,
)
from .postselect import (
    CountConstraint,
    DickeSpec,
    PostselectionPattern,
    QuditState,
    apply_mode_phases,
    dicke,
    extract_qudits,
    fidelity,
    phase_correction,
    project,
)

SCHEME_NAMES = (
    "operator_all_one",
    "fock_single_mode",
    "prep_single_multiport",
    "prep_per_level",
    "ancilla",
    "appendix_d4",
)

PER_LEVEL_VARIANTS = ("merged", "separate")

SIMULATION_N_CAP = 6
PROBABILITY_TOL = 1e-10


@dataclass(frozen=True)
class SchemeSpec:
    """Which scheme to run and at what size.

    ``p`` and ``herald_mode`` apply to the ancilla scheme only; ``variant``
    selects how the per-level preparation feeds the final multiport
    ("merged" joins all bunched groups into one fan-out, "separate" sends
    each group into its own input port and corrects the resulting phases).
    """

    scheme: str
    n: int
    k: tuple[int, ...]
    p: float | None = None
    herald_mode: int = 1
    variant: str = "merged"

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(v) for v in self.k))
        if self.scheme not in SCHEME_NAMES:
            raise ParameterError(
                f"unknown scheme {self.scheme!r}; choose from {', '.join(SCHEME_NAMES)}"
            )
        if self.n < 1:
            raise ParameterError(f"need at least one photon, got n={self.n}")
        if self.n > SIMULATION_N_CAP:
            raise CapacityError(
                f"n={self.n} exceeds the simulation cap {SIMULATION_N_CAP}"
            )
        if not self.k or any(v < 0 for v in self.k) or sum(self.k) != self.n:
            raise ParameterError(
                f"profile {self.k} must be nonnegative and sum to n={self.n}"
            )
        if self.scheme != "ancilla":
            if self.p is not None:
                raise ParameterError(f"{self.scheme} takes no transmissivity")
            if self.herald_mode != 1:
                raise ParameterError(f"{self.scheme} takes no herald mode")
        if self.scheme != "prep_per_level" and self.variant != "merged":
            raise ParameterError(f"{self.scheme} has no preparation variants")
        if self.scheme in ("prep_per_level", "ancilla", "appendix_d4"):
            if any(v < 1 for v in self.k):
                raise ParameterError(
                    f"{self.scheme} needs every level populated, got {self.k}"
                )
        if self.scheme == "prep_per_level" and self.variant not in PER_LEVEL_VARIANTS:
            raise ParameterError(
                f"variant must be one of {PER_LEVEL_VARIANTS}, got {self.variant!r}"
            )
        if self.scheme == "ancilla":
            if len(self.k) < 2:
                raise ParameterError("the heralded scheme needs at least two levels")
            if self.p is not None and not 0.0 <= self.p <= 1.0:
                raise ParameterError(f"transmissivity must lie in [0, 1], got {self.p}")
            if not 1 <= self.herald_mode <= self.n:
                raise ParameterError(
                    f"herald mode {self.herald_mode} outside 1..{self.n}"
                )
        if self.scheme == "appendix_d4" and (self.n, self.k) != (4, (2, 2)):
            raise ParameterError("the splitter-tree layout is fixed at n=4, k=(2, 2)")

    @property
    def num_ancilla(self) -> int:
        return self.n - self.k[0] if self.scheme == "ancilla" else 0


@dataclass(frozen=True)
class BuiltScheme:
    """The simulable pieces of one scheme instance."""

    circuit: TransferMatrix
    input_state: FockState
    pattern: PostselectionPattern
    register: tuple[int, ...]
    target: DickeSpec
    parallel_factor: int
    # feedforward corrections, per internal level: {level: {mode: phase}}
    level_phases: Mapping[int, Mapping[int, complex]] | None = None


@dataclass(frozen=True)
class RunReport:
    """Outcome of one simulated detection window."""

    scheme: str
    n: int
    k: tuple[int, ...]
    p: float | None
    probability: float
    parallel_factor: int
    formula: float
    fidelity: float
    state: FockState
    qudits: QuditState
    wall_time_s: float

    def to_json_dict(self) -> dict:
        """Serializable report; key order is part of the output contract."""
        terms = []
        for occ, amp in sorted(self.state.items(), key=lambda t: t[0].items):
            terms.append(
                {
                    "occupation": [[m, lv, c] for (m, lv), c in occ],
                    "re": float(amp.real),
                    "im": float(amp.imag),
                }
            )
        return {
            "scheme": self.scheme,
            "n": self.n,
            "k": list(self.k),
            "p": self.p,
            "probability": self.probability,
            "parallel_factor": self.parallel_factor,
            "formula": self.formula,
            "fidelity": self.fidelity,
            "state": terms,
        }


def _photon_levels(k: Sequence[int]) -> list[int]:
    return [level for level, count in enumerate(k) for _ in range(count)]


def _with_levels(block: np.ndarray, levels: int) -> TransferMatrix:
    stacked = np.repeat(np.asarray(block, dtype=np.complex128)[np.newaxis], levels, 0)
    row_norms = np.sqrt(np.sum(np.abs(stacked) ** 2, axis=2))
    return TransferMatrix(
        stacked, subnormalized=bool(np.max(np.abs(row_norms - 1.0)) > 1e-12)
    )


def _build_operator_all_one(spec: SchemeSpec) -> BuiltScheme:
    n, d = spec.n, len(spec.k)
    # The uniform spreader is applied to the product of creation operators
    # divided by sqrt(prod k_j!); that normalization makes the postselected
    # branch carry exactly n!/n^n of the weight regardless of the profile.
    scale = 1.0
    for v in spec.k:
        scale *= math.factorial(v)
    photons = Occupation.from_photons(
        (mode, level) for mode, level in enumerate(_photon_levels(spec.k))
    )
    input_state = basis_state(photons, modes=n, levels=d) * (1.0 / math.sqrt(scale))
    return BuiltScheme(
        circuit=all_one(n, d),
        input_state=input_state,
        pattern=PostselectionPattern.one_photon_per_mode(range(n)),
        register=tuple(range(n)),
        target=DickeSpec(n, spec.k),
        parallel_factor=1,
    )


def _build_fock_single_mode(spec: SchemeSpec) -> BuiltScheme:
    n, d = spec.n, len(spec.k)
    occ = {(0, j): v for j, v in enumerate(spec.k) if v > 0}
    return BuiltScheme(
        circuit=dft(n, d),
        input_state=basis_state(occ, modes=n, levels=d),
        pattern=PostselectionPattern.one_photon_per_mode(range(n)),
        register=tuple(range(n)),
        target=DickeSpec(n, spec.k),
        parallel_factor=1,
    )


def _build_prep_single_multiport(spec: SchemeSpec) -> BuiltScheme:
    n, d = spec.n, len(spec.k)
    # First multiport bunches the singles; its port 0 feeds a second
    # spreader (one row suffices) while ports 1..n-1 exit to discards.
    route = np.zeros((n, 2 * n - 1), dtype=np.complex128)
    route[0, :n] = 1.0 / math.sqrt(n)
    for m in range(1, n):
        route[m, n + m - 1] = 1.0
    circuit = sequential(dft(n, d), _with_levels(route, d))
    photons = Occupation.from_photons(
        (mode, level) for mode, level in enumerate(_photon_levels(spec.k))
    )
    return BuiltScheme(
        circuit=circuit,
        input_state=basis_state(photons, modes=n, levels=d),
        pattern=PostselectionPattern.one_photon_per_mode(range(n)),
        register=tuple(range(n)),
        target=DickeSpec(n, spec.k),
        parallel_factor=n,
    )


def _build_prep_per_level(spec: SchemeSpec) -> BuiltScheme:
    n, d = spec.n, len(spec.k)
    offsets = [sum(spec.k[:j]) for j in range(d)]
    stage1 = parallel([dft(v, d) for v in spec.k])
    # Port 0 of every group feeds the shared spreader; the other ports exit
    # to discards. "merged" collects all groups into the same fan-out row,
    # "separate" gives group j row j of an n-port multiport, whose phases
    # are undone by feedforward afterwards.
    route = np.zeros((n, 2 * n - d), dtype=np.complex128)
    spread = dft(n).block(0)
    discard = n
    for j, v in enumerate(spec.k):
        if spec.variant == "merged":
            route[offsets[j], :n] = 1.0 / math.sqrt(n)
        else:
            route[offsets[j], :n] = spread[j]
        for t in range(1, v):
            route[offsets[j] + t, discard] = 1.0
            discard += 1
    circuit = sequential(stage1, _with_levels(route, d))
    photons = Occupation.from_photons(
        (offsets[j] + t, j) for j, v in enumerate(spec.k) for t in range(v)
    )
    level_phases = None
    if spec.variant == "separate":
        level_phases = {
            j: {l: np.exp(2j * np.pi * j * l / n) for l in range(n)}
            for j in range(1, d)
        }
    return BuiltScheme(
        circuit=circuit,
        input_state=basis_state(photons, modes=n, levels=d),
        pattern=PostselectionPattern.one_photon_per_mode(range(n)),
        register=tuple(range(n)),
        target=DickeSpec(n, spec.k),
        parallel_factor=min(spec.k),
        level_phases=level_phases,
    )


def _build_ancilla(spec: SchemeSpec) -> BuiltScheme:
    n, d = spec.n, len(spec.k)
    num_anc = n - spec.k[0]
    p = spec.p if spec.p is not None else p_opt(n, num_anc)
    # Input layout: main photon i (level 0) on mode 2i with its splitter's
    # reflected arm on 2i+1; the bunched level-j ancilla group on mode
    # 2n+j-1. Output layout: qudit modes 0..n-1, herald ports n..2n-1.
    stage_a = parallel([beam_splitter(p, d)] * n + [identity(d - 1, d)])
    route = np.zeros((2 * n + d - 1, 2 * n), dtype=np.complex128)
    herald = dft(n).block(0)
    for i in range(n):
        route[2 * i, i] = 1.0
        route[2 * i + 1, n:] = herald[i]
    route[2 * n :, :n] = 1.0 / math.sqrt(n)
    circuit = sequential(stage_a, _with_levels(route, d))
    occ: dict[tuple[int, int], int] = {(2 * i, 0): 1 for i in range(n)}
    for j in range(1, d):
        occ[(2 * n + j - 1, j)] = spec.k[j]
    pattern = PostselectionPattern.one_photon_per_mode(
        range(n),
        extra=[CountConstraint(frozenset({n + spec.herald_mode - 1}), num_anc, 0)],
    )
    return BuiltScheme(
        circuit=circuit,
        input_state=basis_state(occ, modes=2 * n + d - 1, levels=d),
        pattern=pattern,
        register=tuple(range(n)),
        target=DickeSpec(n, spec.k),
        parallel_factor=n,
        level_phases={0: phase_correction(n, spec.herald_mode)},
    )


def _build_appendix_d4(spec: SchemeSpec) -> BuiltScheme:
    # Four photons (two horizontal, two vertical), each entering port 0 of
    # its own four-mode splitter tree. Output r of tree i is rewired to
    # input i of detection station r; each station sorts by polarization,
    # recombines the two sorted lines on a balanced splitter, and detects
    # on its first output.
    trees = parallel([bs_tree(4, 2)] * 4)
    dest = [0] * 16
    for i in range(4):
        for r in range(4):
            dest[4 * i + r] = 4 * r + i
    rewire = permutation(dest, 2)
    sort = permutation((0, 2, 1, 3), 2)
    station = sequential(
        sequential(sequential(sort, parallel([pbs(), pbs()])), sort),
        parallel([beam_splitter(0.5, 2), identity(2, 2)]),
    )
    circuit = sequential(sequential(trees, rewire), parallel([station] * 4))
    photons = Occupation.from_photons(
        (4 * i, level) for i, level in enumerate((0, 0, 1, 1))
    )
    detectors = (0, 4, 8, 12)
    return BuiltScheme(
        circuit=circuit,
        input_state=basis_state(photons, modes=16, levels=2),
        pattern=PostselectionPattern.one_photon_per_mode(detectors),
        register=detectors,
        target=DickeSpec(4, (2, 2)),
        parallel_factor=2,
    )


_BUILDERS = {
    "operator_all_one": _build_operator_all_one,
    "fock_single_mode": _build_fock_single_mode,
    "prep_single_multiport": _build_prep_single_multiport,
    "prep_per_level": _build_prep_per_level,
    "ancilla": _build_ancilla,
    "appendix_d4": _build_appendix_d4,
}


def build_scheme(spec: SchemeSpec) -> BuiltScheme:
    """Compose the circuit, input, pattern, and target for one scheme."""
    return _BUILDERS[spec.scheme](spec)


def run_scheme(spec: SchemeSpec, *, correct_phases: bool = True) -> RunReport:
    """Simulate one detection window and verify it against the closed form.

    The reported probability is for fixed detector assignments (and a fixed
    herald port); multiplied by the parallel factor it must match the
    formula to 1e-10, else :class:`VerificationFailure` is raised. Pass
    ``correct_phases=False`` to skip the feedforward phases and observe the
    raw (phase-afflicted) fidelity.
    """
    start = time.perf_counter()
    built = build_scheme(spec)
    evolved = apply_transfer(built.circuit, built.input_state)
    conditioned, probability = project(evolved, built.pattern)
    if correct_phases and built.level_phases is not None:
        for level, phases in built.level_phases.items():
            conditioned = apply_mode_phases(conditioned, phases, level=level)
    qudits = extract_qudits(conditioned, built.register)
    fid = fidelity(qudits, dicke(built.target))
    p_used = None
    if spec.scheme == "ancilla":
        p_used = spec.p if spec.p is not None else p_opt(spec.n, spec.num_ancilla)
    formula = scheme_probability(spec.scheme, spec.n, spec.k, p_used).value
    gap = abs(probability * built.parallel_factor - formula)
    if gap > PROBABILITY_TOL:
        raise VerificationFailure(
            f"{spec.scheme} n={spec.n} k={spec.k}: simulated "
            f"{probability} x {built.parallel_factor} = "
            f"{probability * built.parallel_factor} vs formula {formula} "
            f"(gap {gap:.3e})"
        )
    return RunReport(
        scheme=spec.scheme,
        n=spec.n,
        k=spec.k,
        p=p_used,
        probability=float(probability),
        parallel_factor=built.parallel_factor,
        formula=float(formula),
        fidelity=float(fid),
        state=conditioned,
        qudits=qudits,
        wall_time_s=time.perf_counter() - start,
    )
