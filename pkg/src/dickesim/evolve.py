"""Two independent engines evolve Fock states through transfer matrices.

``apply_transfer`` substitutes every creation operator by its image row and
expands the product of sums photon by photon, carrying a sparse map from
partial monomials to coefficients. ``transition_amplitude`` computes a single
output amplitude directly as a matrix permanent. The two routes share no
code beyond the matrix itself and must agree to high precision on any input;
that cross-check is wired into the verification suite.

Monomial bookkeeping: a basis occupation with counts ``n`` equals the
creation-operator monomial applied to vacuum divided by sqrt(prod n!), so
expansion coefficients convert to basis amplitudes by exactly that factor.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionMismatch, ParameterError
from .fock import FockState, Occupation, OccupationLike, _as_occupation, basis_state
from .interferometer import TransferMatrix, dft
from .permanent import permanent

# Largest permanent evaluated per internal level; 2^20 * 20 complex ops.
PERMANENT_PHOTON_CAP = 20


def monomial_to_basis_factor(counts: Sequence[int]) -> float:
    """sqrt(prod n!) converting a monomial coefficient to a basis amplitude."""
    out = 1.0
    for c in counts:
        out *= math.factorial(c)
    return math.sqrt(out)


def apply_transfer(transfer: TransferMatrix, state: FockState) -> FockState:
    """Evolve ``state`` through ``transfer`` by creation-operator expansion.

    The state must be declared on exactly the matrix input modes and level
    count. Photons are injected one at a time: each unit of each occupied
    label multiplies the partial map by its image row, branching over the
    nonzero entries. Merge order is fixed by insertion order throughout, so
    results are bit-stable across runs.
    """
    if state.modes != transfer.l_in or state.levels != transfer.levels:
        raise DimensionMismatch(
            f"state on ({state.modes} modes, {state.levels} levels) does not match "
            f"transfer input ({transfer.l_in} modes, {transfer.levels} levels)"
        )
    blocks = transfer.blocks
    out_acc: dict[tuple, complex] = {}
    for occ, amp in state.items():
        coeff = amp / monomial_to_basis_factor([c for _, c in occ])
        partial: dict[tuple, complex] = {(): coeff}
        for (mode, level), count in occ:
            row = blocks[level, mode]
            entries = [(int(l), complex(row[l])) for l in np.flatnonzero(row)]
            for _ in range(count):
                grown: dict[tuple, complex] = {}
                for key, c in partial.items():
                    base = dict(key)
                    for out_mode, weight in entries:
                        lbl = (out_mode, level)
                        base[lbl] = base.get(lbl, 0) + 1
                        new_key = tuple(sorted(base.items()))
                        prev = grown.get(new_key)
                        grown[new_key] = c * weight if prev is None else prev + c * weight
                        if base[lbl] == 1:
                            del base[lbl]
                        else:
                            base[lbl] -= 1
                partial = grown
        for key, c in partial.items():
            value = c * monomial_to_basis_factor([cnt for _, cnt in key])
            prev = out_acc.get(key)
            out_acc[key] = value if prev is None else prev + value
    terms = {Occupation(dict(key)): amp for key, amp in out_acc.items()}
    return FockState(transfer.l_out, state.levels, terms, photon_number=state.photon_number)


def transition_amplitude(
    transfer: TransferMatrix,
    occ_in: OccupationLike,
    occ_out: OccupationLike,
    *,
    photon_cap: int = PERMANENT_PHOTON_CAP,
) -> complex:
    """Amplitude <occ_out| transfer |occ_in> from per-level permanents.

    The matrix routes photons within each internal level independently, so
    the amplitude factorizes: for each level, repeat input rows and output
    columns by their counts, take the permanent, and divide by
    sqrt(prod in! * prod out!). Any per-level count mismatch gives 0.
    Levels with more than ``photon_cap`` photons raise :class:`CapacityError`.
    """
    a = _as_occupation(occ_in)
    b = _as_occupation(occ_out)
    if a.max_spatial >= transfer.l_in or a.max_level >= transfer.levels:
        raise DimensionMismatch(f"input occupation {a!r} exceeds the transfer input space")
    if b.max_spatial >= transfer.l_out or b.max_level >= transfer.levels:
        raise DimensionMismatch(f"output occupation {b!r} exceeds the transfer output space")
    levels = set(a.level_totals()) | set(b.level_totals())
    amp = 1.0 + 0j
    for level in sorted(levels):
        rows: list[int] = []
        norm = 1.0
        for (mode, lv), count in a:
            if lv == level:
                rows.extend([mode] * count)
                norm *= math.factorial(count)
        cols: list[int] = []
        for (mode, lv), count in b:
            if lv == level:
                cols.extend([mode] * count)
                norm *= math.factorial(count)
        if len(rows) != len(cols):
            return 0j
        if len(rows) > photon_cap:
            raise CapacityError(
                f"{len(rows)} photons in one level exceeds the permanent cap {photon_cap}"
            )
        if not rows:
            continue
        sub = transfer.blocks[level][np.ix_(rows, cols)]
        amp *= permanent(sub) / math.sqrt(norm)
    return amp


def prep_success(k: int | Sequence[int]) -> tuple[float, FockState]:
    """Probability that all photons sent into a multiport bunch in one fixed port.

    For ``k`` identical photons entering a k-port splitter one per input, the
    fixed-port probability is k!/k^k. For a mixed profile ``(k_0, ..., k_{d-1})``
    of N = sum(k_j) photons entering an N-port one per input, levels do not
    interfere and the probability is prod(k_j!)/N^N. Returns the probability
    together with the conditioned output: the normalized state with every
    photon bunched in port 0.
    """
    if isinstance(k, int):
        if k < 1:
            raise ParameterError("need at least one photon")
        prob = math.factorial(k) / k**k
        return prob, basis_state({(0, 0): k}, modes=k, levels=1)
    profile = [int(v) for v in k]
    if not profile or any(v < 0 for v in profile) or sum(profile) < 1:
        raise ParameterError(f"invalid photon profile {profile}")
    n = sum(profile)
    prob = 1.0
    for kj in profile:
        prob *= math.factorial(kj)
    prob /= float(n**n)
    occ = {(0, j): kj for j, kj in enumerate(profile) if kj > 0}
    return prob, basis_state(occ, modes=n, levels=len(profile))


def bunching_check(k: int) -> tuple[float, float]:
    """Simulated vs closed-form fixed-port bunching probability for k photons.

    Sends k single photons, one per input, through a symmetric k-port and
    reads off the amplitude of the all-in-port-0 occupation.
    """
    prob, _ = prep_success(k)
    circuit = dft(k)
    photons = basis_state(Occupation.from_photons((m, 0) for m in range(k)), k, 1)
    out = apply_transfer(circuit, photons)
    simulated = abs(out.amplitude({(0, 0): k})) ** 2
    return simulated, prob
