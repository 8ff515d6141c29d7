"""Closed-form success probabilities and their crossover analysis.

Conventions shared by all formulas:

* ``n`` photons/qudits, level profile ``k = (k_0, ..., k_{d-1})`` with
  ``sum(k) == n``; heralded schemes use ``K = n - k_0`` ancillary photons.
* Values with an explicit parallelization multiplier (x n or x k_min)
  include it; :func:`scheme_probability` records the multiplier so the
  single-window simulated number can be compared.
* Combinatorial ratios are evaluated in exact integer arithmetic up to
  ``n`` = :data:`EXACT_LIMIT` and in log-Gamma space beyond, which keeps the
  crossover tables stable out to n = 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ParameterError, RootBracketError

EXACT_LIMIT = 20
FORMULA_N_CAP = 30

QUBIT_K1_MAX = 20
QUTRIT_K1_MAX = 10

_PANELS = ("qubit", "qutrit")
_CONTOURS = ("first", "second")


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"need at least one photon, got n={n}")
    if n > FORMULA_N_CAP:
        raise CapacityError(f"n={n} exceeds the formula cap {FORMULA_N_CAP}")


def _check_profile(n: int, k: Sequence[int], positive: bool) -> tuple[int, ...]:
    profile = tuple(int(v) for v in k)
    if not profile or any(v < 0 for v in profile) or sum(profile) != n:
        raise ParameterError(f"profile {profile} must be nonnegative and sum to {n}")
    if positive and any(v < 1 for v in profile):
        raise ParameterError(f"profile {profile} must have every level populated")
    return profile


def p_op(n: int) -> float:
    """n!/n^n: one photon in each of n output modes of the uniform spreader.

    Independent of the level profile.
    """
    _check_n(n)
    if n <= EXACT_LIMIT:
        return math.factorial(n) / n**n
    return math.exp(math.lgamma(n + 1) - n * math.log(n))


def p_single_multiport(n: int, k: Sequence[int]) -> float:
    """n! * prod(k_j!) * n / n^(2n): single-photon inputs, one shared multiport.

    All n photons are first bunched into one fixed port of a symmetric
    n-port, then spread by a second n-port; the trailing factor n counts the
    parallel second stages, one per port of the first.
    """
    _check_n(n)
    profile = _check_profile(n, k, positive=False)
    if n <= EXACT_LIMIT:
        num = math.factorial(n) * n
        for v in profile:
            num *= math.factorial(v)
        return num / n ** (2 * n)
    log = math.lgamma(n + 1) + math.log(n) - 2 * n * math.log(n)
    for v in profile:
        log += math.lgamma(v + 1)
    return math.exp(log)


def p_per_level(n: int, k: Sequence[int]) -> float:
    """n!/n^n * prod(k_j!/k_j^k_j) * min(k): per-level bunching then one spreader.

    Each level group of k_j single photons is bunched in its own k_j-port
    first; the factor min(k) counts the parallel detection windows. Every
    level must be populated.
    """
    _check_n(n)
    profile = _check_profile(n, k, positive=True)
    kmin = min(profile)
    if n <= EXACT_LIMIT:
        num = math.factorial(n) * kmin
        den = n**n
        for v in profile:
            num *= math.factorial(v)
            den *= v**v
        return num / den
    log = math.lgamma(n + 1) - n * math.log(n) + math.log(kmin)
    for v in profile:
        log += math.lgamma(v + 1) - v * math.log(v)
    return math.exp(log)


def p_ancilla_operator(n: int, num_ancilla: int, p: float) -> float:
    """n!K!/(n-K)! * p^(n-K) (1-p)^K / n^K: heralded spreading, idealized herald.

    Success means every main photon either survives its splitter or is
    replaced by an ancillary photon, with all K reflected photons collected
    in a single ancilla mode.
    """
    _check_n(n)
    kk = int(num_ancilla)
    if not 1 <= kk <= n:
        raise ParameterError(f"need 1 <= ancilla count <= {n}, got {kk}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"transmissivity must lie in [0, 1], got {p}")
    if n <= EXACT_LIMIT:
        comb = math.factorial(n) * math.factorial(kk) // math.factorial(n - kk)
        return comb / n**kk * p ** (n - kk) * (1.0 - p) ** kk
    log = math.lgamma(n + 1) + math.lgamma(kk + 1) - math.lgamma(n - kk + 1) - kk * math.log(n)
    return math.exp(log) * p ** (n - kk) * (1.0 - p) ** kk


def p_ancilla_optical(n: int, num_ancilla: int, p: float) -> float:
    """Heralded spreading with an n-port herald: operator value / n^K * n.

    Splitting the herald over n ports costs n^-K per window; accepting any
    of the n herald ports (with feedforward) restores a factor n.
    """
    kk = int(num_ancilla)
    return p_ancilla_operator(n, kk, p) / float(n) ** kk * n


def p_opt(n: int, num_ancilla: int) -> float:
    """(n-K)/n, the transmissivity maximizing the heralded probability."""
    _check_n(n)
    kk = int(num_ancilla)
    if not 1 <= kk <= n:
        raise ParameterError(f"need 1 <= ancilla count <= {n}, got {kk}")
    return (n - kk) / n


def p_ancilla_optical_max(n: int, num_ancilla: int) -> float:
    """n!K!/(n-K)! * (n-K)^(n-K) K^K / n^(n+2K) * n: optical value at p_opt."""
    _check_n(n)
    kk = int(num_ancilla)
    if not 1 <= kk <= n:
        raise ParameterError(f"need 1 <= ancilla count <= {n}, got {kk}")
    if n <= EXACT_LIMIT:
        num = (
            math.factorial(n)
            * math.factorial(kk)
            * (n - kk) ** (n - kk)
            * kk**kk
            * n
        )
        den = math.factorial(n - kk) * n ** (n + 2 * kk)
        return num / den
    log = (
        math.lgamma(n + 1)
        + math.lgamma(kk + 1)
        - math.lgamma(n - kk + 1)
        + (n - kk) * math.log(n - kk)
        + kk * math.log(kk)
        - (n + 2 * kk) * math.log(n)
        + math.log(n)
    )
    return math.exp(log)


def p_ancilla_final(n: int, k: Sequence[int]) -> float:
    """Full heralded pipeline at p_opt including per-level input bunching.

    p_ancilla_optical_max(n, K) * prod_{j>=1}(k_j!/k_j^k_j) with
    K = n - k_0; every level must be populated and at least one ancillary
    level must exist.
    """
    _check_n(n)
    profile = _check_profile(n, k, positive=True)
    if len(profile) < 2:
        raise ParameterError("heralded preparation needs at least two levels")
    kk = n - profile[0]
    value = p_ancilla_optical_max(n, kk)
    for v in profile[1:]:
        value *= math.factorial(v) / v**v
    return value


@dataclass(frozen=True)
class SchemeProbability:
    """Closed-form probability of one catalog scheme, with its multiplier."""

    scheme: str
    n: int
    k: tuple[int, ...]
    num_ancilla: int
    p: float | None
    value: float
    parallel_factor: int


def scheme_probability(
    scheme: str, n: int, k: Sequence[int], p: float | None = None
) -> SchemeProbability:
    """Formula value and parallelization multiplier for a catalog scheme."""
    profile = tuple(int(v) for v in k)
    if scheme in ("operator_all_one", "fock_single_mode"):
        return SchemeProbability(scheme, n, profile, 0, None, p_op(n), 1)
    if scheme == "prep_single_multiport":
        return SchemeProbability(scheme, n, profile, 0, None, p_single_multiport(n, profile), n)
    if scheme == "prep_per_level":
        return SchemeProbability(
            scheme, n, profile, 0, None, p_per_level(n, profile), min(profile)
        )
    if scheme == "ancilla":
        kk = n - profile[0]
        pv = p_opt(n, kk) if p is None else float(p)
        return SchemeProbability(
            scheme, n, profile, kk, pv, p_ancilla_optical(n, kk, pv), n
        )
    if scheme == "appendix_d4":
        # The splitter-tree realization runs a single detection window; its
        # probability equals the per-level scheme value without the k_min
        # multiplier, so the multiplier here is exactly that k_min = 2.
        if (n, profile) != (4, (2, 2)):
            raise ParameterError("the tree detection layout is fixed at n=4, k=(2, 2)")
        return SchemeProbability(scheme, n, profile, 0, None, p_per_level(4, (2, 2)), 2)
    raise ParameterError(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------------------
# Continuous-n crossovers between the heralded and ancilla-free schemes.


def _log_p_op_cont(n: float) -> float:
    return math.lgamma(n + 1) - n * math.log(n)


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def _profile_cont(panel: str, k1: int, n: float) -> tuple[float, list[int]]:
    """Continuous k_0 and the integer single-level part of the profile."""
    if panel == "qubit":
        return n - k1, [k1]
    return n - 2 * k1, [k1, k1]


def _log_p_per_level_cont(panel: str, k1: int, n: float) -> float:
    k0, singles = _profile_cont(panel, k1, n)
    log = _log_p_op_cont(n) + math.lgamma(k0 + 1) - _xlogx(k0)
    for v in singles:
        log += math.lgamma(v + 1) - _xlogx(v)
    return log + math.log(min(k0, float(k1)))


def _log_p_ancilla_final_cont(panel: str, k1: int, n: float) -> float:
    k0, singles = _profile_cont(panel, k1, n)
    kk = n - k0
    log = (
        math.lgamma(n + 1)
        + math.lgamma(kk + 1)
        - math.lgamma(k0 + 1)
        + _xlogx(k0)
        + _xlogx(kk)
        - (n + 2 * kk) * math.log(n)
        + math.log(n)
    )
    for v in singles:
        log += math.lgamma(v + 1) - _xlogx(v)
    return log


def _contour_gap(panel: str, contour: str, k1: int, n: float) -> float:
    heralded = _log_p_ancilla_final_cont(panel, k1, n)
    if contour == "first":
        return heralded - _log_p_per_level_cont(panel, k1, n)
    return heralded - _log_p_op_cont(n)


def crossover_point(panel: str, contour: str, k1: int, *, tol: float = 1e-9) -> float:
    """Largest continuous n at which the heralded scheme overtakes the other.

    The gap is scanned downward from well above the crossover; the last sign
    change is bracketed and bisected to ``tol``. Beyond the returned point
    the heralded scheme stays ahead.
    """
    if panel not in _PANELS:
        raise ParameterError(f"panel must be one of {_PANELS}")
    if contour not in _CONTOURS:
        raise ParameterError(f"contour must be one of {_CONTOURS}")
    if k1 < 1:
        raise ParameterError("level population must be at least 1")
    kk = k1 if panel == "qubit" else 2 * k1
    lo = kk + 0.05
    hi = 16.0 * k1 + 40.0
    grid = np.arange(hi, lo, -0.25)
    prev_n = float(grid[0])
    prev_gap = _contour_gap(panel, contour, k1, prev_n)
    for n in grid[1:]:
        gap = _contour_gap(panel, contour, k1, float(n))
        if prev_gap == 0.0:
            return prev_n
        if (gap < 0.0) != (prev_gap < 0.0):
            a, b = float(n), prev_n
            ga = gap
            while b - a > tol:
                mid = 0.5 * (a + b)
                gm = _contour_gap(panel, contour, k1, mid)
                if (gm < 0.0) == (ga < 0.0):
                    a, ga = mid, gm
                else:
                    b = mid
            return 0.5 * (a + b)
        prev_n, prev_gap = float(n), gap
    raise RootBracketError(
        f"no crossover found for panel={panel}, contour={contour}, k1={k1}"
    )


@dataclass(frozen=True)
class ContourFit:
    """Least-squares line n = a*k1 + b through continuous crossover points."""

    panel: str
    contour: str
    a: float
    b: float
    residual_rms: float
    points: tuple[tuple[int, float], ...]


def contour_fit(
    panel: str, contour: str, k1_values: Iterable[int] | None = None
) -> ContourFit:
    """Fit the crossover boundary over the standard k1 grid.

    Defaults: k1 = 1..20 for the qubit panel, 1..10 for the qutrit panel.
    """
    if panel not in _PANELS:
        raise ParameterError(f"panel must be one of {_PANELS}")
    if contour not in _CONTOURS:
        raise ParameterError(f"contour must be one of {_CONTOURS}")
    cap = QUBIT_K1_MAX if panel == "qubit" else QUTRIT_K1_MAX
    if k1_values is None:
        k1_values = range(1, cap + 1)
    ks = [int(v) for v in k1_values]
    if not ks or any(not 1 <= v <= cap for v in ks):
        raise ParameterError(f"k1 values must lie in 1..{cap}")
    points = tuple((k1, crossover_point(panel, contour, k1)) for k1 in ks)
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    a, b = np.polyfit(xs, ys, 1)
    residual_rms = float(np.sqrt(np.mean((ys - (a * xs + b)) ** 2)))
    return ContourFit(panel, contour, float(a), float(b), residual_rms, points)


@dataclass(frozen=True)
class CrossoverRow:
    """All applicable closed forms at one (n, k), plus heralded-minus-other gaps."""

    n: int
    k: tuple[int, ...]
    p_op: float
    p_single_multiport: float
    p_per_level: float
    p_ancilla_final: float
    ancilla_minus_per_level: float
    ancilla_minus_op: float


def family_profile(family: str, k1: int, n: int) -> tuple[int, ...]:
    """Level profile of the fixed-k1 family: (n-k1, k1) or (n-2*k1, k1, k1)."""
    if family not in _PANELS:
        raise ParameterError(f"family must be one of {_PANELS}")
    if family == "qubit":
        profile = (n - k1, k1)
    else:
        profile = (n - 2 * k1, k1, k1)
    if profile[0] < 1:
        raise ParameterError(f"n={n} too small for family {family} with k1={k1}")
    return profile


def crossover_table(family: str, k1: int, n_values: Iterable[int]) -> list[CrossoverRow]:
    """Rows of all four closed forms along a fixed-k1 family."""
    rows = []
    for n in n_values:
        profile = family_profile(family, k1, int(n))
        pa = p_ancilla_final(n, profile)
        ppl = p_per_level(n, profile)
        po = p_op(n)
        rows.append(
            CrossoverRow(
                n=int(n),
                k=profile,
                p_op=po,
                p_single_multiport=p_single_multiport(n, profile),
                p_per_level=ppl,
                p_ancilla_final=pa,
                ancilla_minus_per_level=pa - ppl,
                ancilla_minus_op=pa - po,
            )
        )
    return rows
