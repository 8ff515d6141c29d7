"""Self-contained verification suites behind the `verify` subcommand.

Three suites: `oracle` cross-checks the two evolution engines on random
unitaries, `schemes` sweeps the catalog against the closed forms, and
`formulas` checks the formula layer's internal identities, crossovers, and
contour fits. Each check yields a :class:`CheckResult`; the CLI prints one
line per check and exits nonzero if any failed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import VerificationFailure
from .evolve import apply_transfer, bunching_check, transition_amplitude
from .fock import FockState, Occupation, basis_state
from .formulas import (
    contour_fit,
    p_ancilla_final,
    p_ancilla_optical,
    p_ancilla_optical_max,
    p_op,
    p_opt,
    p_per_level,
    p_single_multiport,
)
from .interferometer import TransferMatrix, dft
from .schemes import SchemeSpec, run_scheme

ORACLE_TOL = 1e-9
FIDELITY_TOL = 1e-10

# Reference slopes of the fitted crossover lines (qubit first/second,
# qutrit first/second) and the acceptance margin on reproducing them.
FIT_REFERENCE = {
    ("qubit", "first"): 2.41059,
    ("qubit", "second"): 6.37539,
    ("qutrit", "first"): 4.8134,
    ("qutrit", "second"): 12.6813,
}
FIT_MARGIN = 0.10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n unitary via QR with phase fixing."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_case(
    rng: np.random.Generator,
) -> tuple[TransferMatrix, FockState, int]:
    modes = int(rng.integers(2, 7))
    levels = int(rng.integers(1, 3))
    photons = int(rng.integers(1, 5))
    blocks = np.stack([haar_unitary(modes, rng) for _ in range(levels)])
    transfer = TransferMatrix(blocks)
    labels = [
        (int(rng.integers(0, modes)), int(rng.integers(0, levels)))
        for _ in range(photons)
    ]
    state = basis_state(Occupation.from_photons(labels), modes, levels)
    return transfer, state, photons


def verify_oracle(trials: int = 200, seed: int = 20260819) -> list[CheckResult]:
    """Expansion engine vs permanent engine on random unitaries."""
    rng = np.random.default_rng(seed)
    worst_gap = 0.0
    worst_norm = 0.0
    for _ in range(trials):
        transfer, state, photons = _random_case(rng)
        (occ_in, _), = tuple(state.items())
        evolved = apply_transfer(transfer, state)
        worst_norm = max(worst_norm, abs(evolved.norm_sq() - 1.0))
        for occ_out, amp in evolved.items():
            ref = transition_amplitude(transfer, occ_in, occ_out)
            worst_gap = max(worst_gap, abs(amp - ref))
            if occ_out.level_totals() != occ_in.level_totals():
                worst_gap = float("inf")
    return [
        CheckResult(
            "oracle.cross_engine",
            worst_gap <= ORACLE_TOL,
            f"{trials} random unitaries, max amplitude gap {worst_gap:.3e}",
        ),
        CheckResult(
            "oracle.norm_preserved",
            worst_norm <= 1e-10,
            f"max |norm^2 - 1| = {worst_norm:.3e} under unitary evolution",
        ),
    ]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``total`` into exactly ``parts`` positive parts."""
    if parts == 1:
        yield (total,)
        return
    for head in range(1, total - parts + 2):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


def _profiles(total: int, max_parts: int) -> Iterator[tuple[int, ...]]:
    for parts in range(1, min(max_parts, total) + 1):
        yield from _compositions(total, parts)


def _run_check(name: str, spec: SchemeSpec, **kwargs) -> CheckResult:
    try:
        report = run_scheme(spec, **kwargs)
    except VerificationFailure as exc:
        return CheckResult(name, False, str(exc))
    if report.fidelity < 1.0 - FIDELITY_TOL:
        return CheckResult(name, False, f"fidelity {report.fidelity} below 1")
    return CheckResult(
        name,
        True,
        f"probability {report.probability:.10g} x {report.parallel_factor} "
        f"matches formula, fidelity 1",
    )


def verify_schemes(n_max: int = 5) -> list[CheckResult]:
    """Catalog sweep: every scheme, every profile with d <= 3, n <= n_max."""
    results: list[CheckResult] = []
    for n in range(1, n_max + 1):
        for k in _profiles(n, 3):
            tag = f"n={n},k={','.join(map(str, k))}"
            for scheme in ("operator_all_one", "fock_single_mode"):
                results.append(_run_check(f"schemes.{scheme}[{tag}]", SchemeSpec(scheme, n, k)))
            results.append(
                _run_check(
                    f"schemes.prep_single_multiport[{tag}]",
                    SchemeSpec("prep_single_multiport", n, k),
                )
            )
            for variant in ("merged", "separate"):
                results.append(
                    _run_check(
                        f"schemes.prep_per_level.{variant}[{tag}]",
                        SchemeSpec("prep_per_level", n, k, variant=variant),
                    )
                )
            if len(k) >= 2:
                num_anc = n - k[0]
                # the n=5 heralded runs are the slow ones; sweep p only below
                p_values = (0.3, 0.5, p_opt(n, num_anc)) if n <= 4 else (p_opt(n, num_anc),)
                for p in p_values:
                    results.append(
                        _run_check(
                            f"schemes.ancilla[{tag},p={p:.6g}]",
                            SchemeSpec("ancilla", n, k, p=p),
                        )
                    )
    results.append(_run_check("schemes.appendix_d4", SchemeSpec("appendix_d4", 4, (2, 2))))
    results.extend(verify_heralds())
    return results


def verify_heralds() -> list[CheckResult]:
    """Every herald port: fidelity 1 after correction, below 1 before."""
    results: list[CheckResult] = []
    for n, num_anc in ((3, 1), (4, 1), (3, 2), (4, 2)):
        k = (n - num_anc, num_anc)
        for herald in range(1, n + 1):
            spec = SchemeSpec("ancilla", n, k, herald_mode=herald)
            name = f"heralds.corrected[n={n},K={num_anc},herald={herald}]"
            results.append(_run_check(name, spec))
            if herald == 1:
                continue
            raw = run_scheme(spec, correct_phases=False)
            results.append(
                CheckResult(
                    f"heralds.uncorrected[n={n},K={num_anc},herald={herald}]",
                    raw.fidelity < 1.0 - FIDELITY_TOL,
                    f"fidelity {raw.fidelity:.6f} strictly below 1 without feedforward",
                )
            )
    return results


def _qubit_closed_forms(n: int, k1: int) -> tuple[float, float, float]:
    """Two-level specializations written out longhand, d = 2."""
    k0 = n - k1
    per_level = (
        math.factorial(n)
        * math.factorial(k0)
        * math.factorial(k1)
        * min(k0, k1)
        / (n**n * k0**k0 * k1**k1)
    )
    single = math.factorial(n) * math.factorial(k0) * math.factorial(k1) * n / n ** (2 * n)
    heralded = (
        math.factorial(n)
        * math.factorial(k1)
        / math.factorial(k0)
        * k0**k0
        * k1**k1
        / n ** (n + 2 * k1)
        * n
        * (math.factorial(k1) / k1**k1)
    )
    return per_level, single, heralded


def _qutrit_closed_forms(n: int, k1: int, k2: int) -> tuple[float, float, float]:
    """Three-level specializations written out longhand, d = 3."""
    k0 = n - k1 - k2
    kk = k1 + k2
    per_level = (
        math.factorial(n)
        * math.factorial(k0)
        * math.factorial(k1)
        * math.factorial(k2)
        * min(k0, k1, k2)
        / (n**n * k0**k0 * k1**k1 * k2**k2)
    )
    single = (
        math.factorial(n)
        * math.factorial(k0)
        * math.factorial(k1)
        * math.factorial(k2)
        * n
        / n ** (2 * n)
    )
    heralded = (
        math.factorial(n)
        * math.factorial(kk)
        / math.factorial(k0)
        * k0**k0
        * kk**kk
        / n ** (n + 2 * kk)
        * n
        * (math.factorial(k1) / k1**k1)
        * (math.factorial(k2) / k2**k2)
    )
    return per_level, single, heralded


def verify_formulas() -> list[CheckResult]:
    results: list[CheckResult] = []

    worst = 0.0
    for n in range(2, 13):
        for k1 in range(1, n):
            ref = _qubit_closed_forms(n, k1)
            got = (
                p_per_level(n, (n - k1, k1)),
                p_single_multiport(n, (n - k1, k1)),
                p_ancilla_final(n, (n - k1, k1)),
            )
            worst = max(worst, max(abs(a - b) / b for a, b in zip(got, ref)))
        for k1 in range(1, n - 1):
            for k2 in range(1, n - k1):
                if n - k1 - k2 < 1:
                    continue
                ref = _qutrit_closed_forms(n, k1, k2)
                got = (
                    p_per_level(n, (n - k1 - k2, k1, k2)),
                    p_single_multiport(n, (n - k1 - k2, k1, k2)),
                    p_ancilla_final(n, (n - k1 - k2, k1, k2)),
                )
                worst = max(worst, max(abs(a - b) / b for a, b in zip(got, ref)))
    results.append(
        CheckResult(
            "formulas.specializations",
            worst <= 1e-12,
            f"two- and three-level closed forms match generics to {worst:.3e} (n <= 12)",
        )
    )

    worst_margin = float("inf")
    for n in range(2, 9):
        for num_anc in range(1, n):
            best = p_ancilla_optical(n, num_anc, p_opt(n, num_anc))
            for eps in (-0.01, 0.01):
                other = p_ancilla_optical(n, num_anc, p_opt(n, num_anc) + eps)
                worst_margin = min(worst_margin, best - other)
    results.append(
        CheckResult(
            "formulas.p_opt_maximal",
            worst_margin > 0.0,
            f"value at p_opt beats p_opt +/- 0.01 by at least {worst_margin:.3e}",
        )
    )

    ok = (
        abs(p_ancilla_final(3, (2, 1)) - 4 / 27) <= 1e-10
        and abs(p_per_level(3, (2, 1)) - 1 / 9) <= 1e-10
        and abs(p_ancilla_final(4, (3, 1)) - 27 / 256) <= 1e-10
        and abs(p_op(4) - 24 / 256) <= 1e-10
        and p_ancilla_final(2, (1, 1)) < p_per_level(2, (1, 1))
        and p_ancilla_final(3, (2, 1)) > p_per_level(3, (2, 1))
        and p_ancilla_final(3, (2, 1)) < p_op(3)
        and p_ancilla_final(4, (3, 1)) > p_op(4)
    )
    results.append(
        CheckResult(
            "formulas.crossover_integers",
            ok,
            "heralded overtakes per-level first at n=3 (4/27 vs 1/9) "
            "and the generic bound first at n=4 (27/256 vs 24/256)",
        )
    )

    # The boost ratio is strictly decreasing from n = K+3 on (and over the
    # whole [K+2, 30] window for K <= 2); at K=3 it rises once at the very
    # first step, 43.40 -> 48.02 at n = 5 -> 6, before falling forever.
    monotone = True
    for num_anc in (1, 2, 3):
        start = num_anc + 2 if num_anc <= 2 else num_anc + 3
        prev = float("inf")
        for n in range(start, 31):
            ratio = math.log(p_op(n)) - math.log(p_ancilla_final(n, (n - num_anc, num_anc)))
            if ratio >= prev:
                monotone = False
            prev = ratio
    results.append(
        CheckResult(
            "formulas.boost_monotone",
            monotone,
            "p_op/p_ancilla_final strictly decreasing for K in {1,2} over [K+2, 30] "
            "and for K=3 over [K+3, 30] (the K=3 ratio rises once at n=5->6)",
        )
    )

    details = []
    fits_ok = True
    for (panel, contour), ref in FIT_REFERENCE.items():
        fit = contour_fit(panel, contour)
        rel = abs(fit.a - ref) / ref
        fits_ok = fits_ok and rel <= FIT_MARGIN
        details.append(
            f"{panel}/{contour}: a={fit.a:.4f} (ref {ref}, off {100 * rel:.1f}%), "
            f"b={fit.b:.4f}, rms={fit.residual_rms:.3f}"
        )
    results.append(CheckResult("formulas.contour_fits", fits_ok, "; ".join(details)))

    # Physical probabilities only: the operator-level heralded value rides a
    # non-unitary idealization and legitimately exceeds 1 at large K (e.g.
    # p_ancilla_operator(12, 11, 0.5) = 6.28), so it is excluded here.
    in_range = True
    for n in range(1, 13):
        for k in _profiles(n, 3):
            values = [p_op(n), p_single_multiport(n, k), p_per_level(n, k)]
            if len(k) >= 2:
                num_anc = n - k[0]
                values.append(p_ancilla_final(n, k))
                values.append(p_ancilla_optical(n, num_anc, 0.5))
                values.append(p_ancilla_optical_max(n, num_anc))
            if any(not 0.0 < v <= 1.0 for v in values):
                in_range = False
    results.append(
        CheckResult(
            "formulas.values_in_unit_interval",
            in_range,
            "every physical probability lies in (0, 1] for n <= 12, d <= 3",
        )
    )

    hom = abs(transition_amplitude(dft(2), {(0, 0): 1, (1, 0): 1}, {(0, 0): 1, (1, 0): 1}))
    bunch_ok = hom <= 1e-12
    worst_bunch = 0.0
    for k in range(1, 5):
        simulated, closed = bunching_check(k)
        worst_bunch = max(worst_bunch, abs(simulated - closed))
    results.append(
        CheckResult(
            "formulas.bunching",
            bunch_ok and worst_bunch <= 1e-12,
            f"coincidence amplitude {hom:.1e}; fixed-port bunching matches "
            f"k!/k^k to {worst_bunch:.1e} for k <= 4",
        )
    )
    return results


def verify_all() -> list[CheckResult]:
    return [*verify_oracle(), *verify_schemes(), *verify_formulas()]


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "oracle": verify_oracle,
    "schemes": verify_schemes,
    "formulas": verify_formulas,
    "all": verify_all,
}
