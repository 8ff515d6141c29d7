import itertools

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


def haar_block(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase ambiguity fixed."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def positive_profiles(n: int, max_parts: int = 3) -> list[tuple[int, ...]]:
    """Ordered compositions of n into 1..max_parts positive parts."""
    out = []
    for parts in range(1, min(max_parts, n) + 1):
        for cuts in itertools.combinations(range(1, n), parts - 1):
            bounds = (0, *cuts, n)
            out.append(tuple(bounds[i + 1] - bounds[i] for i in range(parts)))
    return out


# The acceptance module registers one line per criterion here; the terminal
# summary prints them all, pass and fail alike, at the end of the run.
_criterion_lines: list[tuple[int, bool, str]] = []


def record_criterion(num: int, passed: bool, detail: str) -> None:
    _criterion_lines.append((num, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for num, passed, detail in sorted(_criterion_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status} - {detail}")
