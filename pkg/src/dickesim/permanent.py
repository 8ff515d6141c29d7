"""Matrix permanent via Ryser inclusion-exclusion.

Two interchangeable backends compute the same Gray-code recurrence: a
compiled Cython kernel (built as ``dickesim._ryser``) and a pure-Python
fallback on numpy row sums. The compiled kernel is preferred when the
extension was built; ``PERMANENT_BACKEND`` records which one is active.
``benchmarks/bench_permanent.py`` compares the two.
"""

from __future__ import annotations

import numpy as np

try:
    from dickesim._ryser import ryser_permanent as _compiled_kernel
except ImportError:  # pure source checkout, or the extension failed to build
    _compiled_kernel = None

PERMANENT_BACKEND = "compiled" if _compiled_kernel is not None else "python"


def _checked(a: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {m.shape}")
    return m


def ryser_permanent_python(a: np.ndarray) -> complex:
    """Pure-Python reference implementation of the Gray-code Ryser sum."""
    m = _checked(a)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n > 30:
        raise ValueError("matrix too large for subset enumeration")
    rowsum = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    parity = 1
    prev = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        col = diff.bit_length() - 1
        if gray & diff:
            rowsum += m[:, col]
        else:
            rowsum -= m[:, col]
        parity = -parity
        total += parity * rowsum.prod()
        prev = gray
    return complex(total) if n % 2 == 0 else -complex(total)


def permanent(a: np.ndarray) -> complex:
    """Permanent of a square complex matrix, using the fastest available backend."""
    m = _checked(a)
    if _compiled_kernel is not None:
        return complex(_compiled_kernel(m))
    return ryser_permanent_python(m)


def available_backends() -> dict[str, object]:
    """Callable backends keyed by name, for benchmarks and cross-checks."""
    out: dict[str, object] = {"python": ryser_permanent_python}
    if _compiled_kernel is not None:
        out["compiled"] = lambda m: complex(_compiled_kernel(_checked(m)))
    return out
