"""Benchmark the compiled Ryser kernel against the pure-Python fallback.

Both backends compute the permanent with the same Gray-code subset walk, so
the timing difference is purely the interpreter overhead on the inner loop.

Usage:
    python3 benchmarks/bench_permanent.py [--sizes 4,8,12,16] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dickesim.permanent import PERMANENT_BACKEND, available_backends


def _time_one(fn, m: np.ndarray, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(m)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,12,16",
                    help="comma-separated matrix sizes")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats per size (best is reported)")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    backends = available_backends()
    rng = np.random.default_rng(args.seed)

    print(f"active backend: {PERMANENT_BACKEND}")
    print(f"available: {', '.join(sorted(backends))}")
    header = f"{'n':>4}  " + "".join(f"{name:>14}  " for name in sorted(backends))
    if len(backends) > 1:
        header += f"{'speedup':>9}"
    print(header)

    for n in sizes:
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        # cross-check before timing so a broken backend can't post a fast time
        values = {name: fn(m) for name, fn in backends.items()}
        ref = next(iter(values.values()))
        for name, val in values.items():
            if abs(val - ref) > 1e-6 * max(1.0, abs(ref)):
                raise AssertionError(f"backend {name} disagrees at n={n}")

        times = {name: _time_one(fn, m, args.repeats)
                 for name, fn in backends.items()}
        row = f"{n:>4}  " + "".join(
            f"{times[name] * 1e3:>12.3f}ms  " for name in sorted(times))
        if "compiled" in times and "python" in times:
            row += f"{times['python'] / times['compiled']:>8.1f}x"
        print(row)

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
