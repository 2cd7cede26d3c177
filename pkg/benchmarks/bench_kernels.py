"""Compare the compiled and numpy kernels on random matrices mod 2^31-1.

    python benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 3]

Both backends must agree on every input; the run aborts otherwise.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from boundedread import _kernels_py as py
from boundedread.field import DEFAULT_PRIME
from boundedread.kernels import _c as compiled

P = DEFAULT_PRIME


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(sizes, repeat):
    rng = np.random.default_rng(12345)
    rows = []
    for n in sizes:
        A = rng.integers(0, P, size=(n, n), dtype=np.int64)
        B = rng.integers(0, P, size=(n, n), dtype=np.int64)
        # low-rank block so elimination does real cancellation work
        L = rng.integers(0, P, size=(2 * n, n // 2), dtype=np.int64)
        R = rng.integers(0, P, size=(n // 2, n), dtype=np.int64)
        D = py.matmul_mod(L, R, P)
        cases = [
            ("rank_mod", lambda m, X=A: m.rank_mod(X, P)),
            ("independent_rows", lambda m, X=D: m.independent_rows(X, P)),
            ("matmul_mod", lambda m, X=A, Y=B: m.matmul_mod(X, Y, P)),
        ]
        for name, call in cases:
            t_py = best_of(lambda: call(py), repeat)
            t_c = best_of(lambda: call(compiled), repeat) if compiled is not None else None
            if compiled is not None:
                assert call(py) == call(compiled) if name != "matmul_mod" else np.array_equal(call(py), call(compiled))
            rows.append((name, n, t_py, t_c))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the numpy timings are shown")
    print(f"{'kernel':<18}{'n':>6}{'numpy [ms]':>13}{'cython [ms]':>13}{'speedup':>9}")
    for name, n, t_py, t_c in bench(args.sizes, args.repeat):
        c = f"{1e3 * t_c:13.2f}{t_py / t_c:9.1f}" if t_c else f"{'-':>13}{'-':>9}"
        print(f"{name:<18}{n:>6}{1e3 * t_py:13.2f}{c}")


if __name__ == "__main__":
    main()
