"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--rows 200000] [--repeat 5] [--json]

Each kernel is run once untimed (JIT compile) and then ``--repeat`` times;
the best wall time is reported together with a check that both backends
return identical results.
"""

import argparse
import json
import time

import numpy as np

from ordlab.kernels import numba_backend, numpy_backend


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if numba_backend is None:
        raise SystemExit("numba backend unavailable (ORDLAB_BACKEND=numpy or numba not installed)")

    rng = np.random.default_rng(0)
    cases = []
    for k in (3, 5, 7):
        x = rng.random((args.rows, 10))
        tup = tuple(range(0, 2 * k, 2))[:k] if 2 * k <= 10 else tuple(range(k))
        same = np.array_equal(numba_backend.pattern_counts(x, tup), numpy_backend.pattern_counts(x, tup))
        cases.append({
            "kernel": f"pattern_counts k={k}", "rows": args.rows, "identical": bool(same),
            "numba_s": best_of(lambda: numba_backend.pattern_counts(x, tup), args.repeat),
            "numpy_s": best_of(lambda: numpy_backend.pattern_counts(x, tup), args.repeat),
        })
    for m in (50, 200):
        draws = max(1, args.rows // (4 * m))
        a, b = rng.random((draws, m)), rng.random((draws, m))
        same = np.array_equal(numba_backend.below_counts(a, b), numpy_backend.below_counts(a, b))
        cases.append({
            "kernel": f"below_counts m={m}", "rows": draws, "identical": bool(same),
            "numba_s": best_of(lambda: numba_backend.below_counts(a, b), args.repeat),
            "numpy_s": best_of(lambda: numpy_backend.below_counts(a, b), args.repeat),
        })
    for c in cases:
        c["speedup"] = c["numpy_s"] / c["numba_s"] if c["numba_s"] > 0 else float("inf")

    if args.json:
        print(json.dumps(cases, indent=1))
        return
    print(f"{'kernel':<22}{'rows':>9}{'numba ms':>11}{'numpy ms':>11}{'speedup':>9}  same")
    for c in cases:
        print(f"{c['kernel']:<22}{c['rows']:>9}{c['numba_s'] * 1e3:>11.2f}{c['numpy_s'] * 1e3:>11.2f}"
              f"{c['speedup']:>9.1f}  {c['identical']}")


if __name__ == "__main__":
    main()
