"""Compare the compiled lag-sum kernels with the NumPy fallback.

The Gram matrix and cubic trace always run through BLAS and are not compared.

Usage: python benchmarks/bench_core.py [--n 250] [--m 100] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from fwntest import _core_py

try:
    from fwntest import _core
except ImportError:
    _core = None


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=250)
    ap.add_argument("--m", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x = rng.standard_normal((args.n, args.m))
    w = np.full(args.m, 1.0 / args.m)
    g = _core_py.gram(x, w)
    jfull = args.n - 1
    jshort = int(4 * args.n ** (1 / 3))

    cases = {
        f"lag_sums (J={jshort})": lambda mod: mod.lag_sums(g, jshort),
        f"lag_sums (J={jfull})": lambda mod: mod.lag_sums(g, jfull),
        f"trace_sums (J={jfull})": lambda mod: mod.trace_sums(g, jfull),
    }
    print(f"n={args.n} m={args.m}, best of {args.repeat} (milliseconds)")
    print(f"{'kernel':<24}{'python':>10}{'cython':>10}{'speedup':>9}")
    for name, call in cases.items():
        t_py = bench(lambda: call(_core_py), args.repeat) * 1e3
        if _core is None:
            print(f"{name:<24}{t_py:>10.3f}{'n/a':>10}{'':>9}")
            continue
        t_c = bench(lambda: call(_core), args.repeat) * 1e3
        print(f"{name:<24}{t_py:>10.3f}{t_c:>10.3f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
