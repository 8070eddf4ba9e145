"""Time the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sizes 64,256,1024] [--repeat 5]

Prints one row per (kernel, n): best-of-``repeat`` seconds for each backend
and the numpy/numba ratio. The numba kernels are called once before timing so
compilation is excluded.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from hybridmoea.kernels import LOOP, NUMPY


def cases(n: int, rng: np.random.Generator):
    F2 = rng.random((n, 2))
    F3 = rng.random((n, 3))
    front = np.column_stack([np.linspace(0, 1, n), 1 - np.sqrt(np.linspace(0, 1, n))])
    ref = np.array([1.1, 1.1])
    return [
        ("nondominated_mask", "nondominated_mask", (F3,)),
        ("nondominated_ranks", "nondominated_ranks", (F2,)),
        ("crowding_distance", "crowding_distance", (F2,)),
        ("nearest_distances", "nearest_distances", (F2, front)),
        ("nearest_manhattan", "nearest_manhattan", (F2,)),
        ("spea2_fitness", "spea2_fitness", (F2, max(1, int(np.sqrt(2 * n))))),
        ("spea2_truncate", "spea2_truncate", (F2, n // 2)),
        ("hv2d", "hv2d", (F2[_front_rows(F2)], ref)),
    ]


def _front_rows(F: np.ndarray) -> np.ndarray:
    return NUMPY.nondominated_mask(F)


def best_time(fn, args, repeat: int) -> float:
    calls = 1
    while timeit.timeit(lambda: fn(*args), number=calls) < 0.05 and calls < 10**5:
        calls *= 4
    return min(timeit.repeat(lambda: fn(*args), number=calls, repeat=repeat)) / calls


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,256,1024", help="comma-separated population sizes")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<20} {'n':>6} {'numba s':>12} {'numpy s':>12} {'numpy/numba':>12}")
    for n in (int(s) for s in args.sizes.split(",")):
        for label, name, fargs in cases(n, rng):
            loop, vec = getattr(LOOP, name), getattr(NUMPY, name)
            loop(*fargs)
            t_loop, t_vec = best_time(loop, fargs, args.repeat), best_time(vec, fargs, args.repeat)
            print(f"{label:<20} {n:>6} {t_loop:>12.3e} {t_vec:>12.3e} {t_vec / t_loop:>12.1f}")


if __name__ == "__main__":
    main()
