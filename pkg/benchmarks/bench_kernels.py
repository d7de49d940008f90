"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 5]

Each kernel runs once per path before timing, so JIT compilation is excluded.
Both paths are checked for agreement before anything is timed.
"""

import argparse
import time

import numpy as np

from ctxlex import kernels
from ctxlex.instances import random_constraint_set
from ctxlex.solver import HyperParams, UpdateTerms


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def mu_update_case(n, rng):
    C = random_constraint_set(rng, n, 2 * n)
    t = UpdateTerms.build(C, HyperParams())
    X = rng.uniform(0.0, 2.0, (n, 2))

    def run(use_numba):
        return lambda: kernels.mu_update(X, t.P, t.Q, t.B, t.b_num, t.b_den, t.guard, use_numba)
    return run


def pair_contributions_case(n, rng):
    # n occurrences spread over reviews of 2..12 occurrences each
    sizes = []
    while sum(sizes) < n:
        sizes.append(int(rng.integers(2, 13)))
    ptr = np.concatenate([[0], np.cumsum(sizes)])
    total = int(ptr[-1])
    pair = rng.integers(0, max(total // 4, 2), total)
    wstart = np.concatenate([np.sort(rng.integers(0, 40 * s, s)) for s in sizes])
    wend = wstart + rng.integers(1, 3, total)
    length = np.array([40.0 * s + 2 for s in sizes])

    def run(use_numba):
        return lambda: kernels.pair_contributions(ptr, pair, wstart, wend, length, use_numba)
    return run


def _agree(a, b):
    if isinstance(a, tuple):
        return all(np.allclose(x, y, rtol=1e-12, atol=0) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not importable; only the numpy path exists")
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'kernel':<20}{'n':>9}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, case in (("mu_update", mu_update_case), ("pair_contributions", pair_contributions_case)):
        for n in sizes:
            run = case(n, np.random.default_rng(args.seed))
            fast, slow = run(True), run(False)
            if not _agree(fast(), slow()):
                raise SystemExit(f"{name} n={n}: numba and numpy paths disagree")
            t_np, t_nb = best_of(slow, args.repeat), best_of(fast, args.repeat)
            print(f"{name:<20}{n:>9}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
