"""Compare the numba kernels with their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel: best-of-N wall time for each path and the speedup.
The jit path is compiled (and checked against numpy) before timing starts.
"""

import argparse
import time

import numpy as np

from iiq import _kernels
from iiq._accel import HAS_NUMBA


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def codes(rng, n):
    # small alphabet so the DP does real work instead of matching nothing
    return rng.integers(97, 103, size=n).astype(np.uint32)


def cases(rng):
    a, b = codes(rng, 400), codes(rng, 400)
    query = codes(rng, 300)
    hist = [codes(rng, int(rng.integers(100, 500))) for _ in range(50)]
    buf = np.concatenate(hist)
    offsets = np.concatenate([[0], np.cumsum([len(h) for h in hist])]).astype(np.int64)
    small = rng.lognormal(5, 1.5, size=200)
    large = rng.lognormal(5, 1.5, size=100_000)
    return [
        ("levenshtein 400x400", _kernels.levenshtein_jit, _kernels.levenshtein_numpy, (a, b)),
        ("max_edit_similarity 300 vs 50 texts", _kernels.max_edit_similarity_jit,
         _kernels.max_edit_similarity_numpy, (query, buf, offsets)),
        ("gini n=200", _kernels.gini_jit, _kernels.gini_numpy, (small,)),
        # large inputs are routed to numpy in production; shown for the record
        ("gini n=100000", _kernels.gini_jit, _kernels.gini_numpy, (large,)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; only the numpy path can run")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<38}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, jit_fn, np_fn, inputs in cases(rng):
        expect = np_fn(*inputs)
        t_np = best_of(lambda: np_fn(*inputs), args.repeat)
        if HAS_NUMBA:
            got = jit_fn(*inputs)
            assert abs(float(got) - float(expect)) <= 1e-9 * max(1.0, abs(float(expect))), name
            t_jit = best_of(lambda: jit_fn(*inputs), args.repeat)
            print(f"{name:<38}{t_jit * 1e6:>10.1f}us{t_np * 1e6:>10.1f}us"
                  f"{t_np / t_jit:>9.1f}x")
        else:
            print(f"{name:<38}{'-':>12}{t_np * 1e6:>10.1f}us{'-':>10}")


if __name__ == "__main__":
    main()
