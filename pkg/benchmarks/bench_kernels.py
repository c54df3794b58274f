"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--batch 20000] [--repeat 5]

Both paths are called through ``designated_wins`` with an explicit
``use_numba`` flag, so one process measures both.  The numba timings
exclude the first (compiling) call.
"""

import argparse
import time

import numpy as np

from bribery import _accel, kernels
from bribery.election import FALLBACK, SPAV, Election
from bribery.shift import ShiftCostProfile, ShiftInstance, brute_force_shift


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_batch(rng, batch, n, m):
    pos = np.argsort(rng.random((batch, n, m)), axis=2).astype(np.int64)
    ell = rng.integers(0, m + 1, size=(batch, n))
    return pos, ell


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.USE_NUMBA:
        print("numba disabled (BRIBERY_NO_NUMBA set or numba missing); numpy only")
    rng = np.random.default_rng(0)

    print(f"{'case':34s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for n, m, shared in [(5, 4, False), (9, 6, False), (15, 8, False), (9, 6, True), (25, 10, True)]:
        pos, ell = random_batch(rng, args.batch, n, m)
        if shared:
            pos = pos[:1]
        for name, rule in (("spav", SPAV), ("fallback", FALLBACK)):
            code, kp = kernels.rule_args(rule)

            def run(flag):
                return kernels.designated_wins(pos, ell, code, kp, 0, use_numba=flag)
            assert np.array_equal(run(True), run(False))
            t_np = best_of(lambda: run(False), args.repeat)
            t_nb = best_of(lambda: run(True), args.repeat) if _accel.USE_NUMBA else float("nan")
            label = f"{name} n={n} m={m}{' shared' if shared else ''}"
            print(f"{label:34s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")

    # end to end: exhaustive shift bribery, which calls the kernel in blocks
    # p last in every vote and a rival on top everywhere, so the search is wide
    prefs = [(0,) + tuple(int(c) for c in rng.permutation([1, 2, 3])) + (4,) for _ in range(7)]
    e = Election.from_lists(prefs, [2] * 7, 4)
    inst = ShiftInstance(e, ShiftCostProfile.unit(e.n, e.m), FALLBACK)
    brute_force_shift(inst)
    t = best_of(lambda: brute_force_shift(inst), 3)
    print(f"brute_force_shift n=7 m=5 (active path): {t * 1e3:.1f}ms")


if __name__ == "__main__":
    main()
