"""Compare the numba and numpy kernels on detection-sized inputs.

    python3 benchmarks/bench_kernels.py [--trials 250] [--M 1000] [--repeat 5]

Both flavours are imported side by side, so the env flag is not needed here.
"""

import argparse
import time

import numpy as np

from qnoiseradar import kernels
from qnoiseradar._accel import HAVE_NUMBA


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=250)
    ap.add_argument("--M", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    z = rng.standard_normal((args.trials, args.M, 4))
    T = np.eye(4) + 0.01 * rng.standard_normal((4, 4))
    A, B = kernels.trial_stats_numpy(z, T)
    n = 2.0 * args.M
    xs = np.linspace(0.01, 40.0, 2000)
    lam = 12.5

    cases = [
        ("trial_stats", lambda: kernels.trial_stats_numba(z, T), lambda: kernels.trial_stats_numpy(z, T)),
        ("glr", lambda: kernels.glr_numba(A, B, n), lambda: kernels.glr_numpy(A, B, n)),
        ("ncx2_sf x2000", lambda: [kernels.ncx2_sf_numba(x, lam) for x in xs],
         lambda: [kernels.ncx2_sf_numpy(x, lam) for x in xs]),
    ]
    print(f"numba available: {HAVE_NUMBA}; trials={args.trials} M={args.M}")
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, fast, slow in cases:
        tf = best_of(fast, args.repeat)
        ts = best_of(slow, args.repeat)
        print(f"{name:<16}{tf * 1e3:>12.3f}{ts * 1e3:>12.3f}{ts / tf:>10.1f}")


if __name__ == "__main__":
    main()
