"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py [--users K] [--subcarriers N] [--reps R]
"""

import argparse
import time

import numpy as np

from beamsplit_ofdma import kernels


def bench(fn, args, reps):
    fn(*args)  # warm-up (includes JIT compile for the numba flavour)
    t0 = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - t0) / reps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--users", type=int, default=5000)
    ap.add_argument("--subcarriers", type=int, default=128)
    ap.add_argument("--elements", type=int, default=512)
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    phi = rng.uniform(-1, 1, args.users)
    amp2 = rng.exponential(size=args.users)
    ff = 1.0 + np.linspace(-0.0085, 0.0085, args.subcarriers)
    m = float(args.elements)
    thr = 0.9 * m * m

    cases = [
        ("gain_matrix", kernels.gain_matrix_np, kernels.gain_matrix_nb,
         (m, 0.3, phi, amp2, ff)),
        ("best_gain_per_sc", kernels.best_gain_per_sc_np, kernels.best_gain_per_sc_nb,
         (m, 0.3, phi, amp2, ff)),
        ("covers_all_subcarriers", kernels.covers_all_subcarriers_np,
         kernels.covers_all_subcarriers_nb, (m, 0.3, phi, ff, thr)),
    ]

    print(f"K={args.users} N={args.subcarriers} M={args.elements} reps={args.reps}")
    print(f"{'kernel':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
    for name, f_np, f_nb, a in cases:
        t_np = bench(f_np, a, args.reps) * 1e3
        if f_nb is None:
            print(f"{name:<24}{t_np:>12.3f}{'n/a':>12}{'-':>9}")
            continue
        t_nb = bench(f_nb, a, args.reps) * 1e3
        print(f"{name:<24}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>9.1f}")


if __name__ == "__main__":
    main()
