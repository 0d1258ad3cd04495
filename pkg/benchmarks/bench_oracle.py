"""Time the oracle integrator with the compiled and the numpy back ends.

    python benchmarks/bench_oracle.py --trajectories 100 --steps 100000
"""
import argparse
import time

import numpy as np

from berger_ads import _kernels_py

try:
    from berger_ads import _kernels
except ImportError:
    _kernels = None


def batch(n, seed=0):
    rng = np.random.default_rng(seed)
    H0 = rng.normal(size=(n, 3))
    H0[:, 0] = -np.abs(H0[:, 0]) - 1.5
    return H0, rng.uniform(5.0, 20.0, size=n)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trajectories", type=int, default=100)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--nsave", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--eta", type=float, default=0.3)
    args = ap.parse_args(argv)

    I1, I2 = 1.0, 1.0 + args.eta
    H0, T = batch(args.trajectories)
    run = lambda mod: mod.rkmk4(I1, I2, I2, H0, T, args.steps, args.nsave)

    t_py, (_, g_py) = best_of(lambda: run(_kernels_py), args.repeat)
    print(f"numpy   {t_py:8.3f} s  ({args.trajectories} x {args.steps} steps)")
    if _kernels is None:
        print("cython  not built")
        return
    t_cy, (_, g_cy) = best_of(lambda: run(_kernels), args.repeat)
    print(f"cython  {t_cy:8.3f} s  speedup {t_py / t_cy:5.1f}x")
    scale = max(1.0, np.abs(g_py).max())
    print(f"max |difference| {np.abs(g_py - g_cy).max():.2e} (relative {np.abs(g_py - g_cy).max() / scale:.1e})")


if __name__ == "__main__":
    main()
