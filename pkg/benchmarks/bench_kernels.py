"""Time the numba loop kernel against the vectorized numpy kernel.

    python3 benchmarks/bench_kernels.py [--trials N]
    UAVNOMA_DISABLE_JIT=1 python3 benchmarks/bench_kernels.py   # pure-numpy fallback
"""
import argparse
import time

import numpy as np

from uavnoma import SystemConfig, USE_NUMBA
from uavnoma._kernels import evaluate_cluster_loop, evaluate_cluster_numpy
from uavnoma.channel import cluster_channels
from uavnoma.montecarlo import _kernel_args, draw_cluster_gains, simulate


def best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1_000_000)
    args = ap.parse_args()
    cfg = SystemConfig().with_L(1)
    T = args.trials

    g = draw_cluster_gains(cluster_channels(cfg, 0), np.random.default_rng(0), T)
    kargs = _kernel_args(cfg)
    print(f"numba enabled: {USE_NUMBA}; {T} realizations, M=2, L=1")

    t_np = best_of(lambda: evaluate_cluster_numpy(*g, *kargs))
    print(f"numpy kernel      {t_np:8.3f} s  {T / t_np:10.3g} /s")
    if USE_NUMBA:
        evaluate_cluster_loop(*(x[..., :10] for x in g), *kargs)  # compile
        t_nb = best_of(lambda: evaluate_cluster_loop(*g, *kargs))
        print(f"numba kernel      {t_nb:8.3f} s  {T / t_nb:10.3g} /s  ({t_np / t_nb:.1f}x)")
    else:
        print("numba kernel      skipped (pure-python loop under the fallback)")

    simulate(cfg, 1000, 0)
    t_sim = best_of(lambda: simulate(cfg, T, 0), repeat=1)
    print(f"simulate (total)  {t_sim:8.3f} s  {T / t_sim:10.3g} /s")
    t_five = best_of(lambda: simulate(SystemConfig(), T, 0), repeat=1)
    print(f"simulate L=5      {t_five:8.3f} s  {T / t_five:10.3g} trials/s")


if __name__ == "__main__":
    main()
