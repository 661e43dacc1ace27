"""Time the numba kernels against the pure-numpy fallback.

Run with ``python benchmarks/bench_backends.py``; ``--repeat`` controls the
number of timed calls per kernel (the first, compiling call is reported
separately for numba).
"""
import argparse
import time

import numpy as np

from rasec import kernels
from rasec.avg_secrecy import avg_cs_quad, normal_blocks
from rasec.channel import link_coefficients
from rasec.geometry import alpha_max, default_scenario
from rasec.specfun import QuadratureSpec


def cases(n_mc):
    s = default_scenario()
    spec = QuadratureSpec()
    z = next(normal_blocks(n_mc, 0, block=n_mc))
    lb = link_coefficients(s, 1.6, "user")
    le = link_coefficients(s, 1.6, "eavesdropper")
    a = np.linspace(0.0, 6.0, 2000)
    b = np.linspace(0.1, 8.0, 2000)[::-1].copy()
    x = np.linspace(0.0, 60.0, 100_000)
    return {
        "i0e (1e5 points)": lambda: kernels.i0e(x),
        "marcum_q1 (2000 pairs)": lambda: kernels.marcum_q1_pair(a, b),
        "avg_cs_quad nested": lambda: avg_cs_quad(s, 1.6, spec),
        "avg_cs_quad single": lambda: avg_cs_quad(s, alpha_max(s), spec),
        f"capacity_moments ({n_mc:.0e} draws)": lambda: kernels.capacity_moments(z, lb, le, s.gamma),
        f"outage_counts ({n_mc:.0e} draws, 6 rates)":
            lambda: kernels.outage_counts(z, lb, le, s.gamma, np.arange(0.5, 3.5, 0.5)),
    }


def timed(fn, repeat):
    t0 = time.perf_counter()
    fn()
    first = time.perf_counter() - t0
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return first, min(runs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--mc", type=int, default=1 << 20)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    table = {}
    for name in backends:
        with kernels.use_backend(name):
            for label, fn in cases(args.mc).items():
                table.setdefault(label, {})[name] = timed(fn, args.repeat)
    width = max(len(k) for k in table)
    print(f"{'kernel':<{width}}  {'numpy':>10}  {'numba':>10}  {'first call':>10}  speedup")
    for label, row in table.items():
        npy = row["numpy"][1]
        if "numba" in row:
            first, nb = row["numba"]
            print(f"{label:<{width}}  {npy*1e3:9.2f}ms  {nb*1e3:9.2f}ms  {first:9.2f}s  {npy/nb:6.1f}x")
        else:
            print(f"{label:<{width}}  {npy*1e3:9.2f}ms  {'-':>10}")


if __name__ == "__main__":
    main()
