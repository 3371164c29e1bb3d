"""Compare the compiled scan kernels against the pure-numpy fallback.

Usage: python bench/bench_kernels.py [--size 2000] [--kmax 200000] [--threads N]

Both backends produce identical (magnitude, argmax) pairs; the benchmark
asserts that before reporting throughput.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np


def run(size: int, kmax: int, threads: int | None) -> None:
    from phasecert import kernels

    rng = np.random.default_rng(7)
    modulus = 1000003
    values = np.sort(rng.choice(modulus, size=size, replace=False)).astype(np.int64)
    weights = np.ones(size)

    results = {}
    for name, force in (("compiled", False), ("fallback", True)):
        if force:
            os.environ["PHASECERT_FORCE_FALLBACK"] = "1"
        else:
            os.environ.pop("PHASECERT_FORCE_FALLBACK", None)
        if name == "compiled" and not kernels.HAVE_COMPILED:
            print("compiled backend unavailable; skipping")
            continue
        t0 = time.perf_counter()
        out = kernels.fourier_max(values, weights, modulus, 1, kmax, threads=threads)
        dt = time.perf_counter() - t0
        cells = size * kmax
        print(f"{name:9s} {dt:8.3f}s  {cells / dt / 1e6:9.1f} Mcells/s  "
              f"max={out[0]:.12g} argmax={out[1]}")
        results[name] = out
    os.environ.pop("PHASECERT_FORCE_FALLBACK", None)
    if len(results) == 2:
        c, f = results["compiled"], results["fallback"]
        assert abs(c[0] - f[0]) < 1e-9 and c[1] == f[1], "backends disagree"
        print("backends agree")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=2000)
    ap.add_argument("--kmax", type=int, default=200000)
    ap.add_argument("--threads", type=int, default=None)
    a = ap.parse_args()
    run(a.size, a.kmax, a.threads)
