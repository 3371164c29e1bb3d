"""Backend selection and deterministic parallel drivers for the scans.

The compiled extension is used when available; set PHASECERT_FORCE_FALLBACK=1
to force the pure-numpy path.  Work is split into fixed-size k-blocks that
do not depend on the thread count, and block results are merged in block
order, so outputs are identical for any --threads value.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

try:
    from . import _speedups
except ImportError:  # pragma: no cover - build-dependent
    _speedups = None

HAVE_COMPILED = _speedups is not None

BLOCK = 1 << 15
_INT64_MAX = 2**63 - 1


def backend():
    if _speedups is None or os.environ.get("PHASECERT_FORCE_FALLBACK"):
        return _kernels_py
    return _speedups


def backend_name() -> str:
    return "compiled" if backend() is _speedups else "fallback"


def default_threads() -> int:
    env = os.environ.get("PHASECERT_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _init_expo(step: np.ndarray, k0: int, modulus: int) -> np.ndarray:
    """(k0 * step_j) mod m without int64 overflow."""
    if k0 == 0:
        return np.zeros(len(step), dtype=np.int64)
    top = int(step.max(initial=0))
    if top == 0 or k0 <= _INT64_MAX // top:
        return (k0 * step) % modulus
    return np.array([(k0 * int(v)) % modulus for v in step], dtype=np.int64)


def _init_expo_per_point(step: np.ndarray, mods: np.ndarray, k0: int) -> np.ndarray:
    if k0 == 0:
        return np.zeros(len(step), dtype=np.int64)
    top = int(step.max(initial=0))
    if top == 0 or k0 <= _INT64_MAX // top:
        return (k0 * step) % mods
    return np.array(
        [(k0 * int(v)) % int(m) for v, m in zip(step, mods)], dtype=np.int64
    )


def _blocks(kmin: int, kmax: int):
    return [(a, min(a + BLOCK, kmax + 1)) for a in range(kmin, kmax + 1, BLOCK)]


def _run_blocks(task, blocks, threads):
    if threads is None:
        threads = default_threads()
    if threads <= 1 or len(blocks) <= 1:
        results = [task(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(task, blocks))
    best, bestk = -1.0, None
    for mag, k in results:  # merge in block order: thread-count independent
        if mag > best:
            best, bestk = mag, k
    return best, bestk


def fourier_max(values, weights, modulus, kmin, kmax, threads=None):
    """max_{kmin<=k<=kmax} |sum_j w_j e(k v_j / m)| and its first argmax."""
    values = np.ascontiguousarray(values, dtype=np.int64) % modulus
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    impl = backend()

    def task(block):
        k0, k1 = block
        expo = _init_expo(values, k0, modulus)
        return impl.scan_max(expo, values, weights, modulus, k0, k1)

    return _run_blocks(task, _blocks(kmin, kmax), threads)


def points_max(svals, qvals, weights, kmin, kmax, threads=None):
    """max_k |sum_j w_j e(k s_j / q_j)| over k in [kmin, kmax]."""
    svals = np.ascontiguousarray(svals, dtype=np.int64)
    qvals = np.ascontiguousarray(qvals, dtype=np.int64)
    svals = svals % qvals
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    scale = 2.0 * np.pi / qvals
    impl = backend()

    def task(block):
        k0, k1 = block
        expo = _init_expo_per_point(svals, qvals, k0)
        return impl.points_scan_max(expo, svals, qvals, scale, weights, k0, k1)

    return _run_blocks(task, _blocks(kmin, kmax), threads)


def profile(values, weights, modulus, kmin, kmax) -> np.ndarray:
    """Complex profile sum_j w_j e(k v_j / m) for every k in [kmin, kmax]."""
    values = np.ascontiguousarray(values, dtype=np.int64) % modulus
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    count = kmax - kmin + 1
    out_re = np.empty(count, dtype=np.float64)
    out_im = np.empty(count, dtype=np.float64)
    expo = _init_expo(values, kmin, modulus)
    backend().profile_fill(expo, values, weights, modulus, kmin, kmax + 1, out_re, out_im)
    return out_re + 1j * out_im
