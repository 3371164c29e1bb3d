"""Pure-numpy fallback for the compiled scan kernels.

Mirrors the _speedups signatures exactly so the driver can swap backends.
Phases are still reduced in exact int64 arithmetic before the
transcendental call; the only difference from the compiled path is
vectorized evaluation in k-chunks.
"""

from __future__ import annotations

import numpy as np

_CHUNK_CELLS = 1 << 22


def _chunk_rows(n: int) -> int:
    return max(1, _CHUNK_CELLS // max(1, n))


def scan_max(expo, step, weight, modulus, k0, k1):
    expo = np.asarray(expo)
    step = np.asarray(step)
    weight = np.asarray(weight)
    best, bestk = -1.0, k0
    rows = _chunk_rows(len(step))
    for lo in range(k0, k1, rows):
        hi = min(lo + rows, k1)
        offs = np.arange(lo - k0, hi - k0, dtype=np.int64)
        ph = (expo[None, :] + offs[:, None] * step[None, :]) % modulus
        z = np.exp((2j * np.pi / modulus) * ph) @ weight
        mags = z.real**2 + z.imag**2
        i = int(np.argmax(mags))
        if mags[i] > best:
            best = float(mags[i])
            bestk = lo + i
    return float(np.sqrt(best)), bestk


def profile_fill(expo, step, weight, modulus, k0, k1, out_re, out_im):
    expo = np.asarray(expo)
    step = np.asarray(step)
    weight = np.asarray(weight)
    rows = _chunk_rows(len(step))
    for lo in range(k0, k1, rows):
        hi = min(lo + rows, k1)
        offs = np.arange(lo - k0, hi - k0, dtype=np.int64)
        ph = (expo[None, :] + offs[:, None] * step[None, :]) % modulus
        z = np.exp((2j * np.pi / modulus) * ph) @ weight
        out_re[lo - k0 : hi - k0] = z.real
        out_im[lo - k0 : hi - k0] = z.imag


def points_scan_max(expo, step, mods, scale, weight, k0, k1):
    expo = np.asarray(expo)
    step = np.asarray(step)
    mods = np.asarray(mods)
    scale = np.asarray(scale)
    weight = np.asarray(weight)
    best, bestk = -1.0, k0
    rows = _chunk_rows(len(step))
    for lo in range(k0, k1, rows):
        hi = min(lo + rows, k1)
        offs = np.arange(lo - k0, hi - k0, dtype=np.int64)
        ph = (expo[None, :] + offs[:, None] * step[None, :]) % mods[None, :]
        z = np.exp(1j * scale[None, :] * ph) @ weight
        mags = z.real**2 + z.imag**2
        i = int(np.argmax(mags))
        if mags[i] > best:
            best = float(mags[i])
            bestk = lo + i
    return float(np.sqrt(best)), bestk
