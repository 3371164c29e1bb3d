"""Backend agreement and determinism for the scan kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from phasecert import _kernels_py, kernels


def _random_case(seed, modulus=100003, size=50):
    rng = np.random.default_rng(seed)
    values = rng.integers(0, modulus, size=size).astype(np.int64)
    weights = rng.uniform(0.5, 2.0, size=size)
    return values, weights, modulus


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="no compiled extension")
def test_compiled_matches_fallback_fourier():
    for seed in range(5):
        values, weights, modulus = _random_case(seed)
        expo = (1 * values) % modulus
        c = kernels._speedups.scan_max(expo.copy(), values, weights, modulus, 1, 4000)
        f = _kernels_py.scan_max(expo.copy(), values, weights, modulus, 1, 4000)
        assert c[0] == pytest.approx(f[0], abs=1e-9)
        assert c[1] == f[1]


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="no compiled extension")
def test_compiled_matches_fallback_profile():
    values, weights, modulus = _random_case(7, size=20)
    out = {}
    for impl, name in ((kernels._speedups, "c"), (_kernels_py, "py")):
        re = np.empty(500)
        im = np.empty(500)
        impl.profile_fill((3 * values) % modulus, values, weights, modulus, 3, 503, re, im)
        out[name] = re + 1j * im
    assert np.allclose(out["c"], out["py"], atol=1e-9)


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="no compiled extension")
def test_compiled_matches_fallback_points():
    rng = np.random.default_rng(12)
    mods = rng.integers(2, 500, size=40).astype(np.int64)
    svals = (rng.integers(0, 10**6, size=40) % mods).astype(np.int64)
    weights = np.ones(40)
    scale = 2.0 * np.pi / mods
    c = kernels._speedups.points_scan_max(svals.copy(), svals, mods, scale, weights, 1, 2000)
    f = _kernels_py.points_scan_max(svals.copy(), svals, mods, scale, weights, 1, 2000)
    assert c[0] == pytest.approx(f[0], abs=1e-9)
    assert c[1] == f[1]


def test_thread_count_invariance():
    values, weights, modulus = _random_case(3, size=30)
    results = [kernels.fourier_max(values, weights, modulus, 1, 3 * kernels.BLOCK + 17,
                                   threads=t) for t in (1, 4, 8)]
    assert results[0] == results[1] == results[2]


def test_profile_matches_direct_numpy():
    values, weights, modulus = _random_case(5, modulus=997, size=10)
    prof = kernels.profile(values, weights, modulus, 1, 996)
    ks = np.arange(1, 997)
    direct = np.exp(2j * np.pi * (ks[:, None] * values[None, :] % modulus) / modulus) @ weights
    assert np.allclose(prof, direct, atol=1e-10)


def test_init_expo_overflow_path():
    # k0 * step would overflow int64; must fall back to exact Python ints
    modulus = 2**62 - 57
    step = np.array([modulus - 3, 12345678910111213], dtype=np.int64)
    k0 = 2**40
    got = kernels._init_expo(step, k0, modulus)
    expected = [(k0 * int(v)) % modulus for v in step]
    assert got.tolist() == expected


def test_force_fallback_env(tmp_path):
    code = (
        "import os; os.environ['PHASECERT_FORCE_FALLBACK']='1';"
        "from phasecert import kernels; print(kernels.backend_name())"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.stdout.strip() == "fallback"


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="no compiled extension")
def test_fallback_and_compiled_agree_through_driver():
    values, weights, modulus = _random_case(8, size=25)
    native = kernels.fourier_max(values, weights, modulus, 1, 5000)
    os.environ["PHASECERT_FORCE_FALLBACK"] = "1"
    try:
        fb = kernels.fourier_max(values, weights, modulus, 1, 5000)
    finally:
        del os.environ["PHASECERT_FORCE_FALLBACK"]
    assert native[1] == fb[1]
    assert native[0] == pytest.approx(fb[0], abs=1e-9)
