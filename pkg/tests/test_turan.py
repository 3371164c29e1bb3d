import math

import numpy as np
import pytest

from phasecert.errors import ParameterConditionViolated, TooLarge
from phasecert.turan import (
    TuranPointSet,
    construct_turan,
    er_reference_bound,
    power_sum_max,
    turan_frame,
)


def _brute_power_max(z: TuranPointSet, N: int):
    pts = z.complex_points()
    mults = np.array([m for _, _, m in z.points], dtype=float)
    best, bestk = -1.0, None
    for k in range(1, N + 1):
        v = abs((pts**k) @ mults)
        if v > best:
            best, bestk = v, k
    return best, bestk


def test_point_set_normalization():
    z = TuranPointSet.from_triples([(5, 3), (2, 3, 2), (-1, 3)])
    assert z.points == ((2, 3, 4),)  # 5 mod 3 = 2, -1 mod 3 = 2; mults add
    assert z.n == 4
    assert TuranPointSet.from_json(z.to_json()) == z


def test_power_sum_trivial_cases():
    ones = TuranPointSet.from_triples([(0, 1, 5)])
    assert power_sum_max(ones, 7) == {"M": pytest.approx(5.0), "argmax_k": 1}

    n = 16
    roots = TuranPointSet.from_triples([(s, n) for s in range(n)])
    out = power_sum_max(roots, n)
    assert out["M"] == pytest.approx(n) and out["argmax_k"] == n

    third = TuranPointSet.from_triples([(1, 3)])
    for N in (1, 5, 100):
        assert power_sum_max(third, N)["M"] == pytest.approx(1.0)


def test_power_sum_modes_agree():
    rng = np.random.default_rng(21)
    for _ in range(10):
        triples = [(int(rng.integers(0, 64)), int(rng.integers(2, 64)),
                    int(rng.integers(1, 3))) for _ in range(rng.integers(1, 20))]
        z = TuranPointSet.from_triples(triples)
        N = int(rng.integers(2, 300))
        d = power_sum_max(z, N, mode="direct")
        g = power_sum_max(z, N, mode="grouped")
        b_mag, b_k = _brute_power_max(z, N)
        assert d["M"] == pytest.approx(g["M"], abs=1e-9)
        assert d["M"] == pytest.approx(b_mag, abs=1e-9)
        assert d["argmax_k"] == g["argmax_k"]


def test_power_sum_caps():
    z = TuranPointSet.from_triples([(s, 10007) for s in range(1, 2001)])
    with pytest.raises(TooLarge):
        power_sum_max(z, 10**7 + 1, mode="direct")


def test_turan_frame_bridge_and_dft():
    rng = np.random.default_rng(4)
    z = TuranPointSet.from_triples(
        [(int(rng.integers(0, 97)), 97) for _ in range(8)])
    out = turan_frame(z, 32)
    assert out["agree"]
    norms = np.linalg.norm(out["matrix"], axis=0)
    assert np.allclose(norms, 1.0, atol=1e-12)

    n = 8
    dft = TuranPointSet.from_triples([(s, n) for s in range(n)])
    out = turan_frame(dft, n)
    assert out["coherence"] < 1e-12  # orthogonal DFT columns

    with pytest.raises(TooLarge):
        turan_frame(z, 10**7)


def test_er_reference_values():
    assert er_reference_bound(1, 1) == pytest.approx(math.sqrt(6 * math.log(2)))
    assert er_reference_bound(100, 10**6) == pytest.approx(91.04, abs=0.01)
    assert er_reference_bound(2, 10) > er_reference_bound(1, 10)
    assert er_reference_bound(2, 100) > er_reference_bound(2, 10)
    with pytest.raises(ValueError):
        er_reference_bound(0, 10)


def test_construct_turan_counting_and_soundness():
    z, cert = construct_turan(2000, P0=10, P1=250, R0=2)
    # stage size: primes in (5,10] = {7}, |S_7| = 6, R0 = 2
    assert cert.S == 12
    assert cert.V1 == 23 and cert.n == cert.V1 * cert.S == z.n
    assert cert.measured <= cert.bound + 1e-9
    assert cert.divisor_term == pytest.approx(
        math.log(2000) / (cert.V1 * math.log(125.0)))
    assert cert.er_reference == pytest.approx(er_reference_bound(cert.n, 2000))


def test_construct_turan_strict_violations():
    with pytest.raises(ParameterConditionViolated, match="2 P0\\^2"):
        construct_turan(2000, P0=50, P1=200, R0=2, strict=True)
    with pytest.raises(ParameterConditionViolated, match="KN2"):
        construct_turan(10007, mu=0.5, strict=True)
    # non-strict records instead of raising
    z, cert = construct_turan(500, P0=10, P1=100, R0=1)
    assert any("2 P0^2" in v for v in cert.flags["violations"])
