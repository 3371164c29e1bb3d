import math

import numpy as np
import pytest

from phasecert.additive import ResidueSet
from phasecert.errors import (
    CubeOverflow,
    DuplicateElements,
    ParamsTooLarge,
    TooLarge,
    TooManyColumns,
    ZeroTheta,
)
from phasecert.ripmat import (
    ConstructionParams,
    build_frame,
    build_set_A,
    build_set_B,
    closed_form_inner,
    coherence,
    column_vector,
    exact_rip_constant,
    exp_sum_energy_check,
    flat_rip_constant,
    rip_bounds,
    rip_report,
    verify_dissociativity,
)

P14 = 99999999999973  # largest prime <= 1e14 (frozen oracle)


def test_params_override_and_proof_checks():
    params = ConstructionParams.override(L=3, U=3**7, M_digits=2, r_digits=3)
    checks = params.proof_checks(P14)
    # recorded, not enforced: this override violates the U lower inequality
    assert checks == {"U_lower_ok": False, "U_power_ok": True, "cube_fits": True}


def test_params_derived_needs_large_p():
    with pytest.raises(ParamsTooLarge):
        ConstructionParams.derived(10**14, m=2)  # needs p > 4^32
    with pytest.raises(ValueError):
        ConstructionParams.derived(10**14, m=3)  # m must be even


def test_build_set_A_values_and_collision():
    params = ConstructionParams.override(L=3, U=3**7, M_digits=2, r_digits=3)
    assert build_set_A(P14, params) == [2188, 4378, 6570]  # x^2 + 2187 x, x=1,2,3
    # x^2 + x mod 5 collides at x=1,3 (2 and 12=2)
    bad = ConstructionParams.override(L=3, U=1, M_digits=2, r_digits=1)
    with pytest.raises(DuplicateElements):
        build_set_A(5, bad)


def test_build_set_B_enumeration():
    params = ConstructionParams.override(L=3, U=3**7, M_digits=2, r_digits=3)
    B = build_set_B(101, params)
    assert B == [0, 1, 4, 5, 16, 17, 20, 21]
    assert max(B) == 21 < 101 / 2
    with pytest.raises(CubeOverflow):
        build_set_B(63, params)  # (2M)^r = 64 > 63


def test_dissociativity_desk_case():
    params = ConstructionParams.override(L=3, U=3**7, M_digits=2, r_digits=3)
    A = build_set_A(P14, params)
    res = verify_dissociativity(A, P14, m=2)
    assert res.passed
    assert res.tuples_checked == 48  # 3 base points x 2^4 ordered tuples


def test_dissociativity_detects_failure():
    # frozen counterexample: over F_13 the set {1,2,3,4,5} has two distinct
    # reciprocal pairs with equal sums
    res = verify_dissociativity([1, 2, 3, 4, 5], 13, m=2)
    assert not res.passed
    a, x1, x2, y1, y2 = res.counterexample
    p = 13
    lhs = (pow(a - x1, -1, p) + pow(a - x2, -1, p)) % p
    rhs = (pow(a - y1, -1, p) + pow(a - y2, -1, p)) % p
    assert lhs == rhs and sorted((x1, x2)) != sorted((y1, y2))


def test_closed_form_vs_direct_inner():
    rng = np.random.default_rng(1)
    for p in (13, 101):
        for _ in range(50):
            a1, a2 = rng.integers(0, p, size=2)
            b1, b2 = rng.integers(0, p, size=2)
            if a1 == a2:
                continue
            direct = complex(np.vdot(column_vector(p, a2, b2), column_vector(p, a1, b1)))
            closed = closed_form_inner(p, int(a1), int(b1), int(a2), int(b2))
            assert abs(direct - closed) < 1e-9


def test_same_a_columns_orthonormal():
    p = 13
    for b1 in range(p):
        u = column_vector(p, 4, b1)
        assert abs(np.vdot(u, u) - 1) < 1e-12
        for b2 in range(b1 + 1, p):
            assert abs(np.vdot(u, column_vector(p, 4, b2))) < 1e-12
    assert closed_form_inner(13, 4, 2, 4, 2) == 1
    assert closed_form_inner(13, 4, 2, 4, 3) == 0


def test_full_frame_coherence_closed_form():
    for p in (5, 13):
        frame = build_frame(p, range(p), range(p))
        assert abs(coherence(frame) - 1 / math.sqrt(p)) < 1e-12


def test_build_frame_validation():
    with pytest.raises(ValueError):
        build_frame(2, [0, 1], [0, 1])
    with pytest.raises(TooManyColumns):
        build_frame(5, [1, 2], [1, 2], N=5)
    fr = build_frame(5, [1, 2], [0, 1], N=3, n_rows=7)
    assert fr.matrix.shape == (7, 3)
    assert np.all(fr.matrix[5:] == 0)
    # grid order is (a outer, b inner)
    assert fr.columns == ((1, 0), (1, 1), (2, 0))


def test_exact_rip_monotone_and_prop11():
    rng = np.random.default_rng(2)
    p = 13
    cols = [(int(a), int(b)) for a, b in zip(rng.integers(0, p, 12), rng.integers(0, p, 12))]
    A = sorted({a for a, _ in cols})
    fr = build_frame(p, range(p), range(p), N=30)
    mu = coherence(fr)
    prev = 0.0
    for k in (1, 2, 3, 4):
        d = exact_rip_constant(fr, k)
        assert d >= prev - 1e-12  # interlacing: monotone in k
        if k >= 2:
            assert d <= (k - 1) * mu + 1e-9
        prev = d
    with pytest.raises(TooLarge):
        exact_rip_constant(fr, 25)


def test_flat_rip_k1_equals_coherence():
    fr = build_frame(5, range(5), range(5), N=12)
    assert abs(flat_rip_constant(fr, 1) - coherence(fr)) < 1e-12


def test_flat_rip_sampled_below_exhaustive():
    fr = build_frame(5, range(5), range(5), N=10)
    exact = flat_rip_constant(fr, 2, mode="exhaustive")
    sampled = flat_rip_constant(fr, 2, mode="sampled", trials=200, seed=0)
    assert sampled <= exact + 1e-12
    # seeded: repeatable
    assert sampled == flat_rip_constant(fr, 2, mode="sampled", trials=200, seed=0)


def test_rip_report_and_bounds():
    fr = build_frame(5, range(5), range(5), N=10)
    rep = rip_report(fr, 3)
    assert rep.delta_exact <= rep.delta_from_coherence + 1e-9
    b = rip_bounds(0.1, 0.05, 4, 2)
    assert b["from_coherence"] == pytest.approx(0.3)
    assert b["from_flat"] == pytest.approx(44 * 2 * 0.05 * math.log(4))
    assert b["flat2_hypothesis_ok"] is True
    with pytest.raises(ValueError):
        rip_bounds(0.1, 0.05, 1, 1)


def test_exp_sum_energy_check():
    p = 101
    B = ResidueSet.of(p, [0, 1, 4, 5, 16, 17, 20, 21])
    out = exp_sum_energy_check(3, B, B, p)
    assert out["pass"]
    assert out["lhs"] <= len(B) ** 2
    with pytest.raises(ZeroTheta):
        exp_sum_energy_check(p, B, B, p)
