"""Quadratic-phase frames and their coherence / RIP measurements.

Columns are u_{a,b} = p^{-1/2} (e_p(a x^2 + b x))_{x in F_p}, zero-padded
to n rows.  Pairwise inner products have a closed Gauss-sum form, which we
use as an independent cross-check on the direct summation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .additive import ResidueSet, additive_energy
from .arith import PrimeModulus, _as_prime, legendre_symbol, mod_inverse, root_of_unity
from .errors import (
    CubeOverflow,
    DuplicateElements,
    ModulusMismatch,
    ParamsTooLarge,
    TooLarge,
    TooManyColumns,
    ZeroTheta,
)

FRAME_CELL_CAP = 2 * 10**7
EXACT_RIP_SUPPORT_CAP = 10**5
FLAT_RIP_PAIR_CAP = 10**7


def _int_kth_root(n: int, k: int) -> int:
    """floor(n^(1/k)) in exact integer arithmetic."""
    x = int(round(n ** (1.0 / k)))
    while x > 0 and x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters (alpha, L, U) for the set A and (M, r) for the digit set B.

    derived mode follows the published parameterization, which needs
    p > (2m)^(8 m^2) to be usable; override mode accepts any (L, U, M, r)
    and records whether the two proof-critical inequalities hold instead of
    enforcing them (the exhaustive dissociativity check is the arbiter at
    desk scale).
    """

    m: int
    alpha: float
    beta: float
    L: int
    U: int
    M_digits: int
    r_digits: int
    mode: str

    @classmethod
    def derived(cls, p, m: int) -> "ConstructionParams":
        p = int(p)
        if m < 2 or m % 2:
            raise ValueError("m must be even, >= 2")
        alpha = 1.0 / (8 * m * m)
        L = _int_kth_root(p, 8 * m * m)
        if L < 2 * m:
            raise ParamsTooLarge(
                f"derived mode needs p > (2m)^(8m^2); got L={L} < 2m={2 * m}"
            )
        M = 2 ** (16 * m * m - 1)
        r = int(alpha / 2 * math.log(p) / math.log(2))
        return cls(m=m, alpha=alpha, beta=alpha / 2, L=L, U=L ** (4 * m - 1),
                   M_digits=M, r_digits=r, mode="derived")

    @classmethod
    def override(cls, L: int, U: int, M_digits: int, r_digits: int, m: int = 2) -> "ConstructionParams":
        alpha = 1.0 / (8 * m * m)
        return cls(m=m, alpha=alpha, beta=alpha / 2, L=L, U=U,
                   M_digits=M_digits, r_digits=r_digits, mode="override")

    def proof_checks(self, p) -> dict:
        p = int(p)
        return {
            "U_lower_ok": self.U >= 2 * self.m * self.L ** (4 * self.m - 2),
            "U_power_ok": self.U ** (2 * self.m) < p,
            "cube_fits": (2 * self.M_digits) ** self.r_digits <= p,
        }

    def to_json(self) -> dict:
        return {
            "m": self.m, "alpha": self.alpha, "beta": self.beta, "L": self.L,
            "U": self.U, "M_digits": self.M_digits, "r_digits": self.r_digits,
            "mode": self.mode,
        }


def build_set_A(p, params: ConstructionParams) -> list[int]:
    """{x^2 + Ux mod p : 1 <= x <= L}, required collision-free."""
    p = int(p)
    vals = [(x * x + params.U * x) % p for x in range(1, params.L + 1)]
    if len(set(vals)) != params.L:
        raise DuplicateElements("x^2 + Ux collides mod p")
    return sorted(vals)


def build_set_B(p, params: ConstructionParams) -> list[int]:
    """All M^r digit expansions sum_j x_j (2M)^(j-1), x_j in [0, M)."""
    p = int(p)
    M, r = params.M_digits, params.r_digits
    if (2 * M) ** r > p:
        raise CubeOverflow(f"(2M)^r = {(2 * M) ** r} > p = {p}")
    if M**r > 10**6:
        raise TooLarge("set B enumeration capped at 1e6 elements")
    base = 2 * M
    vals = [0]
    for j in range(r):
        w = base**j
        vals = [v + d * w for v in vals for d in range(M)]
    return sorted(vals)


@dataclass(frozen=True)
class DissociativityResult:
    passed: bool
    counterexample: tuple | None
    tuples_checked: int

    def __bool__(self) -> bool:
        return self.passed


def verify_dissociativity(A, p, m: int) -> DissociativityResult:
    """Exhaustively check the reciprocal-sum dispersion condition.

    For every a in A and every ordered 2m-tuple from A\\{a}: if the first m
    reciprocals 1/(a - a_j) sum to the same F_p value as the last m, the two
    halves must be permutations of each other.
    """
    p = int(p)
    A = list(A)
    if len(set(A)) != len(A):
        raise ValueError("A must be duplicate-free")
    if len(A) > 1 and len(A) ** (2 * m) * len(A) > 10**8:
        raise TooLarge("exhaustive dissociativity capped at |A|^(2m+1) <= 1e8")
    checked = 0
    for a in A:
        others = [x for x in A if x != a]
        inv = {x: pow((a - x) % p, -1, p) for x in others}
        for tup in itertools.product(others, repeat=2 * m):
            checked += 1
            lhs = sum(inv[x] for x in tup[:m]) % p
            rhs = sum(inv[x] for x in tup[m:]) % p
            if lhs == rhs and sorted(tup[:m]) != sorted(tup[m:]):
                return DissociativityResult(False, (a,) + tup, checked)
    return DissociativityResult(True, None, checked)


@dataclass(frozen=True)
class QuadPhaseFrame:
    p: PrimeModulus
    set_A: tuple
    set_B: tuple
    columns: tuple
    n_rows: int
    matrix: np.ndarray

    @property
    def n_columns(self) -> int:
        return self.matrix.shape[1]


def column_vector(p, a: int, b: int) -> np.ndarray:
    """u_{a,b} = p^(-1/2) (e_p(a x^2 + b x))_x, unpadded (length p)."""
    p = int(p)
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    ph = (a % p) * x2 % p
    ph = (ph + (b % p) * x) % p
    return np.exp(2j * np.pi * ph / p) / math.sqrt(p)


def closed_form_inner(p, a1: int, b1: int, a2: int, b2: int) -> complex:
    """<u_{a1,b1}, u_{a2,b2}> by the Gauss-sum formula."""
    pm = _as_prime(p)
    p = pm.p
    if (a1 - a2) % p == 0:
        return 1.0 + 0.0j if (b1 - b2) % p == 0 else 0.0j
    d = (a1 - a2) % p
    inv4d = int(mod_inverse(4 * d % p, p))
    t = (-((b1 - b2) ** 2 % p) * inv4d) % p
    return pm.sigma / math.sqrt(p) * legendre_symbol(d, p) * root_of_unity(t, p)


def build_frame(p, A, B, N: int | None = None, n_rows: int | None = None) -> QuadPhaseFrame:
    """Frame from the first N columns of the (a outer, b inner) grid."""
    pm = _as_prime(p)
    if pm.p == 2:
        raise ValueError("p must be odd (the Gram closed form divides by 4(a1-a2))")
    A, B = [int(a) for a in A], [int(b) for b in B]
    grid = [(a, b) for a in A for b in B]
    if N is None:
        N = len(grid)
    if N > len(grid):
        raise TooManyColumns(f"N={N} > |A||B|={len(grid)}")
    if n_rows is None:
        n_rows = pm.p
    if n_rows < pm.p:
        raise ValueError("n_rows must be >= p")
    if n_rows * N > FRAME_CELL_CAP:
        raise TooLarge("frame materialization capped at 2e7 cells")
    cols = grid[:N]
    x = np.arange(pm.p, dtype=np.int64)
    x2 = x * x % pm.p
    mat = np.zeros((n_rows, N), dtype=np.complex128)
    for j, (a, b) in enumerate(cols):
        ph = ((a % pm.p) * x2 + (b % pm.p) * x) % pm.p
        mat[: pm.p, j] = np.exp(2j * np.pi * ph / pm.p)
    mat[: pm.p] /= math.sqrt(pm.p)
    return QuadPhaseFrame(p=pm, set_A=tuple(A), set_B=tuple(B),
                          columns=tuple(cols), n_rows=n_rows, matrix=mat)


def _gram(frame_or_matrix) -> np.ndarray:
    mat = frame_or_matrix.matrix if isinstance(frame_or_matrix, QuadPhaseFrame) else frame_or_matrix
    return mat.conj().T @ mat


def coherence(frame_or_matrix) -> float:
    """Max |<u_r, u_s>| over distinct columns, computed blockwise."""
    mat = frame_or_matrix.matrix if isinstance(frame_or_matrix, QuadPhaseFrame) else frame_or_matrix
    N = mat.shape[1]
    if N < 2:
        raise ValueError("need at least 2 columns")
    block = max(1, FRAME_CELL_CAP // max(1, N))
    mu = 0.0
    for lo in range(0, N, block):
        hi = min(lo + block, N)
        g = np.abs(mat[:, lo:hi].conj().T @ mat)
        g[np.arange(lo, hi) - lo, np.arange(lo, hi)] = 0.0
        mu = max(mu, float(g.max()))
    return mu


def exact_rip_constant(frame_or_matrix, k: int) -> float:
    """Exact RIP constant of order k: extreme Gram eigenvalue deviation over
    all k-column supports (size-k supports dominate smaller ones by
    eigenvalue interlacing)."""
    mat = frame_or_matrix.matrix if isinstance(frame_or_matrix, QuadPhaseFrame) else frame_or_matrix
    N = mat.shape[1]
    if k < 1 or k > N:
        raise ValueError("need 1 <= k <= N")
    if k > 24 or math.comb(N, k) > EXACT_RIP_SUPPORT_CAP:
        raise TooLarge(f"C({N},{k}) supports exceed the exhaustive cap")
    if k == 1:
        norms = np.linalg.norm(mat, axis=0)
        return float(np.max(np.abs(norms**2 - 1.0)))
    G = _gram(mat)
    supports = np.array(list(itertools.combinations(range(N), k)), dtype=np.intp)
    delta = 0.0
    for lo in range(0, len(supports), 4096):
        S = supports[lo : lo + 4096]
        sub = G[S[:, :, None], S[:, None, :]]
        eigs = np.linalg.eigvalsh(sub)
        delta = max(delta, float(np.max(eigs[:, -1] - 1.0)), float(np.max(1.0 - eigs[:, 0])))
    return delta


def _flat_value(G: np.ndarray, J1, J2) -> float:
    assert not set(J1) & set(J2)
    s = G[np.ix_(list(J1), list(J2))].sum()
    return abs(s) / math.sqrt(len(J1) * len(J2))


def flat_rip_constant(frame_or_matrix, k: int, mode: str = "exhaustive",
                      trials: int = 10**5, seed: int = 0) -> float:
    """Smallest delta with |<sum_{J1} u, sum_{J2} u>| <= delta sqrt(|J1||J2|)
    over disjoint supports of size <= k.

    Sampled mode is a seeded lower bound on the true constant; it never
    enumerates overlapping pairs.
    """
    mat = frame_or_matrix.matrix if isinstance(frame_or_matrix, QuadPhaseFrame) else frame_or_matrix
    N = mat.shape[1]
    if k < 1:
        raise ValueError("need k >= 1")
    k = min(k, N - 1)
    G = _gram(mat)
    if mode == "exhaustive":
        cost = sum(
            math.comb(N, i) * math.comb(N - i, j)
            for i in range(1, k + 1)
            for j in range(1, k + 1)
        )
        if cost > FLAT_RIP_PAIR_CAP:
            raise TooLarge(f"{cost} support pairs exceed the exhaustive cap")
        delta = 0.0
        idx = range(N)
        for i in range(1, k + 1):
            for J1 in itertools.combinations(idx, i):
                rest = [j for j in idx if j not in J1]
                for j in range(1, k + 1):
                    for J2 in itertools.combinations(rest, j):
                        delta = max(delta, _flat_value(G, J1, J2))
        return delta
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    delta = 0.0
    for _ in range(trials):
        i = int(rng.integers(1, k + 1))
        j = int(rng.integers(1, k + 1))
        perm = rng.permutation(N)
        delta = max(delta, _flat_value(G, perm[:i], perm[i : i + j]))
    return delta


@dataclass(frozen=True)
class RipReport:
    k: int
    delta_flat: float
    delta_exact: float | None
    delta_from_coherence: float
    mode: str

    def to_json(self) -> dict:
        return {
            "k": self.k, "delta_flat": self.delta_flat, "delta_exact": self.delta_exact,
            "delta_from_coherence": self.delta_from_coherence, "mode": self.mode,
        }


def rip_report(frame, k: int, flat_mode: str = "exhaustive",
               trials: int = 10**5, seed: int = 0) -> RipReport:
    mu = coherence(frame)
    delta_flat = flat_rip_constant(frame, k, mode=flat_mode, trials=trials, seed=seed)
    try:
        delta_exact = exact_rip_constant(frame, k)
    except TooLarge:
        delta_exact = None
    mode = flat_mode if flat_mode == "exhaustive" else f"sampled({trials},{seed})"
    return RipReport(k=k, delta_flat=delta_flat, delta_exact=delta_exact,
                     delta_from_coherence=(k - 1) * mu, mode=mode)


def rip_bounds(mu: float, delta_flat: float, k: int, s: int) -> dict:
    """Formula-only bounds: delta = (k-1) mu from coherence, and the
    flat-to-RIP conversion 44 s delta log k for order 2sk (the conversion
    lemma assumes k >= 2^10; values > 1 are vacuous)."""
    if k < 2 or s < 1:
        raise ValueError("need k >= 2, s >= 1")
    return {
        "from_coherence": (k - 1) * mu,
        "from_flat": 44.0 * s * delta_flat * math.log(k),
        "flat2_hypothesis_ok": mu <= 1.0 / k,
    }


def exp_sum_energy_check(theta: int, B1: ResidueSet, B2: ResidueSet, p) -> dict:
    """|sum e_p(theta (b1-b2)^2)| against the energy-based bound
    |B1|^(1/2) E(B1,B1)^(1/8) |B2|^(1/2) E(B2,B2)^(1/8) p^(1/8)."""
    p = int(p)
    if B1.modulus != p or B2.modulus != p:
        raise ModulusMismatch("B1, B2 must live mod p")
    if theta % p == 0:
        raise ZeroTheta("theta must be nonzero mod p")
    if len(B1) * len(B2) > FLAT_RIP_PAIR_CAP:
        raise TooLarge("capped at |B1||B2| <= 1e7")
    diffs = np.subtract.outer(B1.as_array(), B2.as_array()).ravel() % p
    ph = (theta % p) * (diffs * diffs % p) % p
    lhs = abs(complex(np.exp(2j * np.pi * ph / p).sum()))
    e1 = additive_energy(B1, B1, mode="convolution").energy
    e2 = additive_energy(B2, B2, mode="convolution").energy
    rhs = math.sqrt(len(B1) * len(B2)) * e1**0.125 * e2**0.125 * p**0.125
    return {"lhs": lhs, "rhs": rhs, "pass": lhs <= rhs * (1 + 1e-9)}
