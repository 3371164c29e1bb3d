"""Sumset, additive-energy and cube-growth primitives.

Each operation is exact (integer arithmetic throughout) and cheap enough
to be paired with a brute-force oracle at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySet,
    LengthMismatch,
    ModulusMismatch,
    NotInCube,
    PairOutOfRange,
    TooLarge,
    ZeroDilation,
)

BRUTE_ENERGY_CAP = 10**6


@dataclass(frozen=True)
class ResidueSet:
    """Sorted duplicate-free residues modulo a fixed modulus."""

    modulus: int
    elements: tuple

    @classmethod
    def of(cls, modulus: int, elements) -> "ResidueSet":
        if modulus < 1:
            raise ValueError("modulus must be positive")
        vals = sorted({int(x) % modulus for x in elements})
        return cls(modulus=modulus, elements=tuple(vals))

    def __len__(self) -> int:
        return len(self.elements)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    def negate(self) -> "ResidueSet":
        return ResidueSet.of(self.modulus, [(-x) % self.modulus for x in self.elements])

    def dilate(self, b: int) -> "ResidueSet":
        return ResidueSet.of(self.modulus, [(b * x) % self.modulus for x in self.elements])

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "elements": list(self.elements)}

    @classmethod
    def from_json(cls, obj: dict) -> "ResidueSet":
        return cls.of(int(obj["modulus"]), obj["elements"])


def set_combine(A: ResidueSet, B: ResidueSet, mode: str = "sum", pairs=None) -> ResidueSet:
    """Sumset, difference set or F-restricted sumset of A and B."""
    if A.modulus != B.modulus:
        raise ModulusMismatch(f"{A.modulus} != {B.modulus}")
    m = A.modulus
    if mode == "sum":
        sums = np.add.outer(A.as_array(), B.as_array()).ravel() % m
    elif mode == "difference":
        sums = np.subtract.outer(A.as_array(), B.as_array()).ravel() % m
    elif mode == "restricted":
        if pairs is None:
            raise ValueError("restricted mode needs the pair list F")
        aset, bset = set(A.elements), set(B.elements)
        for a, b in pairs:
            if a not in aset or b not in bset:
                raise PairOutOfRange(f"({a}, {b}) not in A x B")
        sums = np.asarray([(a + b) % m for a, b in pairs], dtype=np.int64)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return ResidueSet.of(m, np.unique(sums))


@dataclass(frozen=True)
class EnergyReport:
    energy: int
    set_sizes: tuple
    ratio_to_cube: float

    def to_json(self) -> dict:
        return {"energy": self.energy, "set_sizes": list(self.set_sizes), "ratio_to_cube": self.ratio_to_cube}


def _energy_report(energy: int, na: int, nb: int) -> EnergyReport:
    cube = na * na * min(na, nb)
    return EnergyReport(energy=int(energy), set_sizes=(na, nb), ratio_to_cube=energy / cube if cube else float("nan"))


def additive_energy(A: ResidueSet, B: ResidueSet, mode: str = "convolution") -> EnergyReport:
    """E(A,B) = #{(a1,b1,a2,b2): a1+b1 = a2+b2 mod m}.

    brute mode counts coincidences among all |A||B| pairwise sums by direct
    comparison; convolution mode sums the squared multiplicities of
    1_A * 1_B.  Both are exact integers.
    """
    if A.modulus != B.modulus:
        raise ModulusMismatch(f"{A.modulus} != {B.modulus}")
    sums = np.add.outer(A.as_array(), B.as_array()).ravel() % A.modulus
    if mode == "brute":
        if len(A) * len(B) > BRUTE_ENERGY_CAP:
            raise TooLarge("brute mode capped at |A||B| <= 1e6")
        # literal quadruple count: compare every pairwise sum against every
        # other, chunked to bound memory
        energy = 0
        for lo in range(0, len(sums), 4096):
            energy += int(np.equal.outer(sums[lo : lo + 4096], sums).sum())
    elif mode == "convolution":
        counts = np.bincount(sums, minlength=A.modulus)
        energy = int((counts.astype(np.int64) ** 2).sum())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return _energy_report(energy, len(A), len(B))


@dataclass(frozen=True)
class TauSolution:
    M: int
    tau: float
    tau_prime: float
    residual: float


def _tau_f(tau: float, M: int) -> float:
    return (1.0 / M) ** (2 * tau) + ((M - 1.0) / M) ** tau - 1.0


@lru_cache(maxsize=None)
def tau_solver(M: int) -> TauSolution:
    """Root of (1/M)^(2 tau) + ((M-1)/M)^tau = 1 on (1/2, 1], by bisection.

    f is strictly decreasing on the bracket, so 100 halvings of [1/2, 1]
    pin the root far below the 1e-12 residual requirement.
    """
    if M < 2:
        raise ValueError("need M >= 2")
    lo, hi = 0.5, 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _tau_f(mid, M) > 0:
            lo = mid
        else:
            hi = mid
    tau = 0.5 * (lo + hi)
    tau_prime = math.log(2 * M - 1) / (2 * math.log(M))
    return TauSolution(M=M, tau=tau, tau_prime=tau_prime, residual=abs(_tau_f(tau, M)))


@dataclass(frozen=True)
class CubePoint:
    """A point of the digit cube {0,...,M-1}^r."""

    digits: tuple
    M: int
    r: int

    def __post_init__(self):
        if len(self.digits) != self.r:
            raise DimensionMismatch("digit count != r")
        if any(not 0 <= d < self.M for d in self.digits):
            raise NotInCube(f"digit out of [0, {self.M})")


def cube_encode(point: CubePoint) -> int:
    """sum_j x_j (2M)^(j-1): the bijection between the cube and residues."""
    base = 2 * point.M
    return sum(d * base**j for j, d in enumerate(point.digits))


def cube_decode(value: int, M: int, r: int) -> CubePoint:
    """Inverse of cube_encode; NotInCube when a digit lands in [M, 2M)."""
    base = 2 * M
    digits = []
    v = int(value)
    for _ in range(r):
        v, d = divmod(v, base)
        if d >= M:
            raise NotInCube(f"digit {d} in [M, 2M)")
        digits.append(d)
    if v != 0:
        raise NotInCube("value exceeds the r-digit range")
    return CubePoint(digits=tuple(digits), M=M, r=r)


def _pack(points, M: int, r: int) -> np.ndarray:
    """Pack cube points into carry-free integers (base 2M-1) so integer
    addition matches coordinatewise addition."""
    base = 2 * M - 1
    weights = base ** np.arange(r, dtype=np.int64)
    arr = np.asarray([p.digits for p in points], dtype=np.int64).reshape(len(points), r)
    return arr @ weights


def cube_sumset_size(packed_a: np.ndarray, packed_b: np.ndarray) -> int:
    return len(np.unique(np.add.outer(packed_a, packed_b)))


def verify_cube_sumset_bound(A, B) -> dict:
    """Check |A+B| >= (|A||B|)^tau_M for subsets of the same cube.

    Also reports the stronger tau'-comparison, which is informational only
    and never part of the pass flag.
    """
    A, B = list(A), list(B)
    if not A or not B:
        raise EmptySet("A and B must be nonempty")
    M, r = A[0].M, A[0].r
    for p in A + B:
        if (p.M, p.r) != (M, r):
            raise DimensionMismatch("points from different cubes")
    sol = tau_solver(M)
    lhs = cube_sumset_size(_pack(A, M, r), _pack(B, M, r))
    rhs = (len(A) * len(B)) ** sol.tau
    rhs_prime = (len(A) * len(B)) ** sol.tau_prime
    return {
        "lhs": lhs,
        "rhs": rhs,
        "pass": lhs >= rhs - 1e-9,
        "rhs_tau_prime": rhs_prime,
        "tau_prime_holds": lhs >= rhs_prime - 1e-9,
    }


def check_unordered_inequality(U, V, tau: float | None = None) -> dict:
    """Superadditivity over anti-diagonal maxima:

    sum_mu max_{k+l=mu} (U_k V_l)^tau >= (sum U)^tau (sum V)^tau.
    """
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    if U.shape != V.shape or U.ndim != 1 or len(U) < 2:
        raise LengthMismatch("U, V must be equal-length vectors, M >= 2")
    if (U < 0).any() or (V < 0).any():
        raise ValueError("entries must be non-negative")
    M = len(U)
    if tau is None:
        tau = tau_solver(M).tau
    lhs = 0.0
    for mu in range(2 * M - 1):
        best = max(
            U[k] * V[mu - k] for k in range(max(0, mu - M + 1), min(M - 1, mu) + 1)
        )
        lhs += best**tau
    rhs = U.sum() ** tau * V.sum() ** tau
    return {"lhs": lhs, "rhs": rhs, "pass": lhs >= rhs - 1e-9}


def dyadic_energy_scan(A: ResidueSet, B: ResidueSet, p) -> dict:
    """sum_{b in B} E(A, bA) over F_p, reported raw (no constant asserted)."""
    p = int(p)
    if A.modulus != p or B.modulus != p:
        raise ModulusMismatch("A, B must live mod p")
    if 0 in B.elements:
        raise ZeroDilation("0 in B")
    if len(A) ** 2 * len(B) > 10**8:
        raise TooLarge("capped at |A|^2 |B| <= 1e8")
    total = 0
    for b in B.elements:
        total += additive_energy(A, A.dilate(b), mode="convolution").energy
    denom = len(A) ** 3 * len(B)
    return {"total": total, "normalized": total / denom if denom else float("nan")}
