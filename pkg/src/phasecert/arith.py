"""Exact modular and prime arithmetic.

Everything here is deterministic and exact: primality uses a fixed
Miller-Rabin witness set valid for all 64-bit inputs, and every
transcendental evaluation is preceded by exact integer reduction of the
argument, so repeated runs can never drift.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotCoprime, ZeroMultiplier

MAX_MODULUS = 2**63 - 1

# Witnesses proving n prime for every n < 3.3e24, in particular for all
# 64-bit inputs (Sorenson & Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 0 <= n <= 2**63 - 1."""
    if n > MAX_MODULUS:
        raise ValueError("primality testing is limited to 63-bit inputs")
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A certified prime p together with its residue class mod 4."""

    p: int
    residue_class_mod4: int

    @classmethod
    def of(cls, p: int) -> "PrimeModulus":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return cls(p=p, residue_class_mod4=p % 4)

    @property
    def sigma(self) -> complex:
        """Quadratic Gauss-sum unit: 1 for p = 1 mod 4, i for p = 3 mod 4."""
        if self.p == 2:
            raise ValueError("sigma is defined for odd primes only")
        return 1.0 + 0.0j if self.residue_class_mod4 == 1 else 1.0j

    def __int__(self) -> int:
        return self.p


def _as_prime(p) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus.of(int(p))


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ValueError("residue out of range")

    def __int__(self) -> int:
        return self.value


def largest_prime_leq(n: int) -> PrimeModulus:
    """Largest prime p <= n (exists for n >= 2 by Bertrand's postulate)."""
    if n < 2:
        raise ValueError("need n >= 2")
    p = int(n)
    while not is_prime(p):
        p -= 1
    return PrimeModulus.of(p)


def sieve_primes(limit: int) -> np.ndarray:
    """All primes <= limit, ascending (plain Eratosthenes on a bit array)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for q in range(2, int(limit**0.5) + 1):
        if mask[q]:
            mask[q * q :: q] = False
    return np.nonzero(mask)[0].astype(np.int64)


def primes_in_dyadic(P: int) -> list[int]:
    """Primes q with P/2 < q <= P, ascending."""
    if P < 3:
        raise ValueError("need P >= 3")
    primes = sieve_primes(P)
    return [int(q) for q in primes[2 * primes > P]]


def dyadic_prime_count_bounds(P: int) -> dict:
    """Count of primes in (P/2, P] against the explicit lower/upper bounds.

    The lower bound 2P/(5 log(P/2)) applies for P >= 250; the upper bound
    0.76 P / log P for any P > 2.
    """
    V = len(primes_in_dyadic(P))
    out = {"P": P, "count": V, "upper": 0.76 * P / math.log(P), "upper_ok": None, "lower": None, "lower_ok": None}
    out["upper_ok"] = V <= out["upper"]
    if P >= 250:
        out["lower"] = 2 * P / (5 * math.log(P / 2))
        out["lower_ok"] = V > out["lower"]
    return out


def mod_inverse(a: int, m: int) -> Residue:
    """Inverse of a modulo m; raises NotCoprime when gcd(a, m) != 1."""
    if m < 2 or m > MAX_MODULUS:
        raise ValueError("modulus out of supported range")
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1")
    return Residue(pow(a, -1, m), m)


def legendre_symbol(d: int, p) -> int:
    """Legendre symbol (d/p) in {-1, 0, +1}; (0/p) = 0 by convention."""
    p = int(p)
    d %= p
    if d == 0:
        return 0
    s = pow(d, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def root_of_unity(x: int, m: int) -> complex:
    """e^(2 pi i x / m) with the argument reduced mod m in exact integers."""
    if m < 1:
        raise ValueError("need m >= 1")
    return cmath.exp(2j * math.pi * (x % m) / m)


def gauss_sum(d: int, p, mode: str = "direct") -> complex:
    """Quadratic Gauss sum sum_x e_p(d x^2), directly or by closed form.

    The closed form is sigma_p * sqrt(p) * (d/p).
    """
    pm = _as_prime(p)
    if pm.p == 2:
        raise ValueError("odd p required")
    if d % pm.p == 0:
        raise ZeroMultiplier("d must be nonzero mod p")
    if mode == "closed_form":
        return pm.sigma * math.sqrt(pm.p) * legendre_symbol(d, pm.p)
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    x = np.arange(pm.p, dtype=np.int64)
    phases = (d % pm.p) * x * x % pm.p
    return complex(np.exp(2j * np.pi * phases / pm.p).sum())
