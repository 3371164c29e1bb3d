"""Staged thin sets of residues with small normalized Fourier maxima.

One stage maps families S_p (p prime in (P/2, P]) to the multiset
T = {r + s (p^-1)_q} mod q; composing two stages gives the thin-set
construction mod N.  Every build returns a certificate pairing the finite
bound terms with the measured |f_T|.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .arith import PrimeModulus, _as_prime, primes_in_dyadic
from .errors import ModulusTooSmall, TooLarge, UnequalStageSizes, ParameterConditionViolated

FULL_SCAN_CELL_CAP = 10**10


@dataclass(frozen=True)
class ResidueMultiset:
    """Residues mod `modulus` with positive multiplicities (values sorted)."""

    modulus: int
    values: tuple
    mults: tuple

    @classmethod
    def from_values(cls, modulus: int, values) -> "ResidueMultiset":
        vals, mults = np.unique(np.asarray([int(v) % modulus for v in values], dtype=np.int64),
                                return_counts=True)
        return cls(modulus=modulus, values=tuple(int(v) for v in vals),
                   mults=tuple(int(m) for m in mults))

    @classmethod
    def from_pairs(cls, modulus: int, pairs) -> "ResidueMultiset":
        vals = []
        for v, m in pairs:
            vals.extend([int(v)] * int(m))
        return cls.from_values(modulus, vals)

    @property
    def size(self) -> int:
        return sum(self.mults)

    @property
    def distinct(self) -> bool:
        return all(m == 1 for m in self.mults)

    def signed_values(self) -> list[tuple[int, int]]:
        """(representative in (-m/2, m/2], multiplicity) pairs."""
        half = self.modulus / 2
        return [(v - self.modulus if v > half else v, m)
                for v, m in zip(self.values, self.mults)]

    def union(self, other: "ResidueMultiset") -> "ResidueMultiset":
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")
        return ResidueMultiset.from_pairs(
            self.modulus, list(zip(self.values, self.mults)) + list(zip(other.values, other.mults)))

    def to_json(self) -> dict:
        return {"modulus": self.modulus,
                "elements": [[v, m] for v, m in zip(self.values, self.mults)]}

    @classmethod
    def from_json(cls, obj: dict) -> "ResidueMultiset":
        return cls.from_pairs(int(obj["modulus"]), obj["elements"])


@dataclass(frozen=True)
class FourierProfile:
    modulus: int
    set_size: int
    max_normalized: float
    argmax_k: int | None
    scan: str

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "set_size": self.set_size,
                "max_normalized": self.max_normalized, "argmax_k": self.argmax_k,
                "scan": self.scan}


def fourier_max_profile(S: ResidueMultiset, scan: str = "full", count: int = 10**5,
                        seed: int = 0, threads: int | None = None) -> FourierProfile:
    """max_{1<=k<=N-1} |f_S(k)| / |S|.

    The full scan covers k = 1..floor(N/2) and relies on the exact conjugate
    symmetry |f_S(k)| = |f_S(N-k)| (the weights are real).  Sampled scans
    are seeded lower bounds and labeled as such.
    """
    N = S.modulus
    size = S.size
    if N < 2 or size == 0:
        return FourierProfile(N, size, 0.0, None, scan)
    vals = np.asarray(S.values, dtype=np.int64)
    wts = np.asarray(S.mults, dtype=np.float64)
    if scan == "full":
        if len(vals) * N > FULL_SCAN_CELL_CAP:
            raise TooLarge("full scan capped at |S| * N <= 1e10")
        mag, k = kernels.fourier_max(vals, wts, N, 1, N // 2, threads=threads)
        return FourierProfile(N, size, mag / size, int(k), "full")
    if scan != "sampled":
        raise ValueError(f"unknown scan {scan!r}")
    rng = np.random.default_rng(seed)
    ks = np.unique(rng.integers(1, N, size=count).astype(np.int64))

    def chunk_max(chunk):
        ph = chunk[:, None] * vals[None, :] % N
        z = np.exp((2j * np.pi / N) * ph) @ wts
        mags = np.abs(z)
        i = int(np.argmax(mags))
        return float(mags[i]), int(chunk[i])

    # fixed-size chunks merged in order: result independent of thread count
    chunks = [ks[lo : lo + 4096] for lo in range(0, len(ks), 4096)]
    nthreads = threads if threads is not None else kernels.default_threads()
    if nthreads <= 1 or len(chunks) <= 1:
        results = [chunk_max(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(chunk_max, chunks))
    best, bestk = -1.0, None
    for mag, k in results:
        if mag > best:
            best, bestk = mag, k
    return FourierProfile(N, size, best / size, bestk, f"sampled({count},{seed})")


def profile_magnitudes(S: ResidueMultiset, kmin: int = 1, kmax: int | None = None) -> np.ndarray:
    """|f_S(k)| for every k in [kmin, kmax] (for CSV emission)."""
    if kmax is None:
        kmax = S.modulus - 1
    z = kernels.profile(np.asarray(S.values, dtype=np.int64),
                        np.asarray(S.mults, dtype=np.float64), S.modulus, kmin, kmax)
    return np.abs(z)


def _stage_family(P: int, variant: str) -> dict[int, list[int]]:
    family = {}
    for p in primes_in_dyadic(P):
        half = (p - 1) // 2
        s = list(range(-half, half + 1))
        if variant == "nonzero":
            s.remove(0)
        elif variant != "all_integers":
            raise ValueError(f"unknown variant {variant!r}")
        family[p] = s
    return family


@dataclass(frozen=True)
class DistinctnessResult:
    ok: bool
    collision: tuple | None

    def __bool__(self) -> bool:
        return self.ok


def check_distinctness(R: int, P: int, family: dict, q: int) -> DistinctnessResult:
    """Are all r + s (p^-1)_q distinct mod q?  Guaranteed when q >= R P^2."""
    q = int(q)
    seen: dict[int, tuple] = {}
    for p, sset in family.items():
        if any(not -p / 2 < s < p / 2 for s in sset):
            raise ValueError(f"S_{p} not contained in (-p/2, p/2)")
        inv = pow(int(p), -1, q)
        for s in sset:
            base = s * inv % q
            for r in range(1, R + 1):
                v = (r + base) % q
                key = (r, int(p), int(s))
                if v in seen:
                    return DistinctnessResult(False, (seen[v], key))
                seen[v] = key
    return DistinctnessResult(True, None)


@dataclass(frozen=True)
class StageCertificate:
    q: int
    P: int
    R: int
    V: int
    variant: str
    size: int
    bound: float
    certified: bool
    measured: float | None
    argmax_k: int | None
    distinct: bool
    W: float | None = None

    def to_json(self) -> dict:
        return {"q": self.q, "P": self.P, "R": self.R, "V": self.V,
                "variant": self.variant, "size": self.size, "bound": self.bound,
                "certified": self.certified, "measured": self.measured,
                "argmax_k": self.argmax_k, "distinct": self.distinct, "W": self.W}


def nonzero_variant_R_threshold(P: int, q: int) -> float:
    return 1.0 + math.log(1.0 + 0.26 * P / math.log(2 * q)) / 2.0


def build_stage_set(q, P: int, R: int, variant: str = "nonzero", scan: str = "full",
                    seed: int = 0, threads: int | None = None
                    ) -> tuple[ResidueMultiset, StageCertificate]:
    """One stage: T = {r + s (p^-1)_q : 1<=r<=R, P/2 < p <= P, s in S_p} mod q."""
    qm = _as_prime(q)
    q = qm.p
    if q <= P:
        raise ModulusTooSmall(f"q={q} <= P={P}")
    family = _stage_family(P, variant)
    V = len(family)
    if V == 0:
        raise ValueError(f"no primes in ({P}/2, {P}]")
    values = []
    for p, sset in family.items():
        inv = pow(p, -1, q)
        for s in sset:
            base = s * inv % q
            values.extend((r + base) % q for r in range(1, R + 1))
    T = ResidueMultiset.from_values(q, values)
    size = R * sum(len(s) for s in family.values())
    assert T.size == size
    W = None
    if variant == "nonzero":
        bound = 15.0 * math.log(q) / P
        certified = P >= 250 and R >= nonzero_variant_R_threshold(P, q)
    else:
        W = 4.0 * math.log(q / 2) / math.log(P / 2)
        bound = W / (2 * V) + (W / (R * V)) * (1.0 + math.log(1.0 + V / W) / 2.0)
        certified = P >= 4
    measured = argmax = None
    if scan != "none":
        prof = fourier_max_profile(T, scan=scan, seed=seed, threads=threads)
        measured, argmax = prof.max_normalized, prof.argmax_k
    cert = StageCertificate(q=q, P=P, R=R, V=V, variant=variant, size=size,
                            bound=bound, certified=certified, measured=measured,
                            argmax_k=argmax, distinct=T.distinct, W=W)
    return T, cert


@dataclass(frozen=True)
class ThinSetCertificate:
    N: int
    mode: str
    variant: str
    size: int
    P0: float | None = None
    P1: float | None = None
    R0: int | None = None
    R1: int | None = None
    V0: int | None = None
    V1: int | None = None
    stage1_eps: float | None = None          # Lemma-style formula bound for stage one
    stage_eps_measured: float | None = None  # max measured stage |f|
    composed_bound: float | None = None      # final bound on |f_T|
    measured: float | None = None
    argmax_k: int | None = None
    distinct: bool | None = None
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": self.N, "mode": self.mode, "variant": self.variant, "size": self.size,
            "P0": self.P0, "P1": self.P1, "R0": self.R0, "R1": self.R1,
            "V0": self.V0, "V1": self.V1, "stage1_eps": self.stage1_eps,
            "stage_eps_measured": self.stage_eps_measured,
            "composed_bound": self.composed_bound, "measured": self.measured,
            "argmax_k": self.argmax_k, "distinct": self.distinct, "flags": self.flags,
        }


def compose_thin_set(N, P1: int, R1: int, stage_sets: dict,
                     scan: str = "full", seed: int = 0, threads: int | None = None
                     ) -> tuple[ResidueMultiset, ThinSetCertificate]:
    """Second stage: T = {r + s (q^-1)_N : 1<=r<=R1, q in (P1/2,P1], s in S_q}.

    stage_sets maps each prime q to (ResidueMultiset mod q, StageCertificate).
    Stage residues are recentered to (-q/2, q/2) before composing, which is
    what the distinctness lemma needs and leaves |f_{S_q}| unchanged.
    """
    Nm = _as_prime(N)
    N = Nm.p
    if N <= P1:
        raise ModulusTooSmall(f"N={N} <= P1={P1}")
    if P1 < 4:
        raise ValueError("need P1 >= 4")
    sizes = {q: S.size for q, (S, _) in stage_sets.items()}
    common = set(sizes.values())
    if len(common) != 1:
        raise UnequalStageSizes(f"stage sizes differ: {sizes}")
    S_common = common.pop()
    if S_common < 2:
        raise UnequalStageSizes("stage size must be >= 2")
    V1 = len(stage_sets)
    values = []
    eps = 0.0
    all_measured = True
    for q, (Sq, cert) in sorted(stage_sets.items()):
        if cert.measured is None:
            all_measured = False
        else:
            eps = max(eps, cert.measured)
        inv = pow(int(q), -1, N)
        for s, m in Sq.signed_values():
            base = s * inv % N
            for r in range(1, R1 + 1):
                values.extend([(r + base) % N] * m)
    T = ResidueMultiset.from_values(N, values)
    composed = eps + (2.0 / math.sqrt(3.0)) / R1 + math.log(N / 3.0) / (V1 * math.log(P1 / 2.0))
    measured = argmax = None
    if scan != "none":
        prof = fourier_max_profile(T, scan=scan, seed=seed, threads=threads)
        measured, argmax = prof.max_normalized, prof.argmax_k
    flags = {
        "all_stage_measured": all_measured,
        "stage_sizes_equal": True,
        "distinct_guaranteed": N >= R1 * P1 * P1,
    }
    cert = ThinSetCertificate(N=N, mode="composed", variant="mixed", size=T.size,
                              P1=P1, R1=R1, V1=V1, stage_eps_measured=eps,
                              composed_bound=composed, measured=measured,
                              argmax_k=argmax, distinct=T.distinct, flags=flags)
    return T, cert


def _log_iterates(N: int) -> tuple[float, float, float]:
    L1 = math.log(N)
    L2 = math.log(L1)
    return L1, L2, math.log(L2)


def construct_thin_set(N, mu: float | None = None, mode: str = "one_iteration",
                       strict: bool = False, P0: int | None = None, P1: int | None = None,
                       R0: int | None = None, R1: int | None = None,
                       variant: str = "nonzero", scan: str = "full", seed: int = 0,
                       threads: int | None = None) -> tuple[ResidueMultiset, ThinSetCertificate]:
    """One-iteration or two-stage thin set mod prime N.

    Parameters not supplied are derived from mu (one iteration:
    P = (15/mu) log N, R = [2 + log(1+5/mu)/2]; two stages:
    P1 = (8/mu) log N, P0 = (45/mu) log P1, R0 = [2 + log(1+13/mu)/2],
    R1 = 4/mu).  strict mode enforces the published parameter conditions
    and raises naming the first violated inequality; otherwise violations
    are recorded as certificate flags.
    """
    Nm = _as_prime(N)
    N = Nm.p
    L1, L2, _ = _log_iterates(N)
    violations = []
    if mu is not None:
        if not 0 < mu < 1:
            raise ValueError("need 0 < mu < 1")
        if L2**4 / L1 > mu:
            violations.append(f"L2^4/L1 = {L2 ** 4 / L1:.6g} > mu = {mu:g} (condition KN)")

    if mode == "one_iteration":
        if P0 is None or R0 is None:
            if mu is None:
                raise ValueError("need mu or explicit (P0, R0)")
            P0 = max(4, int((15.0 / mu) * L1))
            R0 = int(2 + math.log(1.0 + 5.0 / mu) / 2)
        if strict and violations:
            raise ParameterConditionViolated("; ".join(violations))
        T, scert = build_stage_set(Nm, P0, R0, variant=variant, scan=scan,
                                   seed=seed, threads=threads)
        flags = {"stage_certified": scert.certified, "violations": violations}
        cert = ThinSetCertificate(N=N, mode="one_iteration", variant=variant, size=T.size,
                                  P0=P0, R0=R0, V0=scert.V, composed_bound=scert.bound,
                                  measured=scert.measured, argmax_k=scert.argmax_k,
                                  distinct=T.distinct, flags=flags)
        return T, cert

    if mode != "two_stage":
        raise ValueError(f"unknown mode {mode!r}")

    if mu is not None and abs(1.0 / mu - round(1.0 / mu)) > 1e-12:
        violations.append(f"1/mu = {1.0 / mu:g} is not an integer (condition KN)")
    if P1 is None or P0 is None or R0 is None or R1 is None:
        if mu is None:
            raise ValueError("need mu or explicit (P0, P1, R0, R1)")
        P1 = int((8.0 / mu) * L1)
        P0 = int((45.0 / mu) * math.log(P1))
        R0 = int(2 + math.log(1.0 + 13.0 / mu) / 2)
        R1 = max(1, round(4.0 / mu))
    if P0 < 250:
        violations.append(f"P0 = {P0} < 250")
    if P1 < 2 * R0 * P0 * P0:
        violations.append(f"P1 = {P1} < 2 R0 P0^2 = {2 * R0 * P0 * P0}")
    if N < R1 * P1 * P1:
        violations.append(f"N = {N} < R1 P1^2 = {R1 * P1 * P1}")
    if R0 < nonzero_variant_R_threshold(P0, P1):
        violations.append(f"R0 = {R0} below the stage-one threshold")
    if mu is not None:
        err = (2.0 / math.sqrt(3.0)) / R1 + 15.0 * math.log(P1) / P0 + 5.0 * L1 / (2.0 * P1)
        if err > mu:
            violations.append(f"error budget {err:.6g} > mu = {mu:g}")
    if strict and violations:
        raise ParameterConditionViolated("; ".join(violations))
    stage_sets = {}
    for q in primes_in_dyadic(P1):
        stage_sets[q] = build_stage_set(q, P0, R0, variant=variant, scan="full", threads=threads)
    T, cert = compose_thin_set(Nm, P1, R1, stage_sets, scan=scan, seed=seed, threads=threads)
    flags = dict(cert.flags)
    flags["violations"] = violations
    flags["stage_certified"] = all(c.certified for _, c in stage_sets.values())
    cert = ThinSetCertificate(N=N, mode="two_stage", variant=variant, size=cert.size,
                              P0=P0, P1=P1, R0=R0, R1=R1,
                              V0=next(iter(stage_sets.values()))[1].V, V1=cert.V1,
                              stage1_eps=15.0 * math.log(P1) / P0,
                              stage_eps_measured=cert.stage_eps_measured,
                              composed_bound=cert.composed_bound, measured=cert.measured,
                              argmax_k=cert.argmax_k, distinct=cert.distinct, flags=flags)
    return T, cert
