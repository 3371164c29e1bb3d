"""Power-sum point sets on the unit circle and their certificates.

Points are exact rationals e(s/q); all powers z^k are evaluated from the
reduced integer phase k s mod q, so the scan has zero drift.  The
construction unions the stage sets {e(s/q) : s in S_q} over primes
q in (P1/2, P1] and certifies max_k |sum z_j^k| / n against the measured
stage maxima plus the divisor term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .arith import primes_in_dyadic
from .errors import ParameterConditionViolated, StageSizeMismatch, TooLarge
from .thinsets import build_stage_set

DIRECT_SCAN_CELL_CAP = 10**10
GROUPED_GATHER_CAP = 10**9
FRAME_CELL_CAP = 10**7


@dataclass(frozen=True)
class TuranPointSet:
    """Multiset of unit-circle points e(s/q), stored as (s, q, mult)."""

    points: tuple  # sorted (s, q, multiplicity) triples, 0 <= s < q

    @classmethod
    def from_triples(cls, triples) -> "TuranPointSet":
        agg: dict[tuple[int, int], int] = {}
        for s, q, *rest in triples:
            q = int(q)
            if q < 1:
                raise ValueError("q must be positive")
            m = int(rest[0]) if rest else 1
            key = (int(s) % q, q)
            agg[key] = agg.get(key, 0) + m
        return cls(points=tuple((s, q, m) for (s, q), m in sorted(agg.items())))

    @property
    def n(self) -> int:
        return sum(m for _, _, m in self.points)

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        s = np.array([p[0] for p in self.points], dtype=np.int64)
        q = np.array([p[1] for p in self.points], dtype=np.int64)
        m = np.array([p[2] for p in self.points], dtype=np.float64)
        return s, q, m

    def complex_points(self) -> np.ndarray:
        """One complex value per distinct point (multiplicity separate)."""
        s, q, _ = self.arrays()
        return np.exp(2j * np.pi * s / q)

    def to_json(self) -> dict:
        return {"points": [[s, q, m] for s, q, m in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "TuranPointSet":
        return cls.from_triples(obj["points"])


def er_reference_bound(n: int, N: int) -> float:
    """sqrt(6 n log(N+1)): the classical random reference value, reported
    alongside measured maxima but never asserted."""
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    return math.sqrt(6.0 * n * math.log(N + 1))


def _grouped_scan(z: TuranPointSet, N: int, threads=None) -> tuple[float, int]:
    """Exact grouped evaluation: sum_j z_j^k depends on k only through
    k mod q per group, so precompute each group's full period profile and
    gather.  Identical values to the direct per-point recurrence."""
    groups: dict[int, list[tuple[int, int]]] = {}
    for s, q, m in z.points:
        groups.setdefault(q, []).append((s, m))
    profiles = {}
    for q in sorted(groups):
        vals = np.array([s for s, _ in groups[q]], dtype=np.int64)
        wts = np.array([m for _, m in groups[q]], dtype=np.float64)
        profiles[q] = kernels.profile(vals, wts, q, 0, q - 1)
    qs = sorted(profiles)
    best, bestk = -1.0, 1
    chunk = 1 << 16
    for lo in range(1, N + 1, chunk):
        hi = min(lo + chunk, N + 1)
        ks = np.arange(lo, hi, dtype=np.int64)
        total = np.zeros(len(ks), dtype=np.complex128)
        for q in qs:
            total += profiles[q][ks % q]
        mags = np.abs(total)
        i = int(np.argmax(mags))
        if mags[i] > best:
            best, bestk = float(mags[i]), int(ks[i])
    return best, bestk


def power_sum_max(z: TuranPointSet, N: int, mode: str = "auto",
                  threads: int | None = None) -> dict:
    """M_N(z) = max_{1<=k<=N} |sum_j z_j^k| with the first argmax k.

    mode "direct" runs the per-point modular recurrence (cost n N, capped
    at 1e10 cells); "grouped" collapses points sharing a denominator into
    a period profile (cost sum_q q |S_q| + N * #denominators).  Both are
    exact in phase; "auto" picks whichever fits its cap, preferring direct.
    """
    n_points = len(z.points)
    if n_points == 0 or N < 1:
        return {"M": 0.0, "argmax_k": None}
    qs = {q for _, q, _ in z.points}
    direct_cost = n_points * N
    grouped_cost = len(qs) * N
    if mode == "auto":
        mode = "direct" if direct_cost <= DIRECT_SCAN_CELL_CAP else "grouped"
    if mode == "direct":
        if direct_cost > DIRECT_SCAN_CELL_CAP:
            raise TooLarge(f"direct scan cost {direct_cost:.3g} cells > 1e10")
        s, q, m = z.arrays()
        M, k = kernels.points_max(s, q, m, 1, N, threads=threads)
        return {"M": M, "argmax_k": int(k)}
    if mode != "grouped":
        raise ValueError(f"unknown mode {mode!r}")
    if grouped_cost > GROUPED_GATHER_CAP:
        raise TooLarge(f"grouped scan cost {grouped_cost:.3g} gathers > 1e9")
    M, k = _grouped_scan(z, N, threads=threads)
    return {"M": M, "argmax_k": int(k)}


def turan_frame(z: TuranPointSet, N: int) -> dict:
    """n x N Vandermonde-type frame with columns n^{-1/2}(z_j^{k-1})_j.

    Returns the matrix, its directly computed coherence, and the power-sum
    value M_{N-1}(z)/n; the two agree to 1e-9 because every inner product
    of distinct columns is n^{-1} sum_j z_j^{k1-k2}.
    """
    n = z.n
    if n * N > FRAME_CELL_CAP:
        raise TooLarge(f"frame has {n * N} cells > 1e7")
    if n == 0 or N < 1:
        raise ValueError("need a nonempty point set and N >= 1")
    svals, qvals, mults = z.arrays()
    rows = []
    for s, q, m in zip(svals, qvals, mults.astype(np.int64)):
        ph = (np.arange(N, dtype=np.int64) * int(s)) % int(q)
        row = np.exp((2j * np.pi / int(q)) * ph)
        rows.extend([row] * int(m))
    matrix = np.vstack(rows) / math.sqrt(n)
    gram = matrix.conj().T @ matrix
    off = np.abs(gram - np.diag(np.diag(gram)))
    mu = float(off.max()) if N > 1 else 0.0
    bridge = power_sum_max(z, N - 1)["M"] / n if N > 1 else 0.0
    return {"matrix": matrix, "coherence": mu, "power_sum_ratio": bridge,
            "agree": abs(mu - bridge) <= 1e-9}


@dataclass(frozen=True)
class TuranCertificate:
    N: int
    P0: int
    P1: int
    R0: int
    V1: int
    S: int
    n: int
    variant: str
    stage_eps: float
    divisor_term: float
    bound: float
    measured: float | None
    argmax_k: int | None
    er_reference: float
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"N": self.N, "P0": self.P0, "P1": self.P1, "R0": self.R0,
                "V1": self.V1, "S": self.S, "n": self.n, "variant": self.variant,
                "stage_eps": self.stage_eps, "divisor_term": self.divisor_term,
                "bound": self.bound, "measured": self.measured,
                "argmax_k": self.argmax_k, "er_reference": self.er_reference,
                "flags": self.flags}


def construct_turan(N: int, mu: float | None = None, P0: int | None = None,
                    P1: int | None = None, R0: int | None = None,
                    strict: bool = False, variant: str = "nonzero",
                    scan: str = "full", threads: int | None = None
                    ) -> tuple[TuranPointSet, TuranCertificate]:
    """Union of stage sets over primes q in (P1/2, P1], certified.

    mu mode derives P1 = (8/mu) log N, P0 = (45/mu) log P1,
    R0 = [2 + log(1 + 13/mu)/2].  strict mode enforces L2^3/L1 <= mu
    (when mu is given) and P1 > 2 P0^2, raising with the violated
    inequality; otherwise violations are recorded in the certificate.
    The certificate bound uses the measured stage maxima, which keeps it
    sound even when P0 is below the asymptotic-lemma threshold.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    violations = []
    if mu is not None:
        if not 0 < mu < 1:
            raise ValueError("need 0 < mu < 1")
        L1 = math.log(N)
        L2 = math.log(L1)
        if L2**3 / L1 > mu:
            violations.append(
                f"L2^3/L1 = {L2 ** 3 / L1:.6g} > mu = {mu:g} (condition KN2)")
    if P0 is None or P1 is None or R0 is None:
        if mu is None:
            raise ValueError("need mu or explicit (P0, P1, R0)")
        P1 = int((8.0 / mu) * math.log(N))
        P0 = int((45.0 / mu) * math.log(P1))
        R0 = int(2 + math.log(1.0 + 13.0 / mu) / 2)
    if P1 <= 2 * P0 * P0:
        violations.append(f"P1 = {P1} <= 2 P0^2 = {2 * P0 * P0}")
    if strict and violations:
        raise ParameterConditionViolated("; ".join(violations))

    triples = []
    stage_eps = 0.0
    sizes = {}
    stage_certified = True
    for q in primes_in_dyadic(P1):
        Sq, cert = build_stage_set(q, P0, R0, variant=variant, scan="full",
                                   threads=threads)
        sizes[q] = Sq.size
        stage_certified = stage_certified and cert.certified
        stage_eps = max(stage_eps, cert.measured)
        triples.extend((v, q, m) for v, m in zip(Sq.values, Sq.mults))
    if len(set(sizes.values())) != 1:
        raise StageSizeMismatch(f"stage sizes differ: {sizes}")
    S = next(iter(sizes.values()))
    V1 = len(sizes)
    z = TuranPointSet.from_triples(triples)
    n = z.n
    assert n == V1 * S

    divisor_term = math.log(N) / (V1 * math.log(P1 / 2.0))
    measured = argmax = None
    if scan != "none":
        res = power_sum_max(z, N, mode="auto", threads=threads)
        measured, argmax = res["M"] / n, res["argmax_k"]
    flags = {"violations": violations, "stage_certified": stage_certified,
             "variant_note": "stage sets use the zero-excluded family; "
                             "set variant='all_integers' to include 0"}
    cert = TuranCertificate(N=N, P0=P0, P1=P1, R0=R0, V1=V1, S=S, n=n,
                            variant=variant, stage_eps=stage_eps,
                            divisor_term=divisor_term,
                            bound=stage_eps + divisor_term, measured=measured,
                            argmax_k=argmax, er_reference=er_reference_bound(n, N),
                            flags=flags)
    return z, cert
