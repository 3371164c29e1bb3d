"""phasecert: explicit frames, thin Fourier sets and power-sum point sets,
with machine-checkable certificates for every finite claim."""

__version__ = "0.1.0"

from .arith import PrimeModulus, is_prime, largest_prime_leq, primes_in_dyadic
from .additive import ResidueSet, additive_energy, set_combine, tau_solver
from .ripmat import (
    ConstructionParams,
    QuadPhaseFrame,
    build_frame,
    build_set_A,
    build_set_B,
    coherence,
    exact_rip_constant,
    flat_rip_constant,
    rip_report,
    verify_dissociativity,
)
from .thinsets import (
    ResidueMultiset,
    ThinSetCertificate,
    build_stage_set,
    compose_thin_set,
    construct_thin_set,
    fourier_max_profile,
)
from .turan import (
    TuranCertificate,
    TuranPointSet,
    construct_turan,
    er_reference_bound,
    power_sum_max,
    turan_frame,
)

__all__ = [
    "PrimeModulus", "is_prime", "largest_prime_leq", "primes_in_dyadic",
    "ResidueSet", "additive_energy", "set_combine", "tau_solver",
    "ConstructionParams", "QuadPhaseFrame", "build_frame", "build_set_A",
    "build_set_B", "coherence", "exact_rip_constant", "flat_rip_constant",
    "rip_report", "verify_dissociativity",
    "ResidueMultiset", "ThinSetCertificate", "build_stage_set",
    "compose_thin_set", "construct_thin_set", "fourier_max_profile",
    "TuranCertificate", "TuranPointSet", "construct_turan",
    "er_reference_bound", "power_sum_max", "turan_frame",
]
