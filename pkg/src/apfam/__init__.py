"""Families of pairwise non-intersecting arithmetic progressions.

Exact tools to build large disjoint families with distinct moduli up to x,
verify them pairwise, search small ranges exhaustively, refine families
through certified common-prime chains, and compare the counts involved
against their predicted sub-exponential scales.
"""

__version__ = "0.1.0"

from .bounds import (
    CountsRow,
    alpha_exceeding_fraction,
    bounds_report,
    choose_alpha,
    omega_tail_count,
    omega_tail_majorant,
    prime_power_reciprocal_sum,
    rows_to_csv,
    split_squarefull,
    squarefull_reduce,
)
from .construction import (
    ConstructionParams,
    ConstructionResult,
    assign_residue,
    build_construction,
    choose_prime,
    enumerate_moduli,
    truncated_construction,
)
from .errors import (
    CapacityError,
    DomainError,
    FamilyFormatError,
    NotDisjointError,
    StructuralError,
)
from .family import (
    Family,
    Progression,
    VerificationReport,
    Witness,
    certify,
    density,
    disjoint,
    dumps_family,
    family_digest,
    loads_family,
    read_family,
    translate,
    verify_family,
    write_family,
)
from .numtheory import (
    Factorization,
    LScale,
    crt_pair,
    enumerate_smooth,
    factorize,
    l_scale,
    omega,
    psi,
    psi_star,
    sieve_primes,
)
from .refinement import (
    CertificateCheck,
    RefinementCertificate,
    RefinementParams,
    RefinementStep,
    build_chain,
    certificate_from_dict,
    certificate_to_dict,
    check_certificate,
    filter_eligible,
    read_certificate,
    refine_step,
    write_certificate,
)
from .solver import (
    SearchConfig,
    SearchResult,
    brute_force_oracle,
    lower_bound_from_construction,
    solve_exact,
)

__all__ = [
    "CapacityError",
    "CertificateCheck",
    "ConstructionParams",
    "ConstructionResult",
    "CountsRow",
    "DomainError",
    "Factorization",
    "Family",
    "FamilyFormatError",
    "LScale",
    "NotDisjointError",
    "Progression",
    "RefinementCertificate",
    "RefinementParams",
    "RefinementStep",
    "SearchConfig",
    "SearchResult",
    "StructuralError",
    "VerificationReport",
    "Witness",
    "alpha_exceeding_fraction",
    "assign_residue",
    "bounds_report",
    "brute_force_oracle",
    "build_chain",
    "build_construction",
    "certificate_from_dict",
    "certificate_to_dict",
    "certify",
    "check_certificate",
    "choose_alpha",
    "choose_prime",
    "crt_pair",
    "density",
    "disjoint",
    "dumps_family",
    "enumerate_moduli",
    "enumerate_smooth",
    "factorize",
    "family_digest",
    "filter_eligible",
    "l_scale",
    "loads_family",
    "lower_bound_from_construction",
    "omega",
    "omega_tail_count",
    "omega_tail_majorant",
    "prime_power_reciprocal_sum",
    "psi",
    "psi_star",
    "read_certificate",
    "read_family",
    "refine_step",
    "rows_to_csv",
    "sieve_primes",
    "solve_exact",
    "split_squarefull",
    "squarefull_reduce",
    "translate",
    "truncated_construction",
    "verify_family",
    "write_certificate",
    "write_family",
]
