"""Counting bounds and the squarefull-part reduction.

omega_tail_count tallies integers with unusually many prime factors and
omega_tail_majorant dominates it with the tail of x * sum_j M**j / j!,
where M is the exact sum of reciprocals of prime powers up to x.  The
reduction splits each modulus n = alpha * beta into its squarefull and
squarefree parts and maps the largest equal-alpha, equal-residue-class
subfamily onto a squarefree-modulus family that inherits disjointness.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construction import ConstructionParams, build_construction
from .errors import CapacityError, DomainError
from .family import Family, Progression
from .numtheory import factorize, l_scale, psi, psi_star, sieve_primes

OMEGA_TABLE_LIMIT = 50_000_000
MAJORANT_CUTOFF = 1e-30


def omega_threshold(x: int, c: float) -> float:
    """The tail threshold c * sqrt(log x / log log x)."""
    lx = math.log(x)
    return c * math.sqrt(lx / math.log(lx))


def omega_tail_count(x: int, c: float) -> int:
    """Count of n <= x with more than c * sqrt(log x / log log x) prime factors.

    Returns 0 for x <= 2, where the threshold scale is undefined and no
    integer has more than one prime factor anyway.
    """
    if x < 1:
        raise DomainError(f"count needs x >= 1, got {x}")
    if c <= 0:
        raise DomainError(f"threshold coefficient must be positive, got {c}")
    if x <= 2:
        return 0
    if x > OMEGA_TABLE_LIMIT:
        raise CapacityError(f"omega table for {x} exceeds {OMEGA_TABLE_LIMIT}")
    table = np.zeros(x + 1, dtype=np.int8)
    for p in sieve_primes(x):
        table[p::p] += 1
    return int(np.count_nonzero(table[1:] > omega_threshold(x, c)))


def prime_power_reciprocal_sum(x: int) -> float:
    """Exact-to-double sum of 1/p**a over prime powers p**a <= x."""
    if x < 2:
        raise DomainError(f"sum needs x >= 2, got {x}")
    total = 0.0
    for p in sieve_primes(x):
        pa = p
        while pa <= x:
            total += 1.0 / pa
            pa *= p
    return total


def omega_tail_majorant(x: int, c: float) -> float:
    """Upper bound for omega_tail_count: x times the Poisson-style tail sum.

    Sums x * M**j / j! over j above the threshold, truncating once a term
    drops below 1e-30 of the partial sum.
    """
    if x < 16:
        raise DomainError(f"majorant needs x >= 16, got {x}")
    if c <= 0:
        raise DomainError(f"threshold coefficient must be positive, got {c}")
    m = prime_power_reciprocal_sum(x)
    j = int(math.floor(omega_threshold(x, c))) + 1
    term = math.exp(j * math.log(m) - math.lgamma(j + 1))
    total = 0.0
    while term > 0.0:
        total += term
        j += 1
        term *= m / j
        if term < MAJORANT_CUTOFF * total:
            break
    return x * total


def split_squarefull(n: int) -> tuple[int, int]:
    """(alpha, beta) with n = alpha * beta, alpha squarefull, beta squarefree,
    gcd(alpha, beta) = 1; alpha collects every prime appearing squared."""
    fact = factorize(n)
    alpha = 1
    beta = 1
    for p, e in fact.parts:
        if e >= 2:
            alpha *= p**e
        else:
            beta *= p
    return alpha, beta


def choose_alpha(family: Family) -> int:
    """The squarefull part shared by the most members; ties pick the smallest."""
    counts: dict[int, int] = {}
    for pr in family.items:
        alpha = split_squarefull(pr.modulus)[0]
        counts[alpha] = counts.get(alpha, 0) + 1
    if not counts:
        return 1
    return min(counts, key=lambda a: (-counts[a], a))


def squarefull_reduce(family: Family, alpha: int) -> Family:
    """Squarefree-modulus family from the members with squarefull part alpha.

    Keeps the largest residue class mod alpha among those members (smallest
    class on ties) and divides alpha out of each modulus.  Disjointness and
    distinctness carry over because the discarded alpha is common to every
    pair.
    """
    if alpha < 1:
        raise DomainError(f"alpha must be positive, got {alpha}")
    selected = [pr for pr in family.items if split_squarefull(pr.modulus)[0] == alpha]
    reduced_bound = max(2, family.x_bound // alpha)
    if not selected:
        return Family(items=(), x_bound=reduced_bound)
    classes: dict[int, list[Progression]] = {}
    for pr in selected:
        if pr.modulus % alpha:
            raise DomainError(f"alpha {alpha} does not divide modulus {pr.modulus}")
        classes.setdefault(pr.residue % alpha, []).append(pr)
    best = min(classes, key=lambda b: (-len(classes[b]), b))
    reduced = []
    for pr in classes[best]:
        q = pr.modulus // alpha
        if q < 2:
            raise DomainError(
                f"member {pr} equals its squarefull part; nothing remains to reduce"
            )
        reduced.append(Progression(pr.residue % q, q))
    return Family.build(reduced, reduced_bound)


def alpha_exceeding_fraction(family: Family, c: float = 1 / 3) -> Fraction:
    """Fraction of members whose squarefull part exceeds L(c, x_bound)."""
    if not family.items:
        return Fraction(0)
    bound = l_scale(c, max(16, family.x_bound))
    over = sum(1 for pr in family.items if split_squarefull(pr.modulus)[0] > bound)
    return Fraction(over, len(family.items))


@dataclass(frozen=True)
class CountsRow:
    kind: str
    x: int
    c: float
    exact: int
    predicted: float

    @property
    def ratio(self) -> float:
        return self.exact / self.predicted


KINDS = ("psi", "psistar", "omega_tail", "f_lower")


def _one_row(kind: str, x: int, c: float) -> CountsRow:
    if kind == "psi":
        exact = psi(x, l_scale(c, x))
        predicted = x / l_scale(1 / (2 * c), x)
    elif kind == "psistar":
        exact = psi_star(x, l_scale(c, x))
        predicted = x / l_scale(1 / (2 * c), x)
    elif kind == "omega_tail":
        exact = omega_tail_count(x, c)
        predicted = x / l_scale(c / 2, x)
    elif kind == "f_lower":
        exact = build_construction(ConstructionParams(x=x, c=c)).size
        predicted = x / l_scale(c + 1 / (2 * c), x)
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return CountsRow(kind=kind, x=x, c=c, exact=exact, predicted=predicted)


def bounds_report(x_values, c_values, kinds=("psi", "psistar", "omega_tail")) -> list[CountsRow]:
    """Exact counts next to their predicted scale, one row per (kind, x, c)."""
    for kind in kinds:
        if kind not in KINDS:
            raise DomainError(f"unknown kind {kind!r}")
    return [
        _one_row(kind, x, c) for kind in kinds for x in x_values for c in c_values
    ]


def rows_to_csv(rows) -> str:
    lines = ["kind,x,c,exact,predicted,ratio"]
    lines.extend(
        f"{r.kind},{r.x},{r.c:.10g},{r.exact},{r.predicted:.10g},{r.ratio:.10g}"
        for r in rows
    )
    return "\n".join(lines) + "\n"
