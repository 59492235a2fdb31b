"""Deterministic integer utilities: primes, factorization, CRT, smooth counts.

Everything here is pure and exact.  Results stay within 64-bit range;
operations that could silently wrap raise CapacityError instead.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapacityError, DomainError

WORD_MAX = 2**63 - 1
SIEVE_LIMIT = 50_000_000
FACTOR_LIMIT = 10**12
ENUM_LIMIT = 5_000_000


@lru_cache(maxsize=16)
def _prime_tuple(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit, ascending."""
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds {SIEVE_LIMIT}")
    return list(_prime_tuple(limit))


def _primes_for(bound: int) -> tuple[int, ...]:
    # Round the sieve size up a power ladder so the cache stays small.
    limit = 1024
    while limit < bound:
        limit *= 4
    return _prime_tuple(limit)


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition with parts ascending by the value p**e."""

    n: int
    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        product = 1
        values = []
        seen = set()
        for p, e in self.parts:
            if p < 2 or e < 1:
                raise DomainError(f"bad factorization part ({p}, {e})")
            if p in seen:
                raise DomainError(f"repeated prime {p} in factorization")
            seen.add(p)
            product *= p**e
            values.append(p**e)
        if product != self.n:
            raise DomainError(f"parts {self.parts} do not multiply to {self.n}")
        if values != sorted(values):
            raise DomainError("parts must ascend by prime-power value")

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.parts]

    def primes(self) -> list[int]:
        return sorted(p for p, _ in self.parts)


def factorize(n: int) -> Factorization:
    """Full factorization by trial division; parts sorted by p**e ascending."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if n > FACTOR_LIMIT:
        raise CapacityError(f"{n} exceeds trial-division limit {FACTOR_LIMIT}")
    m = n
    parts = []
    for p in _primes_for(math.isqrt(n)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            parts.append((p, e))
    if m > 1:
        parts.append((m, 1))
    parts.sort(key=lambda pe: pe[0] ** pe[1])
    return Factorization(n, tuple(parts))


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    if n < 1:
        raise DomainError(f"omega undefined for {n}")
    count = 0
    m = n
    for p in _primes_for(math.isqrt(n)):
        if p * p > m:
            break
        if m % p == 0:
            count += 1
            while m % p == 0:
                m //= p
    return count + (1 if m > 1 else 0)


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int] | None:
    """Merge two residue constraints, or None when they are incompatible.

    Returns the unique (a, lcm(m1, m2)) with a == a1 (mod m1) and
    a == a2 (mod m2); such a exists iff a1 == a2 (mod gcd(m1, m2)).
    """
    if m1 < 1 or m2 < 1:
        raise DomainError(f"moduli must be positive, got {m1}, {m2}")
    a1 %= m1
    a2 %= m2
    g = math.gcd(m1, m2)
    if (a2 - a1) % g:
        return None
    lcm = m1 // g * m2
    if lcm > WORD_MAX:
        raise CapacityError(f"lcm({m1}, {m2}) exceeds 64-bit range")
    m2g = m2 // g
    t = ((a2 - a1) // g * pow(m1 // g, -1, m2g)) % m2g
    return (a1 + m1 * t) % lcm, lcm


@dataclass(frozen=True)
class LScale:
    """Sub-exponential scale exp(c * sqrt(log x * log log x))."""

    c: float
    x: float

    def __post_init__(self):
        if self.c <= 0:
            raise DomainError(f"scale coefficient must be positive, got {self.c}")
        if self.x < 16:
            raise DomainError(f"scale needs x >= 16, got {self.x}")

    @property
    def value(self) -> float:
        lx = math.log(self.x)
        return math.exp(self.c * math.sqrt(lx * math.log(lx)))


def l_scale(c: float, x: float) -> float:
    """exp(c * sqrt(log x * log log x)) for x >= 16, c > 0."""
    return LScale(c, x).value


def _bound_primes(y: float) -> tuple[int, ...]:
    top = int(math.floor(y))
    if top < 2:
        raise DomainError(f"smoothness bound must be >= 2, got {y}")
    if top > SIEVE_LIMIT:
        raise CapacityError(f"smoothness bound {y} exceeds {SIEVE_LIMIT}")
    return _prime_tuple(top)


def _count_below(x: int, primes: tuple[int, ...], i: int, y: float, power_cap: bool) -> int:
    # Counts products of primes[i:] that are <= x, the empty product included.
    total = 1
    for j in range(i, len(primes)):
        p = primes[j]
        if p > x:
            break
        pa = p
        while pa <= x and (not power_cap or pa <= y):
            total += _count_below(x // pa, primes, j + 1, y, power_cap)
            pa *= p
    return total


def psi(x: int, y: float) -> int:
    """Count of n <= x whose prime factors are all <= y."""
    if x < 1:
        raise DomainError(f"count needs x >= 1, got {x}")
    return _count_below(x, _bound_primes(y), 0, y, power_cap=False)


def psi_star(x: int, y: float) -> int:
    """Count of n <= x whose prime-power factors p**a (a maximal) are all <= y."""
    if x < 1:
        raise DomainError(f"count needs x >= 1, got {x}")
    return _count_below(x, _bound_primes(y), 0, y, power_cap=True)


def enumerate_smooth(x: int, y: float, mode: str = "smooth") -> list[int]:
    """Ascending list of n <= x that are y-smooth or y-powersmooth."""
    if x < 1:
        raise DomainError(f"enumeration needs x >= 1, got {x}")
    if mode not in ("smooth", "powersmooth"):
        raise DomainError(f"unknown mode {mode!r}")
    power_cap = mode == "powersmooth"
    primes = _bound_primes(y)
    out = []

    def rec(i, m):
        out.append(m)
        if len(out) > ENUM_LIMIT:
            raise CapacityError(f"more than {ENUM_LIMIT} values to enumerate")
        for j in range(i, len(primes)):
            p = primes[j]
            if m * p > x:
                break
            pa = p
            while m * pa <= x and (not power_cap or pa <= y):
                rec(j + 1, m * pa)
                pa *= p

    rec(0, 1)
    return sorted(out)
