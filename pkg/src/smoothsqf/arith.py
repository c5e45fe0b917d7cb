"""Exact integer arithmetic shared by every other module.

Sieves (smallest prime factor and Moebius tables, built segment by
segment), factorization, the square-free and smoothness predicates,
modular inverses, CRT and deterministic primality.

Vectorized kernels work in ``int64``; any routine that multiplies two
residues modulo ``m`` inside numpy requires ``m < 2**31`` so the product
stays below ``2**62``.  Scalar code uses Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NeedsLargerSieve, ResourceError

#: ratio of the short intervals ``a ~ A`` meaning ``A <= a <= PSI * A``
PSI = 2.0 ** (1.0 / 15.0)

#: default cap on sieve length (entries); roughly 1.3 GB of tables
MAX_SIEVE_LIMIT = 10**8

#: largest modulus accepted by vectorized modular products
MAX_VECTOR_MODULUS = 2**31

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def check_vector_modulus(m: int) -> None:
    if m >= MAX_VECTOR_MODULUS:
        raise ResourceError(f"modulus {m} too large for int64 kernels")


# ---------------------------------------------------------------------------
# primality and plain prime lists


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> np.ndarray:
    """All primes ``<= n`` as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_between(lo: int, hi: int) -> np.ndarray:
    """Primes in the closed interval ``[lo, hi]``."""
    lo = max(lo, 2)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(hi - lo + 1, dtype=bool)
    for p in primes_up_to(math.isqrt(hi)):
        p = int(p)
        start = max(p * p, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return (np.flatnonzero(flags) + lo).astype(np.int64)


def next_prime_in_progression(residue: int, modulus: int, budget: int) -> int:
    """Least prime ``p == residue (mod modulus)`` with ``p <= budget``."""
    n = residue % modulus
    if n == 0:
        n = modulus
    while n <= budget:
        if is_prime(n):
            return n
        n += modulus
    raise ResourceError(
        f"no prime = {residue} mod {modulus} below budget {budget}"
    )


# ---------------------------------------------------------------------------
# sieve tables


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Moebius, smallest-prime-factor and prime tables for ``0..limit``.

    ``smallest_prime_factor[1] == 1`` and index 0 is unused.
    """

    limit: int
    mobius: np.ndarray
    smallest_prime_factor: np.ndarray
    primes: np.ndarray

    @cached_property
    def largest_prime_factor(self) -> np.ndarray:
        """``P+(k)`` for ``k <= limit`` (``P+(1) = 1``)."""
        spf = self.smallest_prime_factor
        rest = np.arange(self.limit + 1, dtype=np.int64)
        rest[0] = 1
        lpf = np.ones(self.limit + 1, dtype=np.int64)
        active = np.flatnonzero(rest > 1)
        while active.size:
            p = spf[rest[active]].astype(np.int64)
            np.maximum.at(lpf, active, p)
            rest[active] //= p
            active = active[rest[active] > 1]
        return lpf

    @property
    def squarefree(self) -> np.ndarray:
        return self.mobius != 0


def build_sieve(
    limit: int,
    segment_size: int = 1 << 18,
    max_limit: int = MAX_SIEVE_LIMIT,
) -> SieveTables:
    """Build :class:`SieveTables` segment by segment.

    Only the base primes up to ``sqrt(limit)`` and one segment of scratch
    space are held besides the output tables.
    """
    if limit < 2:
        raise DomainError("sieve limit must be at least 2")
    if limit > max_limit:
        raise ResourceError(f"sieve limit {limit} exceeds budget {max_limit}")

    spf_dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=spf_dtype)
    mobius = np.zeros(limit + 1, dtype=np.int8)
    base = [int(p) for p in primes_up_to(math.isqrt(limit))]

    for lo in range(0, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        rest = n.copy()
        mu = np.ones(hi - lo, dtype=np.int8)
        sp = np.zeros(hi - lo, dtype=spf_dtype)
        for p in base:
            if p * p >= hi:
                break
            first = max(p, -(-lo // p) * p)
            if first < hi:
                view = sp[first - lo :: p]
                view[view == 0] = p
                mu[first - lo :: p] *= -1
                rest[first - lo :: p] //= p
            sq = p * p
            first_sq = max(sq, -(-lo // sq) * sq)
            if first_sq < hi:
                mu[first_sq - lo :: sq] = 0
        # one prime factor above sqrt(limit) remains
        mu[rest > 1] *= -1
        unmarked = sp == 0
        sp[unmarked] = n[unmarked]
        spf[lo:hi] = sp
        mobius[lo:hi] = mu

    mobius[0] = 0
    spf[0] = 0
    spf[1] = 1
    primes = np.flatnonzero(spf == np.arange(limit + 1)).astype(np.int64)
    primes = primes[primes >= 2]
    return SieveTables(limit, mobius, spf, primes)


@lru_cache(maxsize=1)
def default_tables() -> SieveTables:
    """Shared tables up to ``2**20`` for scalar predicates."""
    return build_sieve(1 << 20)


def squarefree_mask(lo: int, hi: int) -> np.ndarray:
    """Boolean mask of square-free integers in ``[lo, hi)``; ``lo >= 1``."""
    if lo < 1:
        raise DomainError("squarefree_mask needs lo >= 1")
    mask = np.ones(max(hi - lo, 0), dtype=bool)
    for p in primes_up_to(math.isqrt(max(hi - 1, 1))):
        sq = int(p) * int(p)
        first = -(-lo // sq) * sq
        mask[first - lo :: sq] = False
    return mask


def coprime_mask(lo: int, hi: int, q: int) -> np.ndarray:
    """Mask of integers in ``[lo, hi)`` coprime to ``q``."""
    mask = np.ones(max(hi - lo, 0), dtype=bool)
    if q <= 1:
        return mask
    for p in factorize(q).primes:
        first = -(-lo // p) * p
        mask[first - lo :: p] = False
    return mask


# ---------------------------------------------------------------------------
# factorization and multiplicative functions


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if e < 1 or p <= last or not is_prime(p):
                raise ValueError(f"invalid factor {p}^{e} of {self.value}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0] if self.factors else 1

    @property
    def mobius(self) -> int:
        if not self.is_squarefree:
            return 0
        return -1 if len(self.factors) % 2 else 1

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factorize(n: int, tables: SieveTables | None = None) -> Factorization:
    """Factor ``n >= 1``.

    Inside the table range the smallest-prime-factor chain is walked.
    Beyond it, trial division by ``tables.primes`` runs first and the
    cofactor must then be prime.
    """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if tables is None:
        tables = default_tables()
    counts: dict[int, int] = {}
    if n <= tables.limit:
        spf = tables.smallest_prime_factor
        m = n
        while m > 1:
            p = int(spf[m])
            counts[p] = counts.get(p, 0) + 1
            m //= p
        return Factorization(n, tuple(sorted(counts.items())))

    m = n
    for p in tables.primes.tolist():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    if m > 1:
        largest = int(tables.primes[-1])
        if m > largest * largest and not is_prime(m):
            raise NeedsLargerSieve(
                f"cofactor {m} of {n} is composite beyond the sieve"
            )
        counts[m] = counts.get(m, 0) + 1
    return Factorization(n, tuple(sorted(counts.items())))


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise DomainError("is_squarefree needs n >= 1")
    tables = default_tables()
    if n <= tables.limit:
        return bool(tables.mobius[n] != 0)
    m = n
    for p in tables.primes.tolist():
        if p * p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    else:
        return factorize(n).is_squarefree
    # m has at most two prime factors, all above its cube root
    r = math.isqrt(m)
    return m == 1 or r * r != m


def is_smooth(n: int, y: float) -> bool:
    """True iff every prime divisor of ``n`` is ``<= y``."""
    if n < 1:
        raise DomainError("is_smooth needs n >= 1")
    if n <= y:
        return True
    tables = default_tables()
    if n <= tables.limit:
        return bool(tables.largest_prime_factor[n] <= y)
    m = n
    for p in tables.primes.tolist():
        if p > y:
            return m == 1
        if p * p > m:
            return m <= y
        while m % p == 0:
            m //= p
        if m == 1:
            return True
    return factorize(m).largest_prime <= y


def mobius(n: int) -> int:
    return factorize(n).mobius


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n).primes:
        result -= result // p
    return result


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n).factors)


def radical_primes(n: int) -> tuple[int, ...]:
    return factorize(n).primes if n > 1 else ()


# ---------------------------------------------------------------------------
# modular arithmetic


def mod_inverse(k: int, m: int) -> int:
    """The inverse of ``k`` modulo ``m``, normalised to ``[1, m-1]``."""
    if m < 2:
        raise DomainError("modulus must be at least 2")
    if math.gcd(k, m) != 1:
        raise DomainError(f"{k} is not invertible modulo {m}")
    return pow(k % m, -1, m)


def inverse_table(values: Iterable[int], m: int) -> np.ndarray:
    """Inverses modulo ``m`` of each value, as int64."""
    return np.array([mod_inverse(int(v), m) for v in values], dtype=np.int64)


def crt_solve(constraints: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``x == r_i (mod m_i)`` into one class ``(r, M)``.

    Moduli need not be coprime as long as the residues are consistent.
    """
    r, M = 0, 1
    for residue, modulus in constraints:
        if modulus < 1:
            raise DomainError(f"bad modulus {modulus}")
        g = math.gcd(M, modulus)
        diff = residue - r
        if diff % g:
            raise DomainError(
                f"inconsistent congruences modulo {M} and {modulus}"
            )
        step = modulus // g
        t = (diff // g) * pow(M // g, -1, step) % step if step > 1 else 0
        r = r + M * t
        M = M * step
        r %= M
    return r, M


# ---------------------------------------------------------------------------
# prime windows and intervals


@dataclass(frozen=True)
class PrimeWindow:
    """Primes in ``[L, 2L]`` not dividing ``excluded_modulus``."""

    L: float
    excluded_modulus: int
    members: tuple[int, ...]

    @property
    def K(self) -> int:
        return len(self.members)

    def as_array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)


def prime_window(L: float, p: int, upper: float | None = None) -> PrimeWindow:
    """Build the window ``[L, 2L]`` (or ``[L, upper]``) for modulus ``p``."""
    if L <= 0:
        raise DomainError("window start must be positive")
    hi = 2 * L if upper is None else upper
    members = [
        int(ell)
        for ell in primes_between(math.ceil(L), math.floor(hi))
        if p % int(ell) != 0
    ]
    return PrimeWindow(float(L), p, tuple(members))


def short_interval(A: float, factor: float = PSI) -> tuple[int, int]:
    """Integer endpoints of ``a ~ A``: ``ceil(A) <= a <= floor(factor*A)``.

    Both ends are inclusive; the range may be empty when ``A`` is small.
    """
    return math.ceil(A), math.floor(factor * A)


def mertens_window(X: float, Y: float) -> tuple[float, float]:
    """``sum_{X <= l <= Y} 1/l`` over primes, with ``log(log Y / log X)``."""
    ps = primes_between(math.ceil(X), math.floor(Y))
    observed = float(np.sum(1.0 / ps.astype(np.float64)))
    return observed, math.log(math.log(Y) / math.log(X))
