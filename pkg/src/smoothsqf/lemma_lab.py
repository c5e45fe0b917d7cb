"""Exact counts of square-free integers in short intervals against their main terms.

Intervals are ``m ~ M``, i.e. ``ceil(M) <= m <= floor(psi M)`` with
``psi = 2^(1/15)``.  Each census has a slow ``*_naive`` twin that factors
every integer on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import (
    PSI,
    build_sieve,
    coprime_mask,
    euler_phi,
    factorize,
    is_squarefree,
    primes_between,
    primes_up_to,
    radical_primes,
    short_interval,
    squarefree_mask,
    tau,
)
from .errors import DomainError
from .report import CountReport

XI = PSI - 1
RHO = math.exp(-0.5)
ZETA2 = math.pi**2 / 6


def product_constant(cutoff: int = 10**6) -> tuple[float, float]:
    """``prod_l (1 - 1/(l+1)^2)`` over primes ``l <= cutoff``, with its tail bound.

    The omitted factors satisfy ``sum_{l > P} 1/(l+1)^2 < 1/P``, so the true
    value lies in ``[value (1 - 1/P), value]``.
    """
    ell = primes_up_to(cutoff).astype(np.float64)
    value = float(np.exp(np.sum(np.log1p(-1.0 / (ell + 1) ** 2))))
    return value, 1.0 / cutoff


@dataclass(frozen=True)
class Constants:
    psi: float
    xi: float
    rho: float
    zeta2: float
    C: float
    C_cutoff: int
    C_tail_bound: float


@lru_cache(maxsize=1)
def constants(cutoff: int = 10**6) -> Constants:
    C, tail = product_constant(cutoff)
    return Constants(PSI, XI, RHO, ZETA2, C, cutoff, tail)


def _local_factor(primes, weight: int) -> float:
    return math.prod(1 / (1 + weight / ell) for ell in primes)


def _rad(n: int) -> tuple[int, ...]:
    return radical_primes(n) if n > 1 else ()


# ---------------------------------------------------------------------------
# square-free integers in a short interval, coprime to q


def sqfap_count(M: float, q: int = 1) -> CountReport:
    """Square-free ``m ~ M`` coprime to ``q``."""
    if M < 2 or q < 1:
        raise DomainError("need M >= 2 and q >= 1")
    lo, hi = short_interval(M)
    exact = 0
    if hi >= lo:
        exact = int(np.count_nonzero(squarefree_mask(lo, hi + 1) & coprime_mask(lo, hi + 1, q)))
    main = XI / ZETA2 * _local_factor(_rad(q), 1) * M
    return CountReport(
        "sqfap",
        {"M": M, "q": q},
        exact,
        main,
        math.sqrt(M) * tau(q),
        flags=() if hi >= lo else ("degenerate window",),
    )


def sqfap_count_naive(M: float, q: int = 1) -> int:
    lo, hi = short_interval(M)
    return sum(1 for m in range(lo, hi + 1) if math.gcd(m, q) == 1 and is_squarefree(m))


def ap_upper_check(M: float, q: int) -> CountReport:
    """Integers ``m ~ M`` coprime to ``q``; ``extras['ratio']`` estimates the implied constant."""
    if not (q >= 2 and math.log(q) >= 2 and M > math.log(q)):
        raise DomainError("need M > log q >= 2")
    lo, hi = short_interval(M)
    exact = int(np.count_nonzero(coprime_mask(lo, hi + 1, q))) if hi >= lo else 0
    density = euler_phi(q) / q
    ratio = exact / (density * M)
    flags = []
    if hi < lo:
        flags.append("degenerate window")
    if exact > 10 * density * M:
        flags.append("exceeds 10 phi(q)/q M")
    return CountReport(
        "ap",
        {"M": M, "q": q},
        exact,
        XI * density * M,
        density * M,
        flags=tuple(flags),
        extras={"ratio": ratio, "window_length": max(hi - lo + 1, 0)},
    )


def ap_upper_check_naive(M: float, q: int) -> int:
    lo, hi = short_interval(M)
    return sum(1 for m in range(lo, hi + 1) if math.gcd(m, q) == 1)


# ---------------------------------------------------------------------------
# one large prime times a square-free cofactor


def smooth_lemma_census(N: float, zeta: float, d: int = 1, q: int = 1) -> CountReport:
    """``sum_{N^zeta <= l <= N} sum_{m ~ N/(d l)} mu^2(m)`` with ``l`` prime and
    ``l, m`` coprime to ``d q``."""
    if not 0 < zeta < 1:
        raise DomainError("need 0 < zeta < 1")
    if d < 1 or q < 1 or math.gcd(d, q) != 1:
        raise DomainError("need d, q >= 1 coprime")
    if N < q**0.25:
        raise DomainError("need N >= q^(1/4)")
    dq = d * q
    top = math.floor(PSI * N / d) + 1
    good = squarefree_mask(1, top + 1) & coprime_mask(1, top + 1, dq)
    prefix = np.concatenate(([0], np.cumsum(good)))  # prefix[k] = #good in [1, k]
    ell = primes_between(math.ceil(N**zeta), math.floor(N)).astype(np.int64)
    ell = ell[np.gcd(ell, dq) == 1]
    x = N / (d * ell.astype(np.float64))
    lo = np.ceil(x).astype(np.int64)
    hi = np.minimum(np.floor(PSI * x).astype(np.int64), top)
    counts = np.where(hi >= lo, prefix[hi] - prefix[np.maximum(lo - 1, 0)], 0)
    exact = int(counts.sum())
    primes_dq = sorted(set(_rad(d)) | set(_rad(q)))
    main = XI * math.log(1 / zeta) / ZETA2 * _local_factor(primes_dq, 1) * N / d
    return CountReport(
        "smooth",
        {"N": N, "zeta": zeta, "d": d, "q": q},
        exact,
        main,
        float("nan"),
        extras={"primes": int(ell.size)},
    )


def smooth_lemma_census_naive(N: float, zeta: float, d: int = 1, q: int = 1) -> int:
    dq = d * q
    total = 0
    for ell in primes_between(math.ceil(N**zeta), math.floor(N)).tolist():
        if dq % ell == 0:
            continue
        lo, hi = short_interval(N / (d * ell))
        total += sum(1 for m in range(lo, hi + 1) if math.gcd(m, dq) == 1 and is_squarefree(m))
    return total


# ---------------------------------------------------------------------------
# pairs m, n ~ N with mn square-free


def sums_lemma_census(N: float, zeta: float = 1.0, q: int = 1) -> CountReport:
    """Pairs ``m, n ~ N`` with ``mn`` square-free and coprime to ``q``, where
    ``m`` has every prime factor below ``N^zeta`` (no restriction when ``zeta = 1``)."""
    if not 0.5 < zeta <= 1:
        raise DomainError("need 1/2 < zeta <= 1")
    if N < q**0.25 or q < 1:
        raise DomainError("need q >= 1 and N >= q^(1/4)")
    lo, hi = short_interval(N)
    exact = 0
    if hi >= lo:
        tables = build_sieve(max(hi, 2))
        n = np.arange(lo, hi + 1, dtype=np.int64)
        base = (tables.mobius[lo : hi + 1] != 0) & coprime_mask(lo, hi + 1, q)
        ns = n[base]
        ms = ns
        if zeta < 1:
            ms = ns[tables.largest_prime_factor[ns] < N**zeta]
        exact = int(np.count_nonzero(np.gcd.outer(ms, ns) == 1))
    C = constants().C
    main = C * (XI * N / ZETA2) ** 2 * _local_factor(_rad(q), 2) * (1 + math.log(zeta))
    return CountReport(
        "sums",
        {"N": N, "zeta": zeta, "q": q},
        exact,
        main,
        float("nan"),
        flags=() if hi >= lo else ("degenerate window",),
    )


def sums_lemma_census_naive(N: float, zeta: float = 1.0, q: int = 1) -> int:
    lo, hi = short_interval(N)
    total = 0
    for m in range(lo, hi + 1):
        if zeta < 1 and factorize(m).largest_prime >= N**zeta:
            continue
        for n in range(lo, hi + 1):
            if math.gcd(m * n, q) == 1 and is_squarefree(m * n):
                total += 1
    return total
