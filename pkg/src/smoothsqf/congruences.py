"""Exact counts of the congruences built from primes in a window.

Each counter has a fast path (one residue computation per tuple of window
primes, or a residue histogram) and a ``*_naive`` oracle that loops over
every variable.  With ``W`` the primes in ``[L, 2L]`` coprime to ``p``:

========  ===============================================  ==================
counter   congruence                                        ranges
========  ===============================================  ==================
N         l1 l2 u == a                                      u <= h
N sharp   same, u square-free                               u <= h
Q         l1 l2^2 v == a                                    v <= h
T         u^2 v == a                                        u <= U, v <= V
I         sum_{i<=r} u_i^-2 == sum_{i>r} u_i^-2 + lam       U <= u_i <= 2U
R         l1 l2 u d^2 == a                                  F <= d <= 2F
========  ===============================================  ==================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .arith import (
    PSI,
    build_sieve,
    check_vector_modulus,
    coprime_mask,
    euler_phi,
    is_prime,
    primes_between,
    prime_window,
    squarefree_mask,
)
from .errors import DomainError, IdentityViolation
from .report import CountReport

ZETA2 = math.pi**2 / 6


def _check_prime_unit(p: int, a: int) -> None:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        raise DomainError(f"a = {a} must be coprime to p = {p}")
    check_vector_modulus(p)


def _inverses(values: np.ndarray, m: int) -> np.ndarray:
    return np.array([pow(int(v), -1, m) for v in values], dtype=np.int64)


def _window(p: int, L: float) -> tuple[np.ndarray, np.ndarray]:
    members = prime_window(L, p).as_array()
    return members, _inverses(members, p)


def _canonical_u(p: int, a: int, inv: np.ndarray) -> np.ndarray:
    """``a inv(l1) inv(l2) mod p`` over ordered pairs, each in ``[1, p-1]``."""
    left = a % p * inv % p
    return (left[:, None] * inv[None, :] % p).ravel()


def _fast_N(p: int, a: int, inv: np.ndarray, h: float) -> int:
    if h < 1 or inv.size == 0:
        return 0
    return int(np.count_nonzero(_canonical_u(p, a, inv) <= math.floor(h)))


# ---------------------------------------------------------------------------
# N_{a,p}(L, h)


def count_N(p: int, a: int, L: float, h: float) -> CountReport:
    _check_prime_unit(p, a)
    if not 1 <= h <= p:
        raise DomainError("need 1 <= h <= p")
    members, inv = _window(p, L)
    K = members.size
    exact = _fast_N(p, a, inv, h)
    logp = math.log(p)
    return CountReport(
        "N",
        {"p": p, "a": a, "L": L, "h": h},
        exact,
        K * K * h / p,
        L**1.5 * p**0.125,
        extras={
            "K": K,
            "small_h_bound": (L * L * h / p + 1) * (3 * logp) ** 2,
            "small_h_bound_weak": (L * L * h / p + 1) * 10 * logp**3,
        },
    )


def count_N_naive(p: int, a: int, L: float, h: float) -> int:
    members = prime_window(L, p).members
    return sum(
        1
        for l1 in members
        for l2 in members
        for u in range(1, math.floor(h) + 1)
        if (l1 * l2 * u - a) % p == 0
    )


# ---------------------------------------------------------------------------
# N sharp: square-free u


def _sharp_direct(p: int, a: int, inv: np.ndarray, h: float) -> int:
    if h < 1 or inv.size == 0:
        return 0
    u = _canonical_u(p, a, inv)
    sf = squarefree_mask(1, p)  # sf[k - 1] for 1 <= k < p
    return int(np.count_nonzero((u <= math.floor(h)) & sf[u - 1]))


def _sharp_inclusion_exclusion(p: int, a: int, inv: np.ndarray, h: float) -> int:
    dmax = math.isqrt(math.floor(h)) if h >= 1 else 0
    if dmax == 0:
        return 0
    mu = build_sieve(max(dmax, 2)).mobius
    total = 0
    for d in range(1, dmax + 1):
        if mu[d] == 0:
            continue
        a_d = a * pow(d * d, -1, p) % p
        total += int(mu[d]) * _fast_N(p, a_d, inv, math.floor(h) // (d * d))
    return total


def count_N_squarefree(p: int, a: int, L: float, h: float, eps: float = 0.1) -> CountReport:
    """Solutions with square-free ``u``, by direct filter and by Moebius sum over ``d^2 | u``.

    The two routes must agree; a mismatch raises :class:`IdentityViolation`.
    ``eps`` only sets the cut ``D = p^(eps/4)`` in the reported error bound.
    """
    _check_prime_unit(p, a)
    if not 1 <= h <= p:
        raise DomainError("need 1 <= h <= p")
    members, inv = _window(p, L)
    K = members.size
    direct = _sharp_direct(p, a, inv, h)
    via_mu = _sharp_inclusion_exclusion(p, a, inv, h)
    if direct != via_mu:
        raise IdentityViolation(
            f"N sharp mismatch at p={p} a={a} L={L} h={h}: {direct} != {via_mu}"
        )
    D = p ** (eps / 4)
    bound = L * L * h / (D * p) + D * L**1.5 * p**0.125 + math.sqrt(h)
    return CountReport(
        "N_sharp",
        {"p": p, "a": a, "L": L, "h": h},
        direct,
        K * K * h / (ZETA2 * p),
        bound,
        extras={"K": K, "inclusion_exclusion": via_mu, "unrestricted": _fast_N(p, a, inv, h)},
    )


def count_N_squarefree_naive(p: int, a: int, L: float, h: float) -> int:
    members = prime_window(L, p).members
    sf = squarefree_mask(1, max(math.floor(h), 1) + 1)
    return sum(
        1
        for l1 in members
        for l2 in members
        for u in range(1, math.floor(h) + 1)
        if sf[u - 1] and (l1 * l2 * u - a) % p == 0
    )


# ---------------------------------------------------------------------------
# Q_{a,p}(L, h)


def count_Q(p: int, a: int, L: float, h: float) -> CountReport:
    _check_prime_unit(p, a)
    if not 1 <= h <= p:
        raise DomainError("need 1 <= h <= p")
    members, inv = _window(p, L)
    K = members.size
    left = a % p * inv % p
    inv_sq = inv * inv % p
    v = (left[:, None] * inv_sq[None, :] % p).ravel()
    exact = int(np.count_nonzero(v <= math.floor(h)))
    return CountReport(
        "Q",
        {"p": p, "a": a, "L": L, "h": h},
        exact,
        K * K * h / p,
        (L * h / p + 1) * L,
        flags=() if 2 * L * h <= p else ("bound precondition 2Lh <= p fails",),
        extras={"K": K},
    )


def count_Q_naive(p: int, a: int, L: float, h: float) -> int:
    members = prime_window(L, p).members
    return sum(
        1
        for l1 in members
        for l2 in members
        for v in range(1, math.floor(h) + 1)
        if (l1 * l2 * l2 * v - a) % p == 0
    )


# ---------------------------------------------------------------------------
# T_{a,p}(U, V)


def count_T(p: int, a: int, U: float, V: float) -> CountReport:
    """Solutions of ``u^2 v == a`` with ``u <= U``, ``v <= V`` (any sizes)."""
    _check_prime_unit(p, a)
    if U < 1 or V < 1:
        raise DomainError("need U, V >= 1")
    Ui, Vi = math.floor(U), math.floor(V)
    u = np.arange(1, Ui + 1, dtype=np.int64)
    u = u[u % p != 0]
    exact = 0
    if u.size:
        c = a % p * _inverses(u * u % p, p) % p
        hits = c <= Vi
        exact = int(np.sum((Vi - c[hits]) // p + 1))
    return CountReport(
        "T",
        {"p": p, "a": a, "U": U, "V": V},
        exact,
        U * V / p,
        V**0.25 * (U * p**-0.25 + U**0.5),
        extras={"mixed_power_bound": min(U ** (2 / 3) * V**0.25, U**0.25 * V ** (2 / 3))},
    )


def count_T_naive(p: int, a: int, U: float, V: float) -> int:
    return sum(
        1
        for u in range(1, math.floor(U) + 1)
        for v in range(1, math.floor(V) + 1)
        if (u * u * v - a) % p == 0
    )


# ---------------------------------------------------------------------------
# I_{r,p}(U; lambda)


def _interval(U: float) -> np.ndarray:
    return np.arange(math.ceil(U), math.floor(2 * U) + 1, dtype=np.int64)


def count_I(p: int, r: int, U: float, lam: int = 0) -> CountReport:
    """Meet in the middle: histogram the ``r``-fold sums of inverse squares once,
    then pair each left sum ``s`` with right sums ``s - lam``."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if r < 1:
        raise DomainError("r must be at least 1")
    if 2 * U >= p:
        raise DomainError("need 2U < p so every u is a unit")
    check_vector_modulus(p)
    u = _interval(U)
    w = _inverses(u * u % p, p)
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(r):
        sums = ((sums[:, None] + w[None, :]) % p).ravel()
    hist = np.bincount(sums, minlength=p).astype(np.int64)
    exact = int(np.dot(hist, np.roll(hist, lam % p)))
    n = u.size
    return CountReport(
        "I",
        {"p": p, "r": r, "U": U, "lambda": lam % p},
        exact,
        n ** (2 * r) / p,
        U ** (2 * r) / p + U**r,
        extras={"diagonal": math.factorial(r) * n**r if n >= r else 0},
    )


def count_I_naive(p: int, r: int, U: float, lam: int = 0) -> int:
    u = [int(x) for x in _interval(U)]
    inv_sq = {x: pow(x * x, -1, p) for x in u}
    count = 0
    for tup in product(u, repeat=2 * r):
        left = sum(inv_sq[x] for x in tup[:r])
        right = sum(inv_sq[x] for x in tup[r:])
        if (left - right - lam) % p == 0:
            count += 1
    return count


# ---------------------------------------------------------------------------
# R_{a,p}(F, L, h)


def count_R(p: int, a: int, F: float, L: float, h: float) -> CountReport:
    _check_prime_unit(p, a)
    if not 1 <= h <= p:
        raise DomainError("need 1 <= h <= p")
    members, inv = _window(p, L)
    K = members.size
    ds = [d for d in range(math.ceil(F), math.floor(2 * F) + 1) if d % p]
    exact = sum(_fast_N(p, a * pow(d * d, -1, p) % p, inv, h) for d in ds)
    x = L * L * h
    return CountReport(
        "R",
        {"p": p, "a": a, "F": F, "L": L, "h": h},
        exact,
        len(ds) * K * K * h / p,
        max(F * x**0.25 * p**-0.25, F**0.5 * x**0.25),
        extras={"K": K, "d_count": len(ds)},
    )


def count_R_naive(p: int, a: int, F: float, L: float, h: float) -> int:
    members = prime_window(L, p).members
    return sum(
        1
        for d in range(math.ceil(F), math.floor(2 * F) + 1)
        for l1 in members
        for l2 in members
        for u in range(1, math.floor(h) + 1)
        if (l1 * l2 * u * d * d - a) % p == 0
    )


# ---------------------------------------------------------------------------
# products k r with k = m n from a smooth square-free multiset


@dataclass(frozen=True)
class PrimeBlock:
    """``count`` distinct primes from ``[center, window_factor * center]``."""

    count: int
    center: float


def default_r_spec(q: int, eps: float = 0.1) -> list[PrimeBlock]:
    """Twelve primes of size ``q^(1/8)`` and one of size ``q^(1/nu)``, ``nu = ceil(1/eps)``."""
    nu = math.ceil(1 / eps)
    return [PrimeBlock(12, q ** (1 / 8)), PrimeBlock(1, q ** (1 / nu))]


def _k_values(q: int, N: float, zeta: float, window_factor: float) -> np.ndarray:
    """``m n`` over pairs from the window with ``mn`` square-free, coprime to ``q``,
    and every prime factor below ``N^zeta`` (repeated per pair)."""
    lo, hi = math.ceil(N), math.floor(window_factor * N)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    tables = build_sieve(max(hi, 2))
    ms = np.arange(lo, hi + 1, dtype=np.int64)
    ok = (tables.mobius[ms] != 0) & (tables.largest_prime_factor[ms] < N**zeta)
    ok &= coprime_mask(lo, hi + 1, q)
    ms = ms[ok]
    pairs = np.gcd.outer(ms, ms) == 1
    return (ms[:, None] * ms[None, :])[pairs]


def _r_values(q: int, r_spec: Sequence[PrimeBlock], window_factor: float) -> np.ndarray | None:
    """Distinct integers ``r`` built from the blocks, or None if a block is short."""
    choices = []
    for block in r_spec:
        ps = [
            int(x)
            for x in primes_between(math.ceil(block.center), math.floor(window_factor * block.center))
            if q % int(x)
        ]
        if len(ps) < block.count:
            return None
        choices.append(list(combinations(ps, block.count)))
    rs = set()
    for combo in product(*choices):
        flat = [x for group in combo for x in group]
        if len(set(flat)) == len(flat):
            rs.add(math.prod(flat))
    return np.array(sorted(rs), dtype=object if rs and max(rs) >= 2**62 else np.int64)


def structured_product_counts(
    q: int,
    N: float,
    zeta: float,
    window_factor: float = PSI,
    r_spec: Sequence[PrimeBlock] | None = None,
    eps: float = 0.1,
) -> tuple[np.ndarray, int, int, bool]:
    """Counts of ``k r == a (mod q)`` for every residue ``a``.

    Returns ``(counts, n_k, n_r, degenerate)`` where ``n_k`` and ``n_r`` are the
    sizes of the (multi)sets of ``k`` and ``r`` values.
    """
    if r_spec is None:
        r_spec = default_r_spec(q, eps)
    ks = _k_values(q, N, zeta, window_factor)
    rs = _r_values(q, r_spec, window_factor)
    if rs is None or ks.size == 0 or rs.size == 0:
        return np.zeros(q, dtype=np.int64), int(ks.size), 0 if rs is None else int(rs.size), True
    hk = np.bincount(ks % q, minlength=q)
    hr = np.bincount(np.array([int(x) % q for x in rs], dtype=np.int64), minlength=q)
    counts = np.zeros(q, dtype=np.int64)
    for x in np.flatnonzero(hk):
        # r == a / x: shift the r-histogram by multiplication with x
        targets = np.flatnonzero(hr)
        np.add.at(counts, targets * int(x) % q, hk[x] * hr[targets])
    return counts, int(ks.size), int(rs.size), False


def count_structured_products(
    q: int,
    a: int,
    N: float,
    zeta: float,
    window_factor: float = PSI,
    r_spec: Sequence[PrimeBlock] | None = None,
    eps: float = 0.1,
) -> CountReport:
    """Number of ``(m, n, r)`` with ``m n r == a (mod q)``.

    ``m, n`` range over ``[N, window_factor N]`` with ``mn`` square-free and all
    prime factors ``< N^zeta``; ``r`` is a product of distinct primes chosen per
    ``r_spec`` (each block widened by ``window_factor``), coprime to ``q``.
    """
    if q < 3:
        raise DomainError("need q >= 3")
    if math.gcd(a, q) != 1:
        raise DomainError("a must be a reduced residue")
    if r_spec is None:
        r_spec = default_r_spec(q, eps)
    counts, n_k, n_r, degenerate = structured_product_counts(q, N, zeta, window_factor, r_spec, eps)
    phi = euler_phi(q)
    R = math.prod(b.center**b.count for b in r_spec)
    x = N * N * R
    return CountReport(
        "structured",
        {"q": q, "a": a, "N": N, "zeta": zeta, "window_factor": window_factor,
         "r_spec": [(b.count, b.center) for b in r_spec]},
        int(counts[a % q]),
        n_k * n_r / phi,
        x ** (1 - eps**4) / q,
        flags=("degenerate window",) if degenerate else (),
        extras={"k_count": n_k, "r_count": n_r},
    )


def count_structured_products_naive(
    q: int,
    a: int,
    N: float,
    zeta: float,
    window_factor: float,
    r_spec: Sequence[PrimeBlock],
) -> int:
    from .arith import factorize

    lo, hi = math.ceil(N), math.floor(window_factor * N)
    rs = _r_values(q, r_spec, window_factor)
    if rs is None:
        return 0
    count = 0
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            f = factorize(m * n)
            if not f.is_squarefree or f.largest_prime >= N**zeta or math.gcd(m * n, q) != 1:
                continue
            for r in rs:
                if (m * n * int(r) - a) % q == 0:
                    count += 1
    return count
