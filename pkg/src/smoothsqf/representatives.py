"""Smallest smooth square-free representatives of residue classes.

``M(p)`` is the least ``M`` such that every class mod ``p`` holds a
``p``-smooth square-free positive integer ``<= M`` (infinite if some class
holds none).  ``M*_alpha(q)`` is the analogue over reduced classes mod ``q``
with ``q^alpha``-smooth representatives.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .arith import (
    Factorization,
    build_sieve,
    check_vector_modulus,
    crt_solve,
    factorize,
    is_prime,
    is_squarefree,
    next_prime_in_progression,
    primes_between,
    primes_up_to,
    prime_window,
    squarefree_mask,
)
from .errors import DomainError, IdentityViolation

#: widest segment scanned in one numpy pass by :func:`compute_M`
MAX_SEGMENT = 1 << 22


class Status(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class RepresentativeRecord:
    modulus: int
    residue: int
    found: bool
    s: int | None = None
    factorization: Factorization | None = None
    smoothness_bound: float = 0.0

    def __post_init__(self):
        if self.found != (self.s is not None):
            raise ValueError("found must agree with s being present")

    @property
    def exponent(self) -> float | None:
        """``log s / log q``; ``s = 1`` gives 0."""
        if self.s is None:
            return None
        return math.log(self.s) / math.log(self.modulus)

    def verify(self) -> bool:
        """Residue, square-free and smoothness predicates on ``s``."""
        if not self.found:
            return False
        f = self.factorization or factorize(self.s)
        return (
            self.s % self.modulus == self.residue % self.modulus
            and f.is_squarefree
            and f.largest_prime <= self.smoothness_bound
        )


def _record(q: int, a: int, s: int | None, y: float) -> RepresentativeRecord:
    if s is None:
        return RepresentativeRecord(q, a, False, smoothness_bound=y)
    return RepresentativeRecord(q, a, True, int(s), factorize(int(s)), y)


@dataclass
class RepresentativeTable:
    """Per-class minima and the resulting maximum."""

    modulus: int
    smoothness_bound: float
    status: Status
    records: list[RepresentativeRecord]
    budget: int
    reduced_value: int | None = None
    uncovered: list[int] = field(default_factory=list)

    @property
    def value(self) -> int | float | None:
        """The maximum; ``math.inf`` when infinite, None when undecided."""
        if self.status is Status.INFINITE:
            return math.inf
        if self.status is Status.UNDECIDED:
            return None
        return max(r.s for r in self.records if r.found)

    @property
    def exponent(self) -> float | None:
        v = self.value
        if v is None or v == math.inf:
            return None
        return math.log(v) / math.log(self.modulus)


# ---------------------------------------------------------------------------
# M(p)


def reachable_unit_classes(p: int) -> np.ndarray:
    """Boolean mask over ``0..p-1`` of the unit classes hit by a product of
    distinct primes below ``p``: exact, by subset-product reachability."""
    check_vector_modulus(p)
    reach = np.zeros(p, dtype=bool)
    reach[1] = True
    x = np.arange(p, dtype=np.int64)
    for ell in primes_up_to(p - 1).tolist():
        shifted = np.zeros(p, dtype=bool)
        shifted[x[reach] * ell % p] = True
        reach |= shifted
    return reach


def _smooth_squarefree_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """Members of ``[lo, hi)`` that are square-free and composed of ``primes``."""
    n = np.arange(lo, hi, dtype=np.int64)
    rest = n.copy()
    for ell in primes.tolist():
        start = (-lo) % ell
        rest[start::ell] //= ell
    keep = (rest == 1) & squarefree_mask(lo, hi)
    return n[keep]


def compute_M(p: int, budget: int | None = None) -> RepresentativeTable:
    """``M(p)`` with a minimal representative for every class, class 0 included.

    Finiteness is decided exactly by :func:`reachable_unit_classes`.  Minima
    are found by scanning ``[1, budget]`` in doubling segments (default budget
    ``p^3``) until every reachable class is covered.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    budget = p**3 if budget is None else int(budget)
    primes = primes_up_to(p)
    target = reachable_unit_classes(p) if p > 2 else np.array([False, True])
    target[0] = True  # p itself
    best = np.zeros(p, dtype=np.int64)  # 0 = not yet seen
    lo, width = 1, max(4 * p, 1024)
    while lo <= budget and not np.all(best[target] > 0):
        hi = min(lo + width, budget + 1)
        vals = _smooth_squarefree_segment(lo, hi, primes)
        res = vals % p
        fresh = best[res] == 0
        # vals ascending: first occurrence per residue is the minimum
        r_u, idx = np.unique(res[fresh], return_index=True)
        best[r_u] = vals[fresh][idx]
        lo = hi
        width = min(2 * width, MAX_SEGMENT)
    records = [_record(p, a, int(best[a]) if best[a] else None, p) for a in range(p)]
    uncovered = [a for a in range(p) if not best[a]]
    if not target.all():
        status = Status.INFINITE
    elif uncovered:
        status = Status.UNDECIDED
    else:
        status = Status.FINITE
    reduced = [int(best[a]) for a in range(1, p) if best[a]]
    return RepresentativeTable(
        p, p, status, records, budget,
        reduced_value=max(reduced) if len(reduced) == p - 1 else None,
        uncovered=uncovered,
    )


# ---------------------------------------------------------------------------
# M*_alpha(q)


def smoothness_limit(q: int, alpha: float) -> int:
    """``floor(q^alpha)`` with the float rounding repaired by integer checks."""
    y = math.floor(q**alpha)
    if alpha == 1:
        return q
    # q^alpha sits within float error of an integer; bump by one if warranted
    if (y + 1) <= q**alpha * (1 + 1e-12) and math.log(y + 1) <= alpha * math.log(q) + 1e-12:
        y += 1
    return y


def compute_M_alpha_star(q: int, alpha: float, budget: int) -> RepresentativeTable:
    """Least ``q^alpha``-smooth square-free ``s <= budget`` in each reduced class."""
    if q < 3:
        raise DomainError("need q >= 3")
    if not 0 < alpha <= 1:
        raise DomainError("need 0 < alpha <= 1")
    if budget < q:
        raise DomainError("need budget >= q")
    y = smoothness_limit(q, alpha)
    tables = build_sieve(max(budget, 2))  # raises ResourceError past the sieve cap
    n = np.arange(1, budget + 1, dtype=np.int64)
    ok = (tables.mobius[1:] != 0) & (tables.largest_prime_factor[1:] <= y) & (np.gcd(n, q) == 1)
    vals = n[ok]
    res, idx = np.unique(vals % q, return_index=True)
    best = dict(zip(res.tolist(), vals[idx].tolist()))
    reduced = [a for a in range(1, q) if math.gcd(a, q) == 1]
    records = [_record(q, a, best.get(a), y) for a in reduced]
    uncovered = [a for a in reduced if a not in best]
    status = Status.UNDECIDED if uncovered else Status.FINITE
    return RepresentativeTable(
        q, y, status, records, budget,
        reduced_value=None if uncovered else max(best[a] for a in reduced),
        uncovered=uncovered,
    )


def compute_M_alpha_star_naive(q: int, alpha: float, budget: int) -> dict[int, int]:
    """Per-class minima by a plain scan with per-integer factorization."""
    y = smoothness_limit(q, alpha)
    best: dict[int, int] = {}
    for s in range(1, budget + 1):
        if math.gcd(s, q) != 1 or s % q in best:
            continue
        f = factorize(s)
        if f.is_squarefree and f.largest_prime <= y:
            best[s % q] = s
    return best


# ---------------------------------------------------------------------------
# products l1 l2 u over a prime window


@dataclass(frozen=True)
class ConstructionRecord:
    record: RepresentativeRecord
    L: float
    h: int
    K: int
    l1: int | None = None
    l2: int | None = None
    u: int | None = None

    @property
    def size_budget(self) -> float:
        """``4 L^2 h``, the largest ``l1 l2 u`` the construction can produce."""
        return 4 * self.L**2 * self.h


def construct_thm13(p: int, a: int, eps: float = 0.1) -> ConstructionRecord:
    """Least ``s = l1 l2 u == a (mod p)`` with ``l1 != l2`` primes in ``[L, 2L]``,
    ``L = p^(1/4 + eps)``, and ``u <= p - 1`` square-free and prime to both."""
    if not is_prime(p) or p < 11:
        raise DomainError("need a prime p >= 11")
    if a % p == 0:
        raise DomainError("a must be coprime to p")
    if not 0 < eps <= 0.25:
        raise DomainError("need 0 < eps <= 1/4")
    check_vector_modulus(p)
    L = p ** (0.25 + eps)
    h = p - 1
    window = prime_window(L, p)
    ell = window.as_array()
    K = ell.size
    fail = ConstructionRecord(_record(p, a, None, p - 1), L, h, K)
    if K < 2:
        return fail
    inv = np.array([pow(int(x), -1, p) for x in ell], dtype=np.int64)
    i, j = np.triu_indices(K, k=1)
    u = a % p * inv[i] % p * inv[j] % p
    ok = squarefree_mask(1, p)[u - 1] & (u % ell[i] != 0) & (u % ell[j] != 0)
    if not ok.any():
        return fail
    s = ell[i] * ell[j] * u
    s = np.where(ok, s, np.iinfo(np.int64).max)
    k = int(np.argmin(s))
    rec = _record(p, a, int(s[k]), p - 1)
    return ConstructionRecord(rec, L, h, K, int(ell[i[k]]), int(ell[j[k]]), int(u[k]))


def construct_thm13_naive(p: int, a: int, eps: float = 0.1) -> int | None:
    L = p ** (0.25 + eps)
    ell = prime_window(L, p).members
    best = None
    for l1, l2 in combinations(ell, 2):
        for u in range(1, p):
            if (l1 * l2 * u - a) % p == 0 and is_squarefree(u) and u % l1 and u % l2:
                s = l1 * l2 * u
                best = s if best is None else min(best, s)
    return best


def thm13_sweep(p: int, eps: float = 0.1) -> list[ConstructionRecord]:
    """The construction for every reduced class mod ``p``."""
    return [construct_thm13(p, a, eps) for a in range(1, p)]


# ---------------------------------------------------------------------------
# lower-bound family


@dataclass(frozen=True)
class LowerBoundResult:
    K: int
    modulus: int
    residue: int
    p: int
    s_min: int

    @property
    def ratio(self) -> float:
        return self.s_min / (self.K * self.p)


def booker_lower_bound(K: int, prime_budget: int | None = None) -> LowerBoundResult:
    """A prime ``p`` for which every square-free ``s == 4 (mod p)`` exceeds ``K p``.

    ``p`` solves ``k p + 4 == 0 (mod p_{k+1}^2)`` for ``k = 1..K`` so that
    ``4, p + 4, ..., K p + 4`` are all non-square-free.
    """
    if not 1 <= K <= 6:
        raise DomainError("need 1 <= K <= 6")
    small = primes_up_to(50).tolist()
    constraints = []
    for k in range(1, K + 1):
        m = small[k] ** 2
        constraints.append((-4 * pow(k, -1, m) % m, m))
    residue, modulus = crt_solve(constraints)
    budget = prime_budget or 10**4 * modulus
    p = next_prime_in_progression(residue, modulus, budget)
    s = 4
    while not is_squarefree(s):
        s += p
    if s <= K * p:
        raise IdentityViolation(f"s = {s} does not exceed K p = {K * p}")
    return LowerBoundResult(K, modulus, residue, p, s)


# ---------------------------------------------------------------------------
# s u v with u, v products of k window primes


@dataclass(frozen=True)
class TripleRecord:
    record: RepresentativeRecord
    s: int | None = None
    u: int | None = None
    v: int | None = None


def _k_products(p: int, W: float, k: int) -> list[tuple[int, frozenset]]:
    top = W ** (1 / k)
    ps = [int(x) for x in primes_between(math.ceil(0.5 * top), math.floor(top)) if int(x) != p]
    return [(math.prod(c), frozenset(c)) for c in combinations(ps, k)]


def smooth_squarefree_triple_search(p: int, a: int, T_bound: int, W: float, k: int) -> TripleRecord:
    """Least square-free ``s u v == a (mod p)`` with ``s <= T_bound`` and
    ``u, v`` products of ``k`` distinct primes from ``[W^(1/k)/2, W^(1/k)]``."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        raise DomainError("a must be coprime to p")
    if k < 1 or T_bound < 1:
        raise DomainError("need k >= 1 and T_bound >= 1")
    y = max(T_bound, W ** (1 / k))
    prods = _k_products(p, W, k)
    sf = squarefree_mask(1, T_bound + 1)
    best = None
    for u, pu in prods:
        for v, pv in prods:
            if pu & pv:
                continue
            uv = u * v
            c = a * pow(uv, -1, p) % p
            for s in range(c or p, T_bound + 1, p):
                if sf[s - 1] and math.gcd(s, uv) == 1:
                    if best is None or s * uv < best[0]:
                        best = (s * uv, s, u, v)
                    break
    if best is None:
        return TripleRecord(_record(p, a, None, y))
    return TripleRecord(_record(p, a, best[0], y), *best[1:])


def smooth_squarefree_triple_naive(p: int, a: int, T_bound: int, W: float, k: int) -> int | None:
    prods = [u for u, _ in _k_products(p, W, k)]
    best = None
    for s in range(1, T_bound + 1):
        for u in prods:
            for v in prods:
                n = s * u * v
                if n % p == a % p and is_squarefree(n):
                    best = n if best is None else min(best, n)
    return best
