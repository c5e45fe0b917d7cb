"""Double Kloosterman sums over a window of primes.

For a prime ``p`` and the window ``W`` of primes in ``[L, 2L]`` the sum is

    W_p(a; L) = sum_{l1, l2 in W} e_p(a * inv(l1) * inv(l2)).

Everything about ``W_p(. ; L)`` is encoded in the multiplicity histogram
``m[r] = #{(l1, l2) : inv(l1) inv(l2) == r}``; the full vector over ``a`` is
its length-``p`` DFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import check_vector_modulus, is_prime, primes_between, prime_window
from .errors import DomainError

#: moduli up to this size get a cached table of p-th roots of unity
ROOT_TABLE_LIMIT = 10**6


@lru_cache(maxsize=8)
def _roots(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def _e_p(residues: np.ndarray, p: int) -> np.ndarray:
    if p <= ROOT_TABLE_LIMIT:
        return _roots(p)[residues]
    return np.exp(2j * np.pi * residues / p)


def _window_inverses(members: np.ndarray, p: int) -> np.ndarray:
    return np.array([pow(int(x), -1, p) for x in members], dtype=np.int64)


def inverse_products(p: int, L: float) -> np.ndarray:
    """The ``K**2`` residues ``inv(l1) inv(l2) mod p`` (ordered pairs, flattened)."""
    check_vector_modulus(p)
    w = prime_window(L, p)
    inv = _window_inverses(w.as_array(), p)
    return (inv[:, None] * inv[None, :] % p).ravel()


def multiplicity_histogram(p: int, L: float) -> np.ndarray:
    return np.bincount(inverse_products(p, L), minlength=p)


@dataclass(frozen=True)
class ExpSumResult:
    p: int
    a: int
    L: float
    K: int
    value: complex

    @property
    def abs(self) -> float:
        return abs(self.value)

    @property
    def trivial_bound(self) -> int:
        return self.K**2

    @property
    def paper_bound(self) -> float:
        return self.L**1.5 * self.p**0.125


def double_kloosterman(p: int, a: int, L: float) -> ExpSumResult:
    """Evaluate ``W_p(a; L)`` directly over all ordered pairs."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    r = inverse_products(p, L)
    K = math.isqrt(r.size)
    value = complex(_e_p(a % p * r % p, p).sum()) if r.size else 0j
    return ExpSumResult(p, a, L, K, value)


def all_residue_sums(p: int, L: float) -> np.ndarray:
    """``W_p(a; L)`` for ``a = 0..p-1`` via the multiplicity histogram."""
    m = multiplicity_histogram(p, L).astype(np.float64)
    return np.fft.ifft(m) * p


def max_over_residues(p: int, L: float) -> tuple[int, float]:
    """``(a*, max_{1 <= a < p} |W_p(a; L)|)``, smallest maximiser on ties.

    Ties are resolved after rounding to 12 significant digits, since
    ``W(a)`` and ``W(-a)`` are conjugates.  An empty window gives ``(1, 0)``.
    """
    w = np.abs(all_residue_sums(p, L))[1:]
    if not w.size or w.max() == 0:
        return 1, 0.0
    rounded = np.round(w / w.max(), 12)
    a = int(np.flatnonzero(rounded == rounded.max())[0]) + 1
    return a, float(w[a - 1])


def max_over_residues_brute(p: int, L: float) -> float:
    """Reference maximum: every term recomputed with its own modular inverse."""
    members = prime_window(L, p).members
    best = 0.0
    for a in range(1, p):
        w = sum(
            complex(np.exp(2j * np.pi * (a * pow(l1 * l2, -1, p) % p) / p))
            for l1 in members
            for l2 in members
        )
        best = max(best, abs(w))
    return best


def parseval_lower_bound(p: int, L: float) -> float:
    """Rigorous lower bound for the maximum over nonzero residues.

    ``sum_{a != 0} |W(a)|^2 = p sum m_r^2 - K^4`` spread over ``p - 1`` terms.
    """
    m = multiplicity_histogram(p, L).astype(np.float64)
    K2 = m.sum()
    total = p * float(np.dot(m, m)) - K2 * K2
    return math.sqrt(max(total, 0.0) / (p - 1))


@dataclass
class ModuliAverage:
    Q: int
    L: float
    rows: list[dict]
    total: float

    def bound(self, k: int) -> float:
        """``Q (L^{(3k-1)/2k} Q^{1/2k} + L^{(4k-1)/2k})``, the o(1) set to 0."""
        Q, L = self.Q, self.L
        return Q * (L ** ((3 * k - 1) / (2 * k)) * Q ** (1 / (2 * k)) + L ** ((4 * k - 1) / (2 * k)))

    def ratios(self) -> dict[int, float]:
        return {k: self.total / self.bound(k) for k in range(1, 6)}

    CSV_HEADER = ("prime", "L", "K", "max_abs", "exponent_observed") + tuple(
        f"bound_k{k}" for k in range(1, 6)
    )

    def csv_rows(self) -> list[tuple]:
        return [tuple(r[c] for c in self.CSV_HEADER) for r in self.rows]


def _per_prime_bound(p: int, L: float, k: int) -> float:
    return L ** ((3 * k - 1) / (2 * k)) * p ** (1 / (2 * k)) + L ** ((4 * k - 1) / (2 * k))


def observed_exponent(max_abs: float, p: int, L: float) -> float:
    """``theta`` with ``max_abs = L^{3/2} p^theta``; compare with 1/8."""
    if max_abs <= 0:
        return float("nan")
    return (math.log(max_abs) - 1.5 * math.log(L)) / math.log(p)


def average_over_prime_moduli(Q: int, L: float) -> ModuliAverage:
    """Sum of ``max_a |W_p(a; L)|`` over primes ``p`` in ``[Q, 2Q]``."""
    rows = []
    for p in primes_between(Q, 2 * Q).tolist():
        K = prime_window(L, p).K
        _, mx = max_over_residues(p, L)
        row = {
            "prime": p,
            "L": L,
            "K": K,
            "max_abs": mx,
            "exponent_observed": observed_exponent(mx, p, L),
        }
        for k in range(1, 6):
            row[f"bound_k{k}"] = _per_prime_bound(p, L, k)
        rows.append(row)
    return ModuliAverage(Q, L, rows, float(sum(r["max_abs"] for r in rows)))


def _sorted_points(p: int, a: int, L: float) -> np.ndarray:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if a % p == 0:
        raise DomainError("a must be coprime to p")
    r = a % p * inverse_products(p, L) % p
    if not r.size:
        raise DomainError("empty prime window: discrepancy undefined")
    return np.sort(r)


def inverse_product_discrepancy_exact(p: int, a: int, L: float) -> Fraction:
    """Star discrepancy of ``{a inv(l1) inv(l2) / p}`` as an exact fraction."""
    r = _sorted_points(p, a, L)
    n = r.size
    i = np.arange(1, n + 1, dtype=np.int64)
    # i/n - r/p and r/p - (i-1)/n over the common denominator n p
    upper = i * p - r * n
    lower = r * n - (i - 1) * p
    return Fraction(int(max(upper.max(), lower.max())), n * p)


def inverse_product_discrepancy(p: int, a: int, L: float) -> float:
    return float(inverse_product_discrepancy_exact(p, a, L))


def erdos_turan_bound(p: int, a: int, L: float, H: int) -> float:
    """Erdos-Turan upper bound for the discrepancy of the same point set.

    ``6/(H+1) + 4/pi * sum_{h<=H} (1/h - 1/(H+1)) |W_p(a h; L)| / K^2``
    """
    sums = all_residue_sums(p, L)
    K2 = float(np.abs(sums[0]))
    if K2 == 0:
        raise DomainError("empty prime window")
    h = np.arange(1, H + 1)
    terms = (1 / h - 1 / (H + 1)) * np.abs(sums[a * h % p]) / K2
    return 6 / (H + 1) + 4 / np.pi * float(terms.sum())
