"""Multiplicative characters modulo q and their sums over square-free integers.

A character is stored as an exponent vector on a fixed generator basis of
the unit group, so values are exact integer phases modulo the group
exponent until the final conversion to ``complex``.  Sums over *all*
characters at once are a multi-dimensional DFT of the histogram of
discrete logarithms.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .arith import (
    crt_solve,
    factorize,
    primes_between,
    squarefree_mask,
)
from .errors import DomainError, ResourceError

#: largest modulus for which a full discrete-log table is built
MAX_MODULUS = 10**6


def primitive_root(p: int) -> int:
    """Least primitive root modulo an odd prime ``p``."""
    if p == 2:
        return 1
    phi = p - 1
    cofactors = [phi // f for f in factorize(phi).primes]
    g = 2
    while any(pow(g, c, p) == 1 for c in cofactors):
        g += 1
    return g


def _local_generators(p: int, k: int) -> list[tuple[int, int]]:
    """Generators (mod ``p**k``) and their orders."""
    pk = p**k
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            return [(3, 2)]
        return [(pk - 1, 2), (5, 2 ** (k - 2))]
    g = primitive_root(p)
    if k > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return [(g, pk - pk // p)]


@dataclass(frozen=True, eq=False)
class UnitGroupStructure:
    """The unit group of Z/qZ as a product of cyclic factors.

    ``dlog[n]`` is the exponent vector of ``n`` on ``generators``, or a row
    of ``-1`` when ``gcd(n, q) > 1``.
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def rank(self) -> int:
        return len(self.orders)

    def is_unit(self, n: int) -> bool:
        return math.gcd(n, self.modulus) == 1

    def unit_mask(self) -> np.ndarray:
        if self.rank == 0:
            return np.gcd(np.arange(self.modulus), self.modulus) == 1
        return self.dlog[:, 0] >= 0

    def weights(self) -> np.ndarray:
        """Per-generator multipliers turning exponents into phases mod ``exponent``."""
        return np.array([self.exponent // o for o in self.orders], dtype=np.int64)

    def character(self, exponents: Sequence[int]) -> "DirichletCharacter":
        if len(exponents) != self.rank:
            raise DomainError("exponent vector has wrong length")
        e = tuple(int(c) % o for c, o in zip(exponents, self.orders))
        return DirichletCharacter(self, e)

    def principal(self) -> "DirichletCharacter":
        return self.character((0,) * self.rank)

    def characters(self) -> Iterator["DirichletCharacter"]:
        for e in product(*(range(o) for o in self.orders)):
            yield DirichletCharacter(self, e)

    def exponent_vectors(self) -> np.ndarray:
        """All exponent vectors in C order of ``np.ndindex(*orders)``."""
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.orders).reshape(self.rank, -1)
        return grids.T.astype(np.int64)


@lru_cache(maxsize=64)
def build_character_group(q: int, limit: int = MAX_MODULUS) -> UnitGroupStructure:
    """Unit group of Z/qZ with generators and a full discrete-log table."""
    if q < 2:
        raise DomainError("modulus must be at least 2")
    if q > limit:
        raise ResourceError(f"modulus {q} exceeds character limit {limit}")

    gens: list[int] = []
    orders: list[int] = []
    for p, k in factorize(q).factors:
        pk = p**k
        for g, o in _local_generators(p, k):
            lifted, _ = crt_solve([(g, pk), (1, q // pk)])
            gens.append(lifted)
            orders.append(o)

    elements = np.array([1 % q], dtype=np.int64)
    exps = np.zeros((1, 0), dtype=np.int64)
    for g, o in zip(gens, orders):
        powers = np.empty(o, dtype=np.int64)
        x = 1
        for j in range(o):
            powers[j] = x
            x = x * g % q
        elements = (elements[:, None] * powers[None, :] % q).ravel()
        exps = np.column_stack(
            [np.repeat(exps, o, axis=0), np.tile(np.arange(o, dtype=np.int64), exps.shape[0])]
        )

    dlog = np.full((q, max(len(gens), 1)), -1, dtype=np.int64)
    if gens:
        dlog[elements] = exps
    dlog.setflags(write=False)
    return UnitGroupStructure(q, tuple(gens), tuple(orders), dlog)


@dataclass(frozen=True)
class DirichletCharacter:
    group: UnitGroupStructure = field(repr=False)
    exponents: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def order(self) -> int:
        return math.lcm(*(o // math.gcd(o, e) for e, o in zip(self.exponents, self.group.orders))) if self.exponents else 1

    def phase(self, n: int) -> int | None:
        """Exact phase ``k`` with ``chi(n) = exp(2 pi i k / exponent)``; None off units."""
        g = self.group
        n %= g.modulus
        if g.rank == 0:
            return 0 if math.gcd(n, g.modulus) == 1 else None
        d = g.dlog[n]
        if d[0] < 0:
            return None
        return int(np.dot(d, np.array(self.exponents) * g.weights()) % g.exponent)

    def __call__(self, n: int) -> complex:
        k = self.phase(n)
        if k is None:
            return 0j
        return complex(np.exp(2j * np.pi * k / self.group.exponent))

    def phases(self) -> np.ndarray:
        """Phases for every residue ``0..q-1``; ``-1`` off units."""
        g = self.group
        if g.rank == 0:
            return np.where(g.unit_mask(), 0, -1)
        ph = g.dlog @ (np.array(self.exponents, dtype=np.int64) * g.weights()) % g.exponent
        return np.where(g.dlog[:, 0] >= 0, ph, -1)

    def values(self) -> np.ndarray:
        """``chi(n)`` for ``n = 0..q-1`` as complex128."""
        ph = self.phases()
        roots = np.exp(2j * np.pi * np.arange(self.group.exponent) / self.group.exponent)
        out = np.zeros(self.modulus, dtype=np.complex128)
        units = ph >= 0
        out[units] = roots[ph[units]]
        return out


def character_table(group: UnitGroupStructure) -> tuple[np.ndarray, np.ndarray]:
    """All character values on all units.

    Returns ``(units, table)`` with ``table[i, j] = chi_i(units[j])`` and
    characters ordered as :meth:`UnitGroupStructure.exponent_vectors`.
    """
    units = np.flatnonzero(group.unit_mask())
    if group.rank == 0:
        return units, np.ones((1, units.size), dtype=np.complex128)
    E = group.exponent_vectors() * group.weights()
    D = group.dlog[units]
    phases = (E @ D.T) % group.exponent
    return units, np.exp(2j * np.pi * phases / group.exponent)


def orthogonality_defect(group: UnitGroupStructure) -> float:
    """Max deviation of ``(1/phi) sum_chi chi(a)`` from ``[a == 1]`` over units."""
    units, table = character_table(group)
    avg = table.sum(axis=0) / group.size
    target = (units == 1 % group.modulus).astype(np.float64)
    return float(np.max(np.abs(avg - target)))


# ---------------------------------------------------------------------------
# sums over square-free integers


def sum_error_bound(t: int) -> float:
    """Reported floating-point accumulation budget for a sum of ``t`` unit terms."""
    return t * 2.0**-45


def _squarefree_upto(t: int) -> np.ndarray:
    return np.flatnonzero(squarefree_mask(1, t + 1)) + 1


def squarefree_char_sum(chi: DirichletCharacter, t: int) -> complex:
    """``sum_{s <= t, s square-free} chi(s)``.

    Terms are tallied by exact phase first, so only ``exponent`` complex
    multiplications touch floating point.
    """
    if t < 1:
        return 0j
    s = _squarefree_upto(t)
    ph = chi.phases()[s % chi.modulus]
    ph = ph[ph >= 0]
    L = chi.group.exponent
    counts = np.bincount(ph, minlength=L)
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    return complex(counts @ roots)


def _log_histogram(group: UnitGroupStructure, residues: np.ndarray, weights=None) -> np.ndarray:
    """Weighted histogram of discrete logs, shaped ``group.orders``."""
    r = residues % group.modulus
    keep = group.unit_mask()[r]
    w = np.ones(r.size) if weights is None else np.asarray(weights)
    hist = np.zeros(group.orders or (1,), dtype=np.result_type(w.dtype, np.float64))
    if group.rank == 0:
        hist[0] = w[keep].sum()
    else:
        np.add.at(hist, tuple(group.dlog[r[keep]].T), w[keep])
    return hist


def all_character_sums(group: UnitGroupStructure, residues: np.ndarray, weights=None) -> np.ndarray:
    """``sum_n w_n chi(n)`` for every character, indexed by exponent vector."""
    hist = _log_histogram(group, residues, weights)
    return np.fft.ifftn(hist) * hist.size


def all_squarefree_sums(group: UnitGroupStructure, t: int) -> np.ndarray:
    return all_character_sums(group, _squarefree_upto(t))


@dataclass(frozen=True)
class MaxCharSum:
    modulus: int
    t: int
    value: float
    exponents: tuple[int, ...]
    exponent_ratio: float


def max_nonprincipal_sf_sum(q: int, t: int) -> MaxCharSum:
    """Largest ``|S(chi, t)|`` over nonprincipal characters modulo ``q``.

    ``exponent_ratio = log(max) / log(t)`` is the observed exponent.
    """
    group = build_character_group(q)
    if group.size == 1:
        raise DomainError(f"no nonprincipal characters modulo {q}")
    sums = np.abs(all_squarefree_sums(group, t)).ravel()
    sums[0] = -1.0
    k = int(np.argmax(sums))
    value = float(sums[k])
    exps = tuple(int(x) for x in np.unravel_index(k, group.orders))
    ratio = math.log(value) / math.log(t) if value > 0 and t > 1 else float("nan")
    return MaxCharSum(q, t, value, exps, ratio)


@dataclass(frozen=True)
class MeanValueCheck:
    lhs: float
    rhs: float
    holds: bool


def mean_value_check(q: int, N: int, coefficients: Sequence[complex]) -> MeanValueCheck:
    """Compare ``sum_chi |sum_{n<=N} a_n chi(n)|^2`` with ``phi(q)(N/q+1) sum |a_n|^2``.

    ``coefficients[i]`` is ``a_{i+1}``.
    """
    a = np.asarray(coefficients)
    if a.shape != (N,):
        raise DomainError(f"expected {N} coefficients, got {a.shape}")
    group = build_character_group(q)
    sums = all_character_sums(group, np.arange(1, N + 1), a)
    lhs = float(np.sum(np.abs(sums) ** 2))
    rhs = group.size * (N / q + 1) * float(np.sum(np.abs(a) ** 2))
    return MeanValueCheck(lhs, rhs, lhs <= rhs * (1 + 2.0**-30))


# ---------------------------------------------------------------------------
# census over prime moduli


@dataclass(frozen=True)
class CensusRow:
    prime: int
    max_abs_sum: float
    exponent: float
    violates_bound: bool


@dataclass
class ExceptionalCensus:
    Q: int
    t: int
    delta: float
    bound: float
    rows: list[CensusRow]
    gamma: float
    theta_candidates: tuple[float, float]

    @property
    def theta(self) -> float:
        return min(self.theta_candidates)

    @property
    def violators(self) -> list[int]:
        return [r.prime for r in self.rows if r.violates_bound]

    @property
    def violation_count(self) -> int:
        return len(self.violators)

    @property
    def predicted_exceptional(self) -> float:
        """``Q^{4 delta} t^theta`` with the o(1) dropped."""
        return self.Q ** (4 * self.delta) * self.t**self.theta

    CSV_HEADER = ("prime", "max_abs_sum", "exponent", "violates_bound")

    def csv_rows(self) -> list[tuple]:
        return [(r.prime, r.max_abs_sum, r.exponent, r.violates_bound) for r in self.rows]


def _census_row(args: tuple[int, int, float]) -> CensusRow:
    p, t, bound = args
    m = max_nonprincipal_sf_sum(p, t)
    return CensusRow(p, m.value, m.exponent_ratio, m.value > bound)


def exceptional_prime_census(Q: int, t: int, delta: float, workers: int = 1) -> ExceptionalCensus:
    """Primes ``p`` in ``[Q, 2Q]`` whose square-free character sums exceed ``t^(1-delta)``."""
    if not 0 < delta < 0.25:
        raise DomainError("delta must lie in (0, 1/4)")
    if t < 2 or t > Q:
        raise DomainError("need 2 <= t <= Q")
    bound = t ** (1 - delta)
    primes = [int(p) for p in primes_between(Q, 2 * Q)]
    jobs = [(p, t, bound) for p in primes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_census_row, jobs))
    else:
        rows = [_census_row(j) for j in jobs]
    ratio = 2 * math.log(Q) / math.log(t)
    gamma = ratio - math.floor(ratio)
    theta = ((1 - 2 * delta) * gamma, 2 * delta * (1 - gamma))
    return ExceptionalCensus(Q, t, delta, bound, rows, gamma, theta)
