import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothsqf import kloosterman as kl
from smoothsqf.arith import prime_window, primes_between
from smoothsqf.errors import DomainError


def e(x):
    return cmath.exp(2j * cmath.pi * x)


def direct_sum(p, a, L):
    members = prime_window(L, p).members
    return sum(e(a * pow(l1 * l2, -1, p) / p) for l1 in members for l2 in members)


def test_thirteen_four_terms():
    w = kl.double_kloosterman(13, 1, 2)
    expect = e(10 / 13) + 2 * e(11 / 13) + e(3 / 13)
    assert abs(w.value - expect) < 1e-12
    assert w.K == 2 and w.trivial_bound == 4
    assert w.paper_bound == pytest.approx(2**1.5 * 13**0.125)


def test_zero_residue_is_trivial_bound():
    for p, L in ((101, 5), (499, 7), (13, 2)):
        w = kl.double_kloosterman(p, 0, L)
        assert w.value == pytest.approx(w.K**2)
        assert kl.double_kloosterman(p, 3, L).abs <= w.K**2 + 1e-6


def test_single_prime_window_has_unit_modulus():
    solo = kl.double_kloosterman(7, 3, 3.5)  # [3.5, 7] without 7
    assert solo.K == 1 and abs(solo.abs - 1) < 1e-12


def test_empty_window():
    assert prime_window(2.2, 3).K == 0  # [2.2, 4.4] holds only 3
    w = kl.double_kloosterman(3, 1, 2.2)
    assert w.K == 0 and w.value == 0
    assert kl.max_over_residues(3, 2.2) == (1, 0.0)


@pytest.mark.parametrize("p", [13, 31, 101, 211, 499])
@pytest.mark.parametrize("L", [2, 3.5, 7])
def test_all_residue_identities(p, L):
    W = kl.all_residue_sums(p, L)
    m = kl.multiplicity_histogram(p, L)
    K2 = int(m.sum())
    assert W[0] == pytest.approx(K2)
    assert abs(W.sum()) < 1e-8 * max(K2, 1) * p
    # conjugate symmetry and Parseval
    assert np.allclose(W[1:], np.conj(W[1:][::-1]), atol=1e-8)
    assert np.sum(np.abs(W) ** 2) == pytest.approx(p * float(m @ m), rel=1e-6)
    for a in (1, 2, p - 1):
        assert abs(W[a] - direct_sum(p, a, L)) < 1e-8


@pytest.mark.parametrize("p", primes_between(11, 500).tolist()[::6])
def test_max_matches_brute_force(p):
    L = max(2.0, p**0.3)
    a, mx = kl.max_over_residues(p, L)
    assert mx == pytest.approx(kl.max_over_residues_brute(p, L), rel=1e-9)
    assert abs(direct_sum(p, a, L)) == pytest.approx(mx, rel=1e-9)


def test_max_tie_break_smallest_residue():
    a, mx = kl.max_over_residues(13, 2)
    sums = [abs(direct_sum(13, b, 2)) for b in range(1, 13)]
    assert a == 1 + min(i for i, s in enumerate(sums) if abs(s - max(sums)) < 1e-9)


def test_parseval_lower_bounds():
    for p in primes_between(11, 500).tolist()[::4]:
        for L in (2, 3, p**0.25):
            K = prime_window(L, p).K
            if K == 0:
                continue
            _, mx = kl.max_over_residues(p, L)
            assert mx >= kl.parseval_lower_bound(p, L) - 1e-9
            assert mx >= K**2 / (p - 1) - 1e-9
            if K * K <= p / 2:
                assert mx >= K**2 / math.sqrt(p - 1) - 1e-9


def test_average_over_prime_moduli():
    avg = kl.average_over_prime_moduli(100, 5)
    assert len(avg.rows) == 21
    assert avg.total == pytest.approx(sum(kl.max_over_residues(p, 5)[1] for p in primes_between(100, 200).tolist()))
    assert avg.ratios()[1] == pytest.approx(avg.total / (100 * (5 * 100**0.5 + 5**1.5)))
    assert kl.average_over_prime_moduli(24, 3).total > 0
    assert avg.CSV_HEADER[:5] == ("prime", "L", "K", "max_abs", "exponent_observed")


def test_observed_exponent():
    assert kl.observed_exponent(10**1.5 * 101**0.125, 101, 10) == pytest.approx(0.125)
    assert math.isnan(kl.observed_exponent(0, 101, 10))


def sorted_discrepancy(points):
    xs = sorted(points)
    n = len(xs)
    return max(max(Fraction(i + 1, n) - x, x - Fraction(i, n)) for i, x in enumerate(xs))


def test_discrepancy_exact():
    p, L = 101, 3
    members = prime_window(L, p).members
    pts = [Fraction(pow(l1 * l2, -1, p), p) for l1 in members for l2 in members]
    assert kl.inverse_product_discrepancy_exact(p, 1, L) == sorted_discrepancy(pts)
    assert kl.inverse_product_discrepancy_exact(p, 1, L) == Fraction(123, 404)


def test_discrepancy_single_point_and_errors():
    d = kl.inverse_product_discrepancy_exact(7, 3, 3.5)  # one prime, 5
    x = Fraction(3 * pow(25, -1, 7) % 7, 7)
    assert d == max(x, 1 - x)
    with pytest.raises(DomainError):
        kl.inverse_product_discrepancy(3, 1, 2.2)
    with pytest.raises(DomainError):
        kl.inverse_product_discrepancy(101, 0, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(primes_between(11, 400).tolist()), st.integers(1, 10**6), st.floats(2, 12))
def test_discrepancy_bounds(p, a, L):
    if a % p == 0 or prime_window(L, p).K == 0:
        return
    K = prime_window(L, p).K
    d = kl.inverse_product_discrepancy(p, a, L)
    assert 1 / (2 * K * K) <= d <= 1
    assert d <= kl.erdos_turan_bound(p, a, L, 10) + 1e-12


def test_window_inverses_only_used_by_fast_path(monkeypatch):
    monkeypatch.setattr(kl, "_window_inverses", lambda m, p: np.ones(len(m), dtype=np.int64))
    fast = kl.max_over_residues(101, 5)[1]
    brute = kl.max_over_residues_brute(101, 5)
    assert fast != pytest.approx(brute)
