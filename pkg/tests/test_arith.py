import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothsqf.arith import (
    PSI,
    Factorization,
    build_sieve,
    coprime_mask,
    crt_solve,
    euler_phi,
    factorize,
    is_prime,
    is_smooth,
    is_squarefree,
    mertens_window,
    mobius,
    mod_inverse,
    next_prime_in_progression,
    prime_window,
    primes_between,
    primes_up_to,
    short_interval,
    squarefree_mask,
    tau,
)
from smoothsqf.errors import DomainError, NeedsLargerSieve, ResourceError


def trial_factor(n):
    out, d = [], 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_small_sieve_tables():
    t = build_sieve(10)
    assert t.mobius[1:].tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert t.primes.tolist() == [2, 3, 5, 7]
    assert build_sieve(30).mobius[30] == -1


def test_sieve_domain_and_budget():
    with pytest.raises(DomainError):
        build_sieve(1)
    with pytest.raises(ResourceError):
        build_sieve(10**6, max_limit=10**5)


def test_sieve_against_trial_division():
    t = build_sieve(5000, segment_size=97)  # many segments
    for n in range(2, 5001):
        f = trial_factor(n)
        mu = 0 if any(e > 1 for _, e in f) else (-1) ** len(f)
        assert t.mobius[n] == mu
        assert t.smallest_prime_factor[n] == f[0][0]
        assert t.largest_prime_factor[n] == f[-1][0]
    ks = np.flatnonzero(t.smallest_prime_factor[2:] == np.arange(2, 5001)) + 2
    assert ks.tolist() == t.primes.tolist()


def test_primes_and_primality():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_between(100, 200).size == 21
    big = [2**31 - 1, 2**61 - 1, 1_000_000_007]
    assert all(is_prime(p) for p in big)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(1) and not is_prime(0)
    ref = set(primes_up_to(10**4).tolist())
    assert all(is_prime(n) == (n in ref) for n in range(10**4))


def test_factorize_examples():
    assert factorize(210).factors == ((2, 1), (3, 1), (5, 1), (7, 1))
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(9973).factors == ((9973, 1),)
    assert str(factorize(360)) == "2^3 * 3^2 * 5"


def test_factorize_beyond_tables():
    small = build_sieve(100)
    assert factorize(97 * 89 * 2, small).factors == ((2, 1), (89, 1), (97, 1))
    assert factorize(10007 * 4, small).factors == ((2, 2), (10007, 1))
    with pytest.raises(NeedsLargerSieve):
        factorize(10007 * 10009, small)


def test_factorization_validates():
    with pytest.raises(ValueError):
        Factorization(12, ((2, 1), (3, 1)))
    with pytest.raises(ValueError):
        Factorization(4, ((4, 1),))


@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 101, 9973]), min_size=1, max_size=6))
def test_factorize_inverts_product(ps):
    n = math.prod(ps)
    f = factorize(n)
    assert math.prod(p**e for p, e in f.factors) == n
    assert sorted(set(ps)) == list(f.primes)


def test_predicates():
    assert not is_squarefree(4)
    assert is_squarefree(1)
    assert is_smooth(70, 7) and not is_smooth(70, 6)
    assert is_smooth(1, 1)
    assert is_squarefree(10007 * 10009) and not is_squarefree(10007**2 * 3)
    t = build_sieve(3000)
    for n in range(1, 3001):
        assert is_squarefree(n) == (t.mobius[n] != 0)
        assert is_smooth(n, 13) == (t.largest_prime_factor[n] <= 13)


def test_multiplicative_functions():
    assert euler_phi(12) == 4
    assert tau(12) == 6
    assert mobius(30) == -1 and mobius(12) == 0
    for k in range(1, 2000):
        prod = math.prod(1 - 1 / p for p, _ in trial_factor(k)) if k > 1 else 1
        assert euler_phi(k) / k == pytest.approx(prod, rel=1e-12)


def test_phi_product_formula_to_1e5():
    # phi(k) prod_{l | k} l == k prod_{l | k} (l - 1), tabulated by a prime sieve
    n = 10**5
    num = np.arange(n + 1, dtype=np.int64)
    den = np.ones(n + 1, dtype=np.int64)
    for p in primes_up_to(n).tolist():
        num[p::p] *= p - 1
        den[p::p] *= p
    phi = np.array([0] + [euler_phi(k) for k in range(1, n + 1)], dtype=np.int64)
    assert np.array_equal(phi[1:] * den[1:], num[1:])


def test_divisor_sum_of_mobius_detects_coprimality():
    rng = np.random.default_rng(5)
    t = build_sieve(10**6)
    for n, q in rng.integers(1, 10**6, size=(300, 2)).tolist():
        g = math.gcd(n, q)
        divisors = {d for k in range(1, math.isqrt(g) + 1) if g % k == 0 for d in (k, g // k)}
        assert sum(int(t.mobius[d]) for d in divisors) == (1 if g == 1 else 0)


def test_mod_inverse_examples_and_errors():
    assert mod_inverse(1, 7) == 1
    assert mod_inverse(4, 13) == 10
    assert mod_inverse(6, 13) == 11
    with pytest.raises(DomainError):
        mod_inverse(6, 12)
    with pytest.raises(DomainError):
        mod_inverse(1, 1)


@settings(max_examples=300)
@given(st.integers(2, 10**9), st.integers(-(10**9), 10**9))
def test_mod_inverse_property(m, k):
    if math.gcd(k, m) != 1:
        return
    inv = mod_inverse(k, m)
    assert 1 <= inv < m or m == 2
    assert k * inv % m == 1 % m


def test_crt_examples():
    assert crt_solve([(5, 9), (23, 25)]) == (23, 225)
    assert [x for x in range(225) if x % 9 == 5 and x % 25 == 23] == [23]
    assert crt_solve([(0, 7)]) == (0, 7)
    assert crt_solve([(1, 3), (1, 5)]) == (1, 15)
    assert crt_solve([(2, 4), (4, 6)]) == (10, 12)
    with pytest.raises(DomainError):
        crt_solve([(1, 4), (2, 6)])


@given(st.lists(st.tuples(st.integers(0, 50), st.sampled_from([3, 4, 5, 7, 9, 11, 13])), min_size=1, max_size=4))
def test_crt_property(cs):
    try:
        r, M = crt_solve(cs)
    except DomainError:
        # no x in one full period satisfies all
        period = math.lcm(*(m for _, m in cs))
        assert not any(all((x - a) % m == 0 for a, m in cs) for x in range(period))
        return
    assert M == math.lcm(*(m for _, m in cs))
    assert all((r - a) % m == 0 for a, m in cs)


def test_prime_windows():
    w = prime_window(2, 13)
    assert w.members == (2, 3) and w.K == 2
    assert prime_window(3, 5).members == (3,)
    w = prime_window(10, 1009)
    assert all(10 <= x <= 20 for x in w.members) and w.K == 4


def test_short_interval_and_masks():
    assert short_interval(100) == (100, math.floor(100 * PSI))
    lo, hi = short_interval(10)
    assert lo == 10 and hi == 10
    assert squarefree_mask(1, 11).tolist() == [is_squarefree(n) for n in range(1, 11)]
    assert coprime_mask(10, 20, 6).tolist() == [math.gcd(n, 6) == 1 for n in range(10, 20)]


def test_next_prime_in_progression():
    assert next_prime_in_progression(23, 225, 1000) == 23
    assert next_prime_in_progression(1, 10, 100) == 11
    with pytest.raises(ResourceError):
        next_prime_in_progression(0, 10, 10**6)


@pytest.mark.parametrize("X", [1e2, 1e3, 1e4])
@pytest.mark.parametrize("Y", [1e5, 1e6])
def test_mertens_window(X, Y):
    observed, predicted = mertens_window(X, Y)
    assert abs(observed - predicted) <= 3 / math.log(X)
