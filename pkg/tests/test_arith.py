import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isovolc import arith

import oracles

PRIMES_1000 = oracles.sieve_primes(1000)


def test_kronecker_examples():
    assert arith.kronecker(1, 5) == 1
    assert arith.kronecker(-15, 2) == 1          # 2 splits in Q(sqrt(-15))
    assert arith.kronecker(-4027, 3) == -1       # -4027 = 2 mod 3


def test_kronecker_against_euler_criterion():
    for p in PRIMES_1000:
        if p == 2 or p > 100:
            continue
        for a in range(0, p):
            assert arith.kronecker(a, p) == oracles.legendre_by_euler(a, p)


def test_kronecker_matches_square_sets():
    for p in oracles.sieve_primes(100):
        if p == 2:
            continue
        squares = oracles.squares_mod(p)
        for a in range(1, p):
            expect = 1 if a in squares else -1
            assert arith.kronecker(a, p) == expect


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6),
       st.integers(1, 10**4))
def test_kronecker_multiplicative_in_top(a, b, n):
    assert arith.kronecker(a * b, n) == arith.kronecker(a, n) * arith.kronecker(b, n)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**4), st.integers(1, 10**4))
def test_kronecker_multiplicative_in_bottom(a, m, n):
    assert arith.kronecker(a, m * n) == arith.kronecker(a, m) * arith.kronecker(a, n)


def test_is_prime_small_against_sieve():
    primes = set(oracles.sieve_primes(100_000))
    for n in range(100_000):
        assert arith.is_prime(n) == (n in primes), n


def test_is_prime_examples():
    assert arith.is_prime(1009)
    assert arith.is_prime(971)
    assert not arith.is_prime(1)
    assert arith.is_prime(2 ** 89 - 1)          # Mersenne prime, wide path
    assert not arith.is_prime(2 ** 67 - 1)      # 193707721 * 761838257287


def test_sqrt_mod_p_examples():
    assert arith.sqrt_mod_p(0, 7) == 0
    assert arith.sqrt_mod_p(2, 7) in (3, 4)
    assert arith.sqrt_mod_p(3, 7) is None


def test_sqrt_mod_p_exhaustive_small():
    for p in oracles.sieve_primes(100):
        squares = oracles.squares_mod(p)
        for a in range(p):
            r = arith.sqrt_mod_p(a, p)
            if a in squares:
                assert r is not None and r * r % p == a
            else:
                assert r is None
                assert arith.kronecker(a, p) == -1


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([p for p in PRIMES_1000 if p > 2]), st.data())
def test_sqrt_mod_p_roundtrip(p, data):
    x = data.draw(st.integers(0, p - 1))
    r = arith.sqrt_mod_p(x * x % p, p)
    assert r is not None
    assert r * r % p == x * x % p


def test_factorize_examples():
    assert arith.factorize(1) == []
    assert arith.factorize(35) == [5, 7]
    assert arith.factorize(27) == [3, 3, 3]


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10 ** 12))
def test_factorize_roundtrip(n):
    factors = arith.factorize(n)
    prod = 1
    for p in factors:
        prod *= p
        assert arith.is_prime(p)
    assert prod == n


def test_factorize_large_semiprime():
    p, q = 1_000_003, 1_000_033
    assert arith.factorize(p * q) == [p, q]


def test_squarefree_decompose():
    assert arith.squarefree_decompose(1) == (1, 1)
    assert arith.squarefree_decompose(4 * 1009 - 19 * 19) == (3, 35)
    # 16383 = 3 * 43 * 127 is already squarefree (trial-division oracle)
    n = 16383
    trial = []
    m = n
    for d in range(2, 200):
        while m % d == 0:
            trial.append(d)
            m //= d
    assert m == 1 and len(set(trial)) == len(trial)
    assert arith.squarefree_decompose(n) == (16383, 1)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10 ** 9))
def test_squarefree_decompose_roundtrip(n):
    s, x = arith.squarefree_decompose(n)
    assert s * x * x == n
    for p in arith.factorize(s):
        assert s % (p * p) != 0


def test_divisors():
    assert arith.divisors(1) == [1]
    assert arith.divisors(28) == [1, 2, 4, 7, 14, 28]
    assert arith.divisors(60) == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]


def test_valuation():
    assert arith.valuation(60, 2) == 2
    assert arith.valuation(60, 3) == 1
    assert arith.valuation(-27, 3) == 3
    with pytest.raises(ValueError):
        arith.valuation(0, 2)


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        arith.factorize(0)
