import math
import random

import gmpy2
import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixedsums.primality import (
    MR64_BASES,
    SieveTooLarge,
    factor_small,
    integer_root,
    is_prime,
    is_prime_64,
    is_probable_prime,
    jacobi,
    prime_power_form,
    sieve_range,
)
from oracles import plain_sieve


def test_sieve_counts():
    assert sieve_range(0, 10**7).count() == 664579
    assert sieve_range(0, 100).count() == 25
    # the window just below 10^9 holds 45 primes (trial division and gmpy2 agree)
    assert sieve_range(999_999_000, 10**9).count() == 45
    assert sum(gmpy2.is_prime(n) for n in range(999_999_000, 10**9)) == 45


def test_sieve_exhaustive_against_plain_sieve():
    ref = np.frombuffer(bytes(plain_sieve(10**7 - 1)), dtype=np.uint8).astype(bool)
    assert np.array_equal(sieve_range(0, 10**7).dense(), ref)


@given(st.integers(0, 10**12), st.integers(1, 5000), st.integers(10, 20))
def test_sieve_window_matches_gmpy2(lo, width, bits):
    seg = sieve_range(lo, lo + width, segment_bits=bits)
    got = seg.primes().tolist()
    want = [n for n in range(lo, lo + width) if gmpy2.is_prime(n)]
    assert got == want
    for n in want[:5]:
        assert seg.is_prime(n)


def test_sieve_limits():
    with pytest.raises(ValueError):
        sieve_range(10, 5)
    with pytest.raises(SieveTooLarge):
        sieve_range(0, 2**40)
    seg = sieve_range(100, 200)
    with pytest.raises(IndexError):
        seg.is_prime(99)


def test_mr64_exhaustive_small():
    flags = plain_sieve(300_000)
    assert all(is_prime_64(n) == bool(flags[n]) for n in range(300_001))


def test_mr64_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for n in (2047, 3215031751, 3825123056546413051, 318665857834031151167461):
        if n < 2**64:
            assert not is_prime_64(n)
        assert not is_probable_prime(n)
    assert MR64_BASES[0] == 2
    with pytest.raises(ValueError):
        is_prime_64(2**64)


@given(st.integers(0, 2**64 - 1))
def test_mr64_random(n):
    assert is_prime_64(n) == bool(gmpy2.is_prime(n, 50))


@given(st.integers(2**64, 2**400))
def test_bpsw_random(n):
    assert is_probable_prime(n) == bool(gmpy2.is_prime(n, 50))


def test_bpsw_known_primes_and_products():
    mersenne = 2**127 - 1
    assert is_probable_prime(mersenne)
    assert is_probable_prime(mersenne, extra_rounds=5)
    assert not is_probable_prime(mersenne * (2**61 - 1))
    assert not is_probable_prime((2**89 - 1) ** 2)
    rng = random.Random(7)
    for _ in range(200):
        p = int(gmpy2.next_prime(rng.getrandbits(100)))
        assert is_probable_prime(p)
        assert not is_probable_prime(p * int(gmpy2.next_prime(p)))


@given(st.integers(-1000, 1000), st.integers(1, 999).map(lambda k: 2 * k + 1))
def test_jacobi(a, n):
    assert jacobi(a, n) == gmpy2.jacobi(a, n)


@given(st.integers(2, 2**100))
def test_factor_small_product(n):
    fs = factor_small(n)
    assert math.prod(fs) == n
    assert fs == sorted(fs)
    assert all(gmpy2.is_prime(p) for p in fs)


def test_factor_small_semiprime():
    p, q = 2**61 - 1, 2**31 - 1
    assert factor_small(p * q) == [q, p]
    with pytest.raises(ValueError):
        factor_small(1)
    with pytest.raises(ValueError):
        factor_small(2**130)


@given(st.integers(0, 2**200), st.integers(1, 9))
def test_integer_root(n, k):
    r = integer_root(n, k)
    assert r**k <= n < (r + 1) ** k


@given(st.sampled_from([2, 3, 5, 7, 101, 65537, 2**61 - 1]), st.integers(1, 12))
def test_prime_power_form_detects(p, a):
    assert prime_power_form(p**a) == (p, a)


def test_prime_power_form_rejects():
    for n in (1, 6, 12, 36, 2**10 * 3, 15, 10**12):
        assert prime_power_form(n) is None


def test_is_prime_dispatch():
    assert is_prime(2) and not is_prime(1) and not is_prime(0)
    assert is_prime(2**89 - 1)
    assert not is_prime(2**67 - 1)
