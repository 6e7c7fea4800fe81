import math
import random

import pytest
from hypothesis import given, strategies as st

from ecpp.modarith import (CompositeDetectedError, NonResidueError,
                           NotInvertibleError, SqrtFailedError,
                           find_composite_witness, inv_mod, is_prime_small,
                           is_probable_prime, jacobi, kronecker, mod_pow,
                           primes_up_to, random_probable_prime, sqrt_mod)
from oracles import is_prime_trial, repeated_mod_mul

ODD_PRIMES = [p for p in primes_up_to(1000) if p > 2]


def test_mod_pow_examples():
    assert mod_pow(2, 10, 1000) == 24
    assert mod_pow(5, 0, 7) == 1
    assert mod_pow(7, 100, 13) == repeated_mod_mul(7, 100, 13)


def test_mod_pow_rejects_bad_args():
    with pytest.raises(ValueError):
        mod_pow(2, 3, 1)
    with pytest.raises(ValueError):
        mod_pow(2, -1, 7)


@given(st.integers(-10**9, 10**9), st.integers(0, 500), st.integers(2, 10**6))
def test_mod_pow_matches_repeated_multiplication(base, exp, n):
    assert mod_pow(base, exp, n) == repeated_mod_mul(base % n, exp, n)


def test_jacobi_examples():
    assert jacobi(2, 7) == 1
    assert jacobi(3, 7) == -1
    assert jacobi(14, 7) == 0
    with pytest.raises(ValueError):
        jacobi(3, 8)
    with pytest.raises(ValueError):
        jacobi(3, 1)


def test_jacobi_matches_euler_criterion_exhaustively():
    for p in ODD_PRIMES:
        for a in range(p):
            euler = pow(a, (p - 1) // 2, p)
            expected = -1 if euler == p - 1 else euler
            assert jacobi(a, p) == expected, (a, p)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6),
       st.integers(1, 10**4))
def test_jacobi_multiplicative_in_numerator(a, b, m):
    n = 2 * m + 1
    if n < 3:
        return
    assert jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n)


def test_kronecker_extends_jacobi():
    for a in range(-30, 30):
        for n in range(3, 60, 2):
            assert kronecker(a, n) == jacobi(a, n)
    # (a/2) is 0 for even a, +1 for a = ±1 mod 8, -1 for a = ±3 mod 8
    assert [kronecker(a, 2) for a in range(8)] == [0, 1, 0, -1, 0, -1, 0, 1]


def test_sqrt_mod_examples():
    assert sqrt_mod(2, 7) == 3
    assert sqrt_mod(4, 101) == 2
    with pytest.raises(NonResidueError):
        sqrt_mod(3, 7)


def test_sqrt_mod_returns_smaller_root():
    for p in ODD_PRIMES[:40]:
        for a in range(1, p):
            if jacobi(a, p) == 1:
                r = sqrt_mod(a, p)
                assert r * r % p == a
                assert r <= p - r


def test_sqrt_mod_random_64bit_roundtrip(rng):
    primes = [random_probable_prime(rng.randrange(8, 20), rng)
              for _ in range(40)]
    checked = 0
    while checked < 1000:
        p = rng.choice(primes)
        a = rng.randrange(1, p)
        if jacobi(a, p) != 1:
            continue
        r = sqrt_mod(a, p)
        assert r * r % p == a
        checked += 1


def test_sqrt_mod_failure_on_composite_modulus():
    # -3 is a non-residue mod both 5 and 17, so (-3/85) = +1 yet no root
    n = 85
    assert jacobi(-3 % n, n) == 1
    with pytest.raises(SqrtFailedError):
        sqrt_mod(-3 % n, n)


def test_is_probable_prime_examples():
    assert not is_probable_prime(561, 5)
    assert is_probable_prime(2147483647, 5)
    assert not is_probable_prime(1, 5)


def test_is_probable_prime_matches_trial_division_small():
    for n in range(1, 3000):
        assert is_probable_prime(n) == is_prime_trial(n), n


def test_fermat_consistency(rng):
    for _ in range(60):
        n = random_probable_prime(rng.randrange(6, 30), rng)
        a = rng.randrange(2, n - 1)
        if math.gcd(a, n) == 1:
            assert mod_pow(a, n - 1, n) == 1


def test_find_composite_witness():
    assert find_composite_witness(91) == 7
    assert find_composite_witness(2147483647) is None


def test_find_composite_witness_needs_miller_rabin(rng):
    # semiprime with both factors far above the trial-division bound
    p = random_probable_prime(15, rng)
    q = random_probable_prime(15, rng)
    w = find_composite_witness(p * q)
    assert w is not None


def test_inv_mod_examples():
    assert inv_mod(3, 7) == 5
    assert inv_mod(6, 35) == 6
    with pytest.raises(NotInvertibleError) as exc:
        inv_mod(10, 35)
    assert exc.value.factor == 5
    with pytest.raises(ZeroDivisionError):
        inv_mod(0, 7)
    with pytest.raises(ZeroDivisionError):
        inv_mod(35, 35)


@given(st.integers(1, 10**9), st.integers(2, 10**9))
def test_inv_mod_roundtrip(a, n):
    if a % n == 0:
        return
    try:
        inv = inv_mod(a, n)
    except NotInvertibleError as exc:
        assert 1 < exc.factor <= n and n % exc.factor == 0
        return
    assert a * inv % n == 1


def test_is_prime_small():
    for n in range(1, 2000):
        assert is_prime_small(n) == is_prime_trial(n)
    assert is_prime_small(4294967291)  # largest prime below 2^32
    assert not is_prime_small(4294967295)
    with pytest.raises(ValueError):
        is_prime_small(1 << 32)


def test_random_probable_prime_digits(rng):
    for digits in (1, 2, 10, 30):
        n = random_probable_prime(digits, rng)
        assert len(str(n)) == digits
        assert is_probable_prime(n)


def test_composite_detected_error_carries_fields():
    err = CompositeDetectedError(91, witness=7, reason="trial division")
    assert err.n == 91 and err.witness == 7
