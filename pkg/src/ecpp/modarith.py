"""Arbitrary-precision modular arithmetic kernels.

Everything here works on plain Python ints; a "residue mod n" is an int in
[0, n).  These are the primitives the rest of the package is built on:
modular exponentiation, Jacobi symbols, Tonelli-Shanks square roots,
Miller-Rabin probable-prime testing, and modular inversion with a factor
channel (a failed inversion mod a composite n exposes a divisor of n, and
callers upstream turn that into a compositeness witness).

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
import random

_TRIAL_BOUND = 1000  # deterministic trial division below this before Miller-Rabin


class NonResidueError(ValueError):
    """Requested square root of a quadratic non-residue."""


class SqrtFailedError(ArithmeticError):
    """Tonelli-Shanks did not converge: evidence the modulus is composite."""


class NotInvertibleError(ArithmeticError):
    """Inversion failed; `factor` is a nontrivial divisor of the modulus."""

    def __init__(self, factor: int, modulus: int):
        super().__init__(f"gcd exposes factor {factor} of {modulus}")
        self.factor = factor
        self.modulus = modulus


class CompositeDetectedError(Exception):
    """An operation produced arithmetic proof that `n` is composite.

    `witness` is whatever evidence was found: a nontrivial factor, a
    Miller-Rabin witness base, or a textual description.
    """

    def __init__(self, n: int, witness=None, reason: str = ""):
        super().__init__(f"{n} is composite ({reason or 'witness'}: {witness})")
        self.n = n
        self.witness = witness
        self.reason = reason


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES = _sieve(_TRIAL_BOUND)
_U16_PRIMES: list[int] | None = None


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, ascending."""
    if limit < 2:
        return []
    return _sieve(limit)


def _u16_primes() -> list[int]:
    global _U16_PRIMES
    if _U16_PRIMES is None:
        _U16_PRIMES = _sieve(1 << 16)
    return _U16_PRIMES


def mod_pow(base: int, exp: int, n: int) -> int:
    """base**exp mod n for n >= 2, exp >= 0."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base, exp, n)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 3; Legendre symbol when n is prime."""
    if n < 3 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd n >= 3")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1 (extends Jacobi to even n)."""
    if n < 1:
        raise ValueError("kronecker defined here for n >= 1 only")
    if n == 1:
        return 1
    result = 1
    while n % 2 == 0:
        if a % 2 == 0:
            return 0
        n //= 2
        if a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, n) if n > 1 else result


def sqrt_mod(a: int, p: int) -> int:
    """Square root of a mod an odd prime p, via Tonelli-Shanks.

    Returns the smaller of the two roots {r, p-r} so results are
    reproducible.  Raises NonResidueError when (a/p) = -1, and
    SqrtFailedError when the algorithm's internal assumptions break --
    which for a verified non-residue input means p is composite, so
    callers must treat that as compositeness evidence.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("modulus must be an odd (probable) prime")
    a %= p
    if a == 0:
        return 0
    if jacobi(a, p) == -1:
        raise NonResidueError(f"{a} is not a square mod {p}")

    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Write p-1 = q * 2^s with q odd, then walk the 2-Sylow subgroup.
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 0
        for cand in range(2, 2 + 64):
            if jacobi(cand % p, p) == -1:
                z = cand
                break
        else:
            raise SqrtFailedError(f"no quadratic non-residue found mod {p}")
        c = pow(z, q, p)
        r = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
                if i == m:
                    raise SqrtFailedError(f"Tonelli-Shanks cycle mod {p}")
            b = pow(c, 1 << (m - i - 1), p)
            r = r * b % p
            c = b * b % p
            t = t * c % p
            m = i
    if r * r % p != a:
        raise SqrtFailedError(f"root candidate fails verification mod {p}")
    return min(r, p - r)


def find_composite_witness(n: int, rounds: int = 20, seed: int = 0):
    """A witness that n is composite, or None if n is probably prime.

    Trial division by primes below 1000 runs first (making the answer
    deterministic for n < 10^6), then `rounds` Miller-Rabin tests with
    bases drawn from a generator seeded by (seed, n), so repeated runs
    are reproducible.  The witness is the small factor or the failing
    Miller-Rabin base.
    """
    if n < 2:
        return n
    for p in _SMALL_PRIMES:
        if n == p:
            return None
        if n % p == 0:
            return p
    if n < _TRIAL_BOUND * _TRIAL_BOUND:
        return None

    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(f"mr:{seed}:{n}")
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return a
    return None


def is_probable_prime(n: int, rounds: int = 20, seed: int = 0) -> bool:
    """True iff n passes trial division and `rounds` Miller-Rabin rounds."""
    return find_composite_witness(n, rounds, seed) is None


def is_prime_small(n: int) -> bool:
    """Deterministic primality by trial division; valid for n < 2^32."""
    if n >= 1 << 32:
        raise ValueError("trial-division range is n < 2^32")
    if n < 2:
        return False
    for p in _u16_primes():
        if p * p > n:
            return True
        if n % p == 0:
            return n == p
    return True


def inv_mod(a: int, n: int) -> int:
    """a^-1 mod n when gcd(a, n) = 1.

    Raises ZeroDivisionError for a ≡ 0 mod n.  When 1 < gcd(a, n) < n the
    inverse does not exist and the gcd -- a nontrivial divisor of n -- is
    delivered on NotInvertibleError.factor.
    """
    if n < 2:
        raise ValueError("modulus must be >= 2")
    a %= n
    if a == 0:
        raise ZeroDivisionError(f"inverse of 0 mod {n}")
    g = math.gcd(a, n)
    if g != 1:
        raise NotInvertibleError(g, n)
    return pow(a, -1, n)


def random_probable_prime(digits: int, rng: random.Random, rounds: int = 20) -> int:
    """A seeded random probable prime with exactly `digits` decimal digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    lo = 10 ** (digits - 1)
    hi = 10 ** digits
    while True:
        n = rng.randrange(max(lo, 2), hi) | 1
        while n < hi:
            if is_probable_prime(n, rounds):
                return n
            n += 2
