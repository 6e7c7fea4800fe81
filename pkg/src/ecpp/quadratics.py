"""Binary quadratic forms, fundamental discriminants, and norm equations.

Discriminants are handled through their positive absolute value D, the
discriminant itself being -D < 0.  A fundamental -D factors uniquely into
prime discriminants q* (each -4, +8, -8, or (-1)^((q-1)/2)*q for an odd
prime q); the number of such factors t gives the genus count g = 2^(t-1),
which divides the class number h.

The norm-equation side solves p = x^2 + d*y^2 (plain Cornacchia descent,
with a word-size early-reject on the cofactor recurrence) and
4N = U^2 + D*V^2 (the variant for the norm form of discriminant -D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .modarith import jacobi, sqrt_mod

_WORD = (1 << 32) - 1  # early-reject modulus for the Cornacchia cofactor


@dataclass(frozen=True)
class QuadForm:
    """Primitive reduced quadratic form A*x^2 + B*x*y + C*y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (abs(b) == a or a == c):
            return False
        return True

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1


@dataclass(frozen=True)
class DiscriminantInfo:
    """A fundamental discriminant -d with its invariants.

    factors: the prime discriminants multiplying to -d
    t: len(factors); g: genus count 2^(t-1); h: class number
    """

    d: int
    factors: tuple[int, ...]
    t: int
    h: int
    g: int


def is_fundamental(neg_d: int) -> bool:
    """True iff neg_d < 0 is a fundamental discriminant."""
    if neg_d >= 0:
        raise ValueError("discriminant must be negative")
    d = -neg_d
    if d % 4 == 3:
        return _odd_squarefree(d)
    if d % 4 == 0 and (d // 4) % 4 in (1, 2):
        return _odd_squarefree(d)
    return False


def _odd_squarefree(d: int) -> bool:
    p = 3
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 2
    return True


def prime_discriminant(q: int):
    """The prime discriminant(s) attached to the prime q.

    Odd q gives the single value (-1)^((q-1)/2) * q.  q = 2 has three
    associated prime discriminants; the caller picks one of (-4, 8, -8).
    """
    if q == 2:
        return (-4, 8, -8)
    if q < 2 or not all(q % p for p in range(2, math.isqrt(q) + 1)):
        raise ValueError(f"{q} is not prime")
    return q if q % 4 == 1 else -q


def prime_discriminant_factors(d: int) -> tuple[int, ...]:
    """Factor the fundamental discriminant -d into prime discriminants."""
    if not is_fundamental(-d):
        raise ValueError(f"-{d} is not fundamental")
    rem = d
    while rem % 2 == 0:
        rem //= 2
    factors = []
    x, p = rem, 3
    while p * p <= x:
        if x % p == 0:
            factors.append(prime_discriminant(p))
            x //= p
        else:
            p += 2
    if x > 1:
        factors.append(prime_discriminant(x))
    prod = math.prod(factors) if factors else 1
    leftover = -d // prod
    if leftover != 1:
        if leftover not in (-4, 8, -8):
            raise ValueError(f"-{d} has no prime-discriminant factorization")
        factors.append(leftover)
    return tuple(sorted(factors, key=abs))


def reduced_forms(d: int) -> list[QuadForm]:
    """All primitive reduced forms of discriminant -d, sorted by (A, B).

    Enumerates A <= sqrt(d/3), B = d mod 2 stepped by 2 up to A, keeping
    integral C = (B^2 + d)/(4A) >= A; forms with B > 0 that are not
    ambiguous (|B| = A or A = C) contribute their (A, -B, C) mirror too.
    """
    if not is_fundamental(-d):
        raise ValueError(f"-{d} is not fundamental")
    forms = []
    for a in range(1, math.isqrt(d // 3) + 1):
        for b in range(d & 1, a + 1, 2):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
            if b and b != a and a != c:
                forms.append(QuadForm(a, -b, c))
    forms.sort(key=lambda f: (f.a, f.b))
    return forms


def _count_forms(d: int, cap: int | None = None) -> int:
    """Number of primitive reduced forms of discriminant -d.

    Same enumeration as reduced_forms but without building objects; with
    `cap` set the count aborts early and returns cap + 1 once exceeded.
    """
    count = 0
    gcd = math.gcd
    for a in range(1, math.isqrt(d // 3) + 1):
        a4 = 4 * a
        for b in range(d & 1, a + 1, 2):
            num = b * b + d
            if num % a4:
                continue
            c = num // a4
            if c < a:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            count += 1 if (b == 0 or b == a or a == c) else 2
            if cap is not None and count > cap:
                return count
    return count


_H_CACHE: dict[int, int] = {}
_H_EXCEEDS: dict[int, int] = {}  # d -> a cap its class number is known to exceed


@lru_cache(maxsize=None)
def class_number(d: int) -> int:
    if not is_fundamental(-d):
        raise ValueError(f"-{d} is not fundamental")
    h = _H_CACHE.get(d)
    if h is None:
        h = _count_forms(d)
        _H_CACHE[d] = h
    return h


def class_number_at_most(d: int, cap: int) -> int | None:
    """h(-d) when h <= cap, else None; avoids full enumeration of big-h d."""
    h = _H_CACHE.get(d)
    if h is not None:
        return h if h <= cap else None
    if _H_EXCEEDS.get(d, -1) >= cap:
        return None
    h = _count_forms(d, cap)
    if h <= cap:
        _H_CACHE[d] = h
        return h
    _H_EXCEEDS[d] = max(cap, _H_EXCEEDS.get(d, -1))
    return None


def genus_count(d: int) -> int:
    return 1 << (len(prime_discriminant_factors(d)) - 1)


def discriminant_info(d: int) -> DiscriminantInfo:
    factors = prime_discriminant_factors(d)
    return DiscriminantInfo(
        d=d, factors=factors, t=len(factors), h=class_number(d),
        g=1 << (len(factors) - 1),
    )


def class_number_table(limit: int) -> dict[int, int]:
    """h(-d) for every fundamental d <= limit, from one sweep over forms.

    A single pass over reduced (A, B, C) triples is much faster than
    calling reduced_forms per discriminant when tabulating a range.
    """
    counts = [0] * (limit + 1)
    for a in range(1, math.isqrt(limit // 3) + 1):
        for b in range(a + 1):
            cmax = (limit + b * b) // (4 * a)
            for c in range(a, cmax + 1):
                d = 4 * a * c - b * b
                if d < 3 or math.gcd(math.gcd(a, b), c) != 1:
                    continue
                counts[d] += 1 if (b == 0 or b == a or a == c) else 2
    return {d: counts[d] for d in range(3, limit + 1) if is_fundamental(-d)}


def cornacchia(d: int, p: int, t: int):
    """Solve p = r^2 + d*w^2 from t with t^2 ≡ -d (mod p), p/2 < t < p.

    Runs the half-gcd remainder descent until the remainder drops to
    sqrt(p).  The cofactor recurrence w_i = w_{i-2} + a_i * w_{i-1} is
    carried mod 2^32 only; the full-precision w is replayed just when the
    final test r^2 + d*w^2 = p survives mod 2^32 (false accepts occur with
    probability 2^-32 and are weeded out by the exact recheck).

    Returns (r, w) or None when p is not represented.
    """
    if d < 1 or p < 2:
        raise ValueError("need d >= 1 and p >= 2")
    if not (2 * t > p and t < p):
        raise ValueError(f"t = {t} not in (p/2, p)")
    if (t * t + d) % p:
        raise ValueError(f"t^2 != -d mod p for t = {t}")
    sq = math.isqrt(p)
    r_prev, r = p, t
    w_prev, w = 0, 1
    quotients = []
    while r > sq:
        q, r_next = divmod(r_prev, r)
        quotients.append(q)
        w_prev, w = w, (w_prev + q * w) & _WORD
        r_prev, r = r, r_next
    if (r * r + d * w * w - p) & _WORD:
        return None
    w_prev, w = 0, 1
    for q in quotients:
        w_prev, w = w, w_prev + q * w
    if r * r + d * w * w != p:
        return None
    return r, w


def solve_4n(D: int, N: int, root: int | None = None):
    """Solve 4N = U^2 + D*V^2 with U, V > 0, or return None.

    `root` is any square root of -D mod N (computed here when omitted;
    None is returned straight away if -D is a non-residue).  The root is
    lifted to t ≡ D (mod 2) -- so t^2 ≡ -D (mod 4N) -- by replacing it
    with N - root when the parity is wrong, then the remainder descent
    runs from (2N, t) down to 2*sqrt(N) and the candidate U is accepted
    iff (4N - U^2)/D is a nonzero perfect square.

    The descent is deterministic: for (D, N) = (3, 7) it yields (5, 1)
    among the three essentially different representations of 28.
    """
    if D < 1 or N < 2:
        raise ValueError("need D >= 1 and N >= 2")
    if root is None:
        if N < 3 or N % 2 == 0 or jacobi(-D % N, N) != 1:
            return None
        root = sqrt_mod(-D % N, N)
    else:
        root %= N
        if (root * root + D) % N:
            raise ValueError("root^2 != -D mod N")
    t = root if (root - D) % 2 == 0 else N - root
    if t == 0:
        return None
    a, b = 2 * N, t
    bound = math.isqrt(4 * N)
    while b > bound:
        a, b = b, a % b
    if b == 0:
        return None
    rem = 4 * N - b * b
    if rem % D:
        return None
    v = math.isqrt(rem // D)
    if v == 0 or v * v * D != rem:
        return None
    return b, v
