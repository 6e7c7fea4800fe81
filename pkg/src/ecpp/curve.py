"""Elliptic curve arithmetic over Z/NZ with a factor channel.

Points are projective triples; everything this module produces is either
the identity O = (0:1:0) or affine (x:y:1).  Addition uses the affine
chord-and-tangent formulas: any inversion that fails modulo a composite N
surfaces the offending gcd as a PseudoResult factor instead of a point,
which is exactly how the primality machinery discovers divisors.

Division polynomials phi_m, psi_m, omega_m are evaluated at a point by
the doubling recurrences (an O(log m) ladder over a sliding window of
consecutive psi values), giving the alternative scalar multiple
[m](x, y) = (phi*psi : omega : psi^3) used as a cross-check when the
certified cofactor is 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .modarith import (CompositeDetectedError, NotInvertibleError,
                       SqrtFailedError, inv_mod, jacobi, sqrt_mod)


class SingularCurveError(ArithmeticError):
    """Curve discriminant shares a factor with N."""

    def __init__(self, factor: int, n: int):
        super().__init__(f"singular curve mod {n}: factor {factor}")
        self.factor = factor
        self.n = n


class OrderMismatchError(Exception):
    """The cofactor/order conditions failed for this point or curve."""


class NoPointFoundError(Exception):
    """Point scan exhausted its trial budget."""


@dataclass(frozen=True)
class CurveModN:
    a: int
    b: int


@dataclass(frozen=True)
class ProjPoint:
    x: int
    y: int
    z: int

    @property
    def is_infinity(self) -> bool:
        return self.z == 0

    def normalize(self, n: int) -> "ProjPoint":
        if self.z == 0:
            return INFINITY
        if self.z == 1:
            return self
        inv = inv_mod(self.z, n)
        return ProjPoint(self.x * inv % n, self.y * inv % n, 1)


INFINITY = ProjPoint(0, 1, 0)


@dataclass(frozen=True)
class PseudoResult:
    """Either a point or a nontrivial factor of N, never both."""

    point: ProjPoint | None = None
    factor: int | None = None

    def __post_init__(self):
        if (self.point is None) == (self.factor is None):
            raise ValueError("exactly one of point/factor must be set")

    @property
    def is_point(self) -> bool:
        return self.point is not None


@dataclass(frozen=True)
class DivPolyTriple:
    phi: int
    psi: int
    omega: int


def on_curve(P: ProjPoint, E: CurveModN, n: int) -> bool:
    x, y, z = P.x % n, P.y % n, P.z % n
    return (y * y * z - (x ** 3 + E.a * x * z * z + E.b * z ** 3)) % n == 0


def pseudo_add(P: ProjPoint, Q: ProjPoint, E: CurveModN, n: int) -> PseudoResult:
    """Chord-and-tangent sum of two points in {O} ∪ affine."""
    for pt in (P, Q):
        if pt.z not in (0, 1):
            raise ValueError("pseudo_add expects normalized points")
    if P.is_infinity:
        return PseudoResult(point=Q)
    if Q.is_infinity:
        return PseudoResult(point=P)
    x1, y1, x2, y2 = P.x % n, P.y % n, Q.x % n, Q.y % n
    if x1 == x2:
        if (y1 + y2) % n == 0:
            return PseudoResult(point=INFINITY)
        if y1 != y2:
            # On-curve points with equal x must have y2 = ±y1 modulo every
            # prime factor, so this branch forces a nontrivial gcd.
            d = math.gcd(y1 - y2, n)
            if d in (1, n):
                raise ValueError("inputs are not on the curve")
            return PseudoResult(factor=d)
        num, den = (3 * x1 * x1 + E.a) % n, 2 * y1 % n
    else:
        num, den = (y2 - y1) % n, (x2 - x1) % n
    try:
        lam = num * inv_mod(den, n) % n
    except NotInvertibleError as exc:
        return PseudoResult(factor=exc.factor)
    x3 = (lam * lam - x1 - x2) % n
    y3 = (lam * (x1 - x3) - y1) % n
    return PseudoResult(point=ProjPoint(x3, y3, 1))


def scalar_mul(m: int, P: ProjPoint, E: CurveModN, n: int) -> PseudoResult:
    """[m]P by binary double-and-add; the factor channel propagates."""
    if m < 1:
        raise ValueError("m must be >= 1")
    result = INFINITY
    acc = P
    while m:
        if m & 1:
            r = pseudo_add(result, acc, E, n)
            if not r.is_point:
                return r
            result = r.point
        m >>= 1
        if m:
            r = pseudo_add(acc, acc, E, n)
            if not r.is_point:
                return r
            acc = r.point
    return PseudoResult(point=result)


_PSI_BASE_DEPTH = 4


def divpoly_eval(m: int, P: ProjPoint, E: CurveModN, n: int) -> DivPolyTriple:
    """(phi_m, psi_m, omega_m) at the affine point P with gcd(y, N) = 1.

    Inversion failures inside the ladder raise NotInvertibleError with the
    exposed factor.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if P.z != 1:
        raise ValueError("divpoly_eval needs an affine point")
    x, y, a, b = P.x % n, P.y % n, E.a % n, E.b % n
    inv2y = inv_mod(2 * y % n, n)

    psi = {
        -1: n - 1,
        0: 0,
        1: 1,
        2: 2 * y % n,
        3: (3 * x ** 4 + 6 * a * x * x + 12 * b * x - a * a) % n,
        4: (4 * y * (x ** 6 + 5 * a * x ** 4 + 20 * b * x ** 3
                     - 5 * a * a * x * x - 4 * a * b * x
                     - 8 * b * b - a ** 3)) % n,
    }

    need: set[int] = set()
    stack = [k for k in range(m - 2, m + 3) if k > _PSI_BASE_DEPTH]
    while stack:
        k = stack.pop()
        if k in need:
            continue
        need.add(k)
        half = k >> 1
        lo = half - 1 if k & 1 else half - 2
        stack.extend(d for d in range(lo, half + 3)
                     if d > _PSI_BASE_DEPTH and d not in need)

    for k in sorted(need):
        half = k >> 1
        if k & 1:
            psi[k] = (psi[half + 2] * pow(psi[half], 3, n)
                      - psi[half - 1] * pow(psi[half + 1], 3, n)) % n
        else:
            psi[k] = (psi[half] * (psi[half + 2] * pow(psi[half - 1], 2, n)
                                   - psi[half - 2] * pow(psi[half + 1], 2, n))
                      * inv2y) % n

    phi = (x * psi[m] * psi[m] - psi[m + 1] * psi[m - 1]) % n
    omega = ((psi[m + 2] * pow(psi[m - 1], 2, n)
              - psi[m - 2] * pow(psi[m + 1], 2, n))
             * inv2y * inv_mod(2, n)) % n
    return DivPolyTriple(phi=phi, psi=psi[m], omega=omega)


def _smallest_nonresidue(n: int, also_noncube: bool = False) -> int:
    cube_exp = (n - 1) // 3 if (n - 1) % 3 == 0 else None
    c = 2
    while c < 1000:
        if math.gcd(c, n) == 1 and jacobi(c, n) == -1:
            if not also_noncube or cube_exp is None or pow(c, cube_exp, n) != 1:
                return c
        c += 1
    raise CompositeDetectedError(n, witness=None,
                                 reason="no small quadratic non-residue")


def _checked(a: int, b: int, n: int) -> CurveModN:
    d = math.gcd((4 * a * a * a + 27 * b * b) % n, n)
    if d != 1:
        raise SingularCurveError(d, n)
    return CurveModN(a % n, b % n)


def curve_from_j(j0: int, n: int) -> list[CurveModN]:
    """Curves over Z/NZ with j-invariant j0: a curve and its twists.

    Generic j0 gives the pair (3k, 2k) and its quadratic twist for
    k = j0/(1728 - j0).  j0 = 0 returns six sextic twists y^2 = x^3 + c^i
    and j0 = 1728 the four quartic twists y^2 = x^3 + c^i*x.
    """
    j0 %= n
    if j0 == 0:
        c = _smallest_nonresidue(n, also_noncube=True)
        return [_checked(0, pow(c, i, n), n) for i in range(6)]
    if j0 == 1728 % n:
        c = _smallest_nonresidue(n)
        return [_checked(pow(c, i, n), 0, n) for i in range(4)]
    try:
        k = j0 * inv_mod((1728 - j0) % n, n) % n
    except NotInvertibleError as exc:
        raise SingularCurveError(exc.factor, n) from exc
    c = _smallest_nonresidue(n)
    e1 = _checked(3 * k % n, 2 * k % n, n)
    e2 = _checked(3 * k * c * c % n, 2 * k * pow(c, 3, n) % n, n)
    return [e1, e2]


def find_point(E: CurveModN, n: int, start: int = 0) -> ProjPoint:
    """First affine point with x >= start whose ordinate is a unit.

    Scans x upward, skipping x^3+ax+b ≡ 0 (the ordinate would be 0) and
    quadratic non-residues; the square root of the first residue found
    gives (x : y : 1).  Square-root failure is compositeness evidence.
    """
    budget = math.isqrt(n) + 64
    x = start % n
    for _ in range(budget):
        s = (x * x * x + E.a * x + E.b) % n
        if s:
            if jacobi(s, n) == 1:
                try:
                    y = sqrt_mod(s, n)
                except SqrtFailedError as exc:
                    raise CompositeDetectedError(n, witness=x,
                                                 reason=str(exc)) from exc
                if math.gcd(y, n) == 1:
                    return ProjPoint(x, y, 1)
        x = (x + 1) % n
    raise NoPointFoundError(f"no usable point on y^2=x^3+{E.a}x+{E.b} mod {n}")


def quarter_root_bound_ok(n: int, nprime: int) -> bool:
    """Exact integer test of nprime > (n^(1/4) + 1)^2."""
    rhs = (nprime + 1) ** 2 + 4 * nprime - n
    return rhs > 0 and 16 * (nprime + 1) ** 2 * nprime < rhs * rhs


def order_check(n: int, mlist: tuple[int, int], E: CurveModN, P: ProjPoint) -> bool:
    """Certify the order structure m = c * N' at the point P.

    Requires Q = [c]P != O and [N']Q = O; when c = 2 the division
    polynomial conditions psi_{2N'}(P) ≡ 0 and gcd(psi_{N'}(P), N) = 1 are
    checked as a redundant oracle.  Raises OrderMismatchError when the
    point or curve is unusable (caller retries) and CompositeDetectedError
    when arithmetic exposes a factor of N.
    """
    c, nprime = mlist
    if c < 1 or nprime < 2:
        raise ValueError("need c >= 1 and nprime >= 2")
    if not quarter_root_bound_ok(n, nprime):
        raise ValueError("nprime must exceed (n^(1/4)+1)^2")
    if P.is_infinity:
        raise ValueError("P must be affine")

    qres = scalar_mul(c, P, E, n)
    if not qres.is_point:
        raise CompositeDetectedError(n, witness=qres.factor, reason="[c]P")
    Q = qres.point
    if Q.is_infinity:
        raise OrderMismatchError("[c]P = O; need another point")
    rres = scalar_mul(nprime, Q, E, n)
    if not rres.is_point:
        raise CompositeDetectedError(n, witness=rres.factor, reason="[N'][c]P")
    if not rres.point.is_infinity:
        raise OrderMismatchError("[N'][c]P != O")

    if c == 2:
        try:
            big = divpoly_eval(2 * nprime, P, E, n)
            small = divpoly_eval(nprime, P, E, n)
        except NotInvertibleError as exc:
            raise CompositeDetectedError(n, witness=exc.factor,
                                         reason="division polynomial") from exc
        if big.psi % n != 0:
            raise OrderMismatchError("psi_{2N'}(P) != 0")
        g = math.gcd(small.psi, n)
        if g == n:
            raise OrderMismatchError("psi_{N'}(P) ≡ 0")
        if g != 1:
            raise CompositeDetectedError(n, witness=g, reason="psi_{N'} gcd")
    return True
