"""Hilbert class polynomials by high-precision complex evaluation.

H_D(X) is the monic integer polynomial whose roots are the j-invariant
values at the CM points tau = (-B + sqrt(-D))/(2A), one per reduced form
(A, B, C) of discriminant -D.  j is evaluated through the eta quotient

    F(tau) = 2^12 * q * (P(q^2) / P(q))^24,    q = exp(2*pi*i*tau),
    j(tau) = (F + 16)^3 / F,

where P(q) = prod(1 - q^n) is summed as the pentagonal-number series.
That series has unit coefficients at distinct exponents, so cutting it
after exponent E leaves an error of at most |q|^(E+1)/(1 - |q|) -- a
proven tail bound, and the basis for the certified working precision.

Mirror forms (A, B, C) / (A, -B, C) give conjugate roots, so each pair is
expanded as one real quadratic X^2 - 2*Re(j)*X + |j|^2 and ambiguous forms
(B = 0, B = A, or A = C) as a real linear factor; the product therefore
has structurally real coefficients.  Coefficients are rounded to nearest
integers and must land within 1/4 of one; otherwise the whole computation
retries at doubled precision (at most 3 times) before giving up.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import mpmath
from mpmath import mp

from .quadratics import class_number, reduced_forms

_J_GUARD = 32  # working-precision pad for a single j evaluation
_MIN_IM = 0.5  # certification limit: below this |q| error analysis is void


class PrecisionExhaustedError(ArithmeticError):
    """The requested accuracy cannot be certified for this input."""


class RoundingUncertainError(ArithmeticError):
    """A coefficient landed >= 1/4 away from the nearest integer."""


@dataclass(frozen=True)
class BigComplex:
    """Arbitrary-precision complex value with its nominal precision in bits."""

    re: mpmath.mpf
    im: mpmath.mpf
    precision: int

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be >= 64 bits")

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(self.re, self.im)


@dataclass(frozen=True)
class ClassPolynomial:
    """H_D as exact integer coefficients, leading (monic) term first."""

    d: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def to_text(self) -> str:
        lines = [str(self.d), str(self.degree)]
        lines.extend(str(c) for c in self.coeffs)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ClassPolynomial":
        parts = text.split()
        if len(parts) < 3:
            raise ValueError("malformed class polynomial file")
        d, degree = int(parts[0]), int(parts[1])
        coeffs = tuple(int(x) for x in parts[2:])
        if len(coeffs) != degree + 1 or coeffs[0] != 1:
            raise ValueError("class polynomial file is inconsistent")
        return cls(d, coeffs)


def _pentagonal_series(q: mpmath.mpc) -> mpmath.mpc:
    """P(q) = prod(1 - q^n), truncated with a proven tail bound at mp.prec."""
    absq = abs(q)
    half = mp.mpf(1) / 2
    if absq >= half:
        raise PrecisionExhaustedError("|q| too large for the series bound")
    # Smallest cutoff E with |q|^E / (1 - |q|) < 2^-prec; every omitted
    # exponent exceeds E, so the discarded tail is below 2^-prec.
    cutoff = int(mp.ceil(
        (mp.prec * mp.log(2) - mp.log(1 - absq)) / (-mp.log(absq))
    )) + 1
    total = mp.mpf(1)
    sign = -1
    k = 1
    while k * (3 * k - 1) // 2 <= cutoff:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        total += sign * (q ** e1 + q ** e2)
        sign = -sign
        k += 1
    return total


def _j_mpc(tau: mpmath.mpc) -> mpmath.mpc:
    """j(tau) at the current working precision."""
    if tau.imag < _MIN_IM:
        raise PrecisionExhaustedError(
            f"Im(tau) = {tau.imag} below the certified region ({_MIN_IM})")
    q = mp.expjpi(2 * tau)
    f = 4096 * q * (_pentagonal_series(q * q) / _pentagonal_series(q)) ** 24
    return (f + 16) ** 3 / f


def j_invariant(tau: BigComplex, precision: int) -> BigComplex:
    """j at tau, accurate to a few ulps at `precision` bits."""
    if precision < 64:
        raise ValueError("precision must be >= 64 bits")
    if tau.im <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    with mp.workprec(precision + _J_GUARD):
        value = _j_mpc(tau.to_mpc())
        return BigComplex(value.real, value.imag, precision)


def precision_for(d: int) -> int:
    """Working precision for H_D: the height estimate plus 33 + h guard bits.

    The bit size of the largest coefficient is well approximated by
    pi*sqrt(D)/ln(2) * sum(1/A) over the reduced forms; the guard absorbs
    accumulated rounding from the h-factor product expansion.
    """
    forms = reduced_forms(d)
    height = math.pi * math.sqrt(d) / math.log(2) * sum(1.0 / f.a for f in forms)
    return math.ceil(height) + 33 + len(forms)


def _poly_mul_real(p: list, q: list) -> list:
    out = [mp.mpf(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _expand_at(d: int, prec: int) -> tuple[int, ...]:
    forms = reduced_forms(d)
    with mp.workprec(prec):
        sqrt_d = mp.sqrt(d)
        poly = [mp.mpf(1)]
        for f in forms:
            if f.b < 0:
                continue  # folded into the conjugate quadratic below
            tau = mpmath.mpc(-f.b, sqrt_d) / (2 * f.a)
            j = _j_mpc(tau)
            if f.b == 0 or f.b == f.a or f.a == f.c:
                # Ambiguous form: the root is real in exact arithmetic.
                if abs(j.imag) >= mp.mpf(1) / 4:
                    raise RoundingUncertainError(
                        f"imaginary residue {j.imag} on an ambiguous form of D={d}")
                factor = [-j.real, mp.mpf(1)]
            else:
                factor = [abs(j) ** 2, -2 * j.real, mp.mpf(1)]
            poly = _poly_mul_real(poly, factor)
        coeffs = []
        for value in reversed(poly):  # leading term first
            nearest = mp.nint(value)
            if abs(value - nearest) >= mp.mpf(1) / 4:
                raise RoundingUncertainError(
                    f"coefficient of H_{-d} is {value}, not near an integer")
            coeffs.append(int(nearest))
    if coeffs[0] != 1 or len(coeffs) != len(forms) + 1:
        raise RoundingUncertainError(f"H_{-d} expansion lost its shape")
    return tuple(coeffs)


def hilbert_class_poly(d: int, precision: int | None = None) -> ClassPolynomial:
    """H_D with exact integer coefficients.

    Starts from precision_for(d) (or the given override) and doubles the
    precision on a rounding failure, at most 3 times.  The rounded result
    is independent of the starting precision.
    """
    prec = precision if precision is not None else precision_for(d)
    last: RoundingUncertainError | None = None
    for _ in range(4):
        try:
            return ClassPolynomial(d, _expand_at(d, prec))
        except RoundingUncertainError as exc:
            last = exc
            prec *= 2
    raise last


def cache_path(d: int, directory: str) -> str:
    return os.path.join(directory, f"HD_{d}.txt")


def save_cache(poly: ClassPolynomial, directory: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = cache_path(poly.d, directory)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(poly.to_text())
    return path


def load_cache(d: int, directory: str) -> ClassPolynomial | None:
    path = cache_path(d, directory)
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as fh:
        poly = ClassPolynomial.from_text(fh.read())
    if poly.d != d or poly.degree != class_number(d):
        raise ValueError(f"cache file {path} does not match D={d}")
    return poly
