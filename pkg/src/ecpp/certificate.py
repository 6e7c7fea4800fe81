"""Certificate chain model, text serialization, and independent verifier.

A certificate is a downward chain of steps, each one reducing "N is
prime" to "N' is prime" via a curve order check, ending in a leaf small
enough for direct trial division.  The verifier trusts nothing: every
step is re-checked arithmetically from the certified data alone (norm
equation, order bookkeeping, curve membership, then the two scalar
multiplications), so this module must never import the search machinery
-- no discriminant pools, class polynomials, root finding, or sieving.
Only the arithmetic kernels and the curve group law are used.

Wire format (line oriented UTF-8, decimal fields, bit exact)::

    ECPP-CERT 1
    STEP
    N= D= U= V= m= c= NP= a= b= x= y=   (one per line, this order)
    ...
    LEAF
    N=
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curve import (CurveModN, ProjPoint, on_curve, quarter_root_bound_ok,
                    scalar_mul)
from .modarith import is_prime_small

SMALL_THRESHOLD = 1 << 32

_HEADER = "ECPP-CERT 1"
_STEP_FIELDS = ("N", "D", "U", "V", "m", "c", "NP", "a", "b", "x", "y")


class CertificateError(ValueError):
    """Malformed certificate text."""


@dataclass(frozen=True)
class CertStep:
    kind: str  # "ecpp" or "leaf"
    n: int
    d: int = 0
    u: int = 0
    v: int = 0
    m: int = 0
    c: int = 0
    nprime: int = 0
    a: int = 0
    b: int = 0
    x: int = 0
    y: int = 0


@dataclass(frozen=True)
class Certificate:
    steps: tuple[CertStep, ...]

    @property
    def n(self) -> int:
        return self.steps[0].n


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _fail(reason: str) -> VerifyResult:
    return VerifyResult(False, reason)


def verify_step(step: CertStep) -> VerifyResult:
    """Check one chain link from its certified data alone.

    For an ecpp step this reproves "n is prime if nprime is prime": the
    norm equation 4N = U^2 + D*V^2, the order bookkeeping m = N+1-U =
    c*N', the lower bound N' > (N^(1/4)+1)^2, curve nonsingularity and
    membership of P, and finally Q = [c]P != O with [N']Q = O.  Any factor
    surfacing in the group law fails the step.
    """
    if step.kind == "leaf":
        if step.n >= SMALL_THRESHOLD:
            return _fail(f"leaf {step.n} above the trial-division threshold")
        if not is_prime_small(step.n):
            return _fail(f"leaf {step.n} is not prime")
        return VerifyResult(True)
    if step.kind != "ecpp":
        return _fail(f"unknown step kind {step.kind!r}")

    n = step.n
    if n < 5 or n % 2 == 0:
        return _fail(f"step modulus {n} is even or too small")
    if step.d < 1 or step.v < 1:
        return _fail("D and V must be positive")
    if 4 * n != step.u * step.u + step.d * step.v * step.v:
        return _fail("norm equation 4N = U^2 + D V^2 fails")
    if step.m != n + 1 - step.u:
        return _fail("m != N + 1 - U")
    if step.c < 1 or step.nprime < 2 or step.m != step.c * step.nprime:
        return _fail("m != c * N'")
    if not quarter_root_bound_ok(n, step.nprime):
        return _fail("N' is not above (N^(1/4)+1)^2")
    if not all(0 <= f < n for f in (step.a, step.b, step.x, step.y)):
        return _fail("curve/point fields out of range")
    if math.gcd((4 * step.a ** 3 + 27 * step.b ** 2) % n, n) != 1:
        return _fail("singular curve")
    E = CurveModN(step.a, step.b)
    P = ProjPoint(step.x, step.y, 1)
    if not on_curve(P, E, n):
        return _fail("point is not on the curve")
    if math.gcd(step.y, n) != 1:
        return _fail("point ordinate shares a factor with N")

    qres = scalar_mul(step.c, P, E, n)
    if not qres.is_point:
        return _fail(f"[c]P exposed factor {qres.factor}")
    if qres.point.is_infinity:
        return _fail("[c]P is the identity")
    rres = scalar_mul(step.nprime, qres.point, E, n)
    if not rres.is_point:
        return _fail(f"[N'][c]P exposed factor {rres.factor}")
    if not rres.point.is_infinity:
        return _fail("[N'][c]P is not the identity")
    return VerifyResult(True)


def verify_chain(cert: Certificate) -> VerifyResult:
    """Verify every step, the chain linkage, and the leaf."""
    if not cert.steps:
        return _fail("empty certificate")
    for i, step in enumerate(cert.steps):
        last = i == len(cert.steps) - 1
        if last != (step.kind == "leaf"):
            return _fail(f"step {i}: leaf must come last and only last")
        result = verify_step(step)
        if not result:
            return _fail(f"step {i}: {result.reason}")
        if not last and step.nprime != cert.steps[i + 1].n:
            return _fail(f"step {i}: chain breaks (N' != next N)")
    return VerifyResult(True)


def serialize(cert: Certificate) -> str:
    lines = [_HEADER]
    for step in cert.steps:
        if step.kind == "leaf":
            lines.append("LEAF")
            lines.append(f"N={step.n}")
        else:
            lines.append("STEP")
            values = (step.n, step.d, step.u, step.v, step.m, step.c,
                      step.nprime, step.a, step.b, step.x, step.y)
            lines.extend(f"{k}={v}" for k, v in zip(_STEP_FIELDS, values))
    return "\n".join(lines) + "\n"


def _take_field(lines: list[str], pos: int, key: str) -> tuple[int, int]:
    if pos >= len(lines):
        raise CertificateError(f"unexpected end of file, wanted {key}=")
    line = lines[pos]
    if not line.startswith(key + "="):
        raise CertificateError(f"line {pos + 1}: expected {key}=..., got {line!r}")
    try:
        return int(line[len(key) + 1 :]), pos + 1
    except ValueError as exc:
        raise CertificateError(f"line {pos + 1}: bad integer in {line!r}") from exc


def parse(text: str) -> Certificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _HEADER:
        raise CertificateError(f"missing {_HEADER!r} header")
    steps: list[CertStep] = []
    pos = 1
    while pos < len(lines):
        tag = lines[pos]
        pos += 1
        if tag == "LEAF":
            n, pos = _take_field(lines, pos, "N")
            steps.append(CertStep(kind="leaf", n=n))
        elif tag == "STEP":
            values = []
            for key in _STEP_FIELDS:
                value, pos = _take_field(lines, pos, key)
                values.append(value)
            steps.append(CertStep("ecpp", *values))
        else:
            raise CertificateError(f"unexpected line {tag!r}")
    if not steps:
        raise CertificateError("certificate has no steps")
    return Certificate(tuple(steps))
