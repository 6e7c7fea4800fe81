"""Root extraction for H_D modulo N by equal-degree splitting.

Polynomials live in (Z/NZ)[X] as ascending coefficient tuples.  find_root
first reduces H to its splitting part gcd(X^N - X, H) -- inert inputs die
there with NoRootError instead of looping -- then repeatedly splits with
gcd((X+a)^((N-1)/2) - 1, g) for seeded random a until a linear factor
appears.  Any failed leading-coefficient inversion along the way exposes
a factor of N and is reported as CompositeDetectedError.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .modarith import CompositeDetectedError, NotInvertibleError, inv_mod

_PACK_CUTOFF = 8
_MAX_SPLIT_ROUNDS = 128


class NoRootError(Exception):
    """H has no root mod N (its splitting part is trivial)."""


@dataclass(frozen=True)
class PolyModN:
    """Polynomial over Z/NZ; coeffs[i] is the X^i coefficient."""

    coeffs: tuple[int, ...]
    n: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def make(cls, coeffs, n: int) -> "PolyModN":
        return cls(tuple(_trim([c % n for c in coeffs])), n)


def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _add(p, q, n):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = c
    for i, c in enumerate(q):
        out[i] = (out[i] + c) % n
    return _trim(out)


def _sub(p, q, n):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = c
    for i, c in enumerate(q):
        out[i] = (out[i] - c) % n
    return _trim(out)


def _mul(p, q, n):
    """Product over Z/NZ via Kronecker substitution.

    The coefficient lists are packed into single large integers (one
    padded slot per coefficient) so the whole convolution rides on native
    big-integer multiplication; slot width 2*bits(N) + bits(len) + 1
    keeps every convolution sum from overflowing its slot.
    """
    if not p or not q:
        return []
    if min(len(p), len(q)) <= _PACK_CUTOFF:
        out = [0] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            if pi:
                for j, qj in enumerate(q):
                    out[i + j] += pi * qj
        return _trim([c % n for c in out])
    stride = 2 * n.bit_length() + min(len(p), len(q)).bit_length() + 1
    packed = _pack(p, stride) * _pack(q, stride)
    return _unpack(packed, stride, len(p) + len(q) - 1, n)


def _pack(p, stride):
    acc = 0
    for c in reversed(p):
        acc = (acc << stride) | c
    return acc


def _unpack(v, stride, count, n):
    mask = (1 << stride) - 1
    out = []
    for _ in range(count):
        out.append((v & mask) % n)
        v >>= stride
        if not v:
            break
    return _trim(out)


def _rem_monic(p, m, n):
    """p mod m for monic m of degree >= 1."""
    dm = len(m) - 1
    p = list(p)
    for i in range(len(p) - 1, dm - 1, -1):
        c = p[i] % n
        if c:
            p[i] = 0
            for j in range(dm):
                if m[j]:
                    p[i - dm + j] = (p[i - dm + j] - c * m[j]) % n
    return _trim([c % n for c in p[:dm]])


def _quo_monic(p, m, n):
    """p // m for monic m; the division must be exact."""
    dm = len(m) - 1
    p = list(p)
    quo = [0] * max(len(p) - dm, 0)
    for i in range(len(p) - 1, dm - 1, -1):
        c = p[i] % n
        if c:
            quo[i - dm] = c
            for j in range(dm + 1):
                p[i - dm + j] = (p[i - dm + j] - c * m[j]) % n
    if _trim(p):
        raise ArithmeticError("division was not exact")
    return _trim(quo)


def _monic(p, n):
    lead = p[-1] % n
    if lead == 1:
        return list(p)
    inv = inv_mod(lead, n)
    return _trim([c * inv % n for c in p])


def _gcd(p, q, n):
    """Monic gcd; leading-coefficient inversions may raise NotInvertibleError."""
    p, q = list(p), list(q)
    while q:
        p, q = q, _rem_monic(p, _monic(q, n), n)
    return _monic(p, n) if p else []


def _inv_series(f, k, n):
    """Power-series inverse of f mod X^k by Newton lifting; needs f[0] = 1."""
    inv = [1]
    t = 1
    while t < k:
        t = min(2 * t, k)
        fg = _mul(f[:t], inv, n)[:t]
        corr = [(-c) % n for c in fg]
        corr[0] = (corr[0] + 2) % n
        inv = _mul(inv, corr, n)[:t]
    return inv


def _reducer(mod, n):
    """Remainder-by-mod function; Newton division for big moduli.

    For a monic modulus m, p mod m = p - rev(rev(p) * rev(m)^-1 mod X^k) * m
    with k = deg p - deg m + 1, so one precomputed series inverse turns
    every reduction into two packed multiplications.
    """
    dm = len(mod) - 1
    if dm <= _PACK_CUTOFF:
        return lambda p: _rem_monic(p, mod, n)
    inv = _inv_series(list(reversed(mod)), dm, n)

    def rem(p):
        dp = len(p) - 1
        if dp < dm:
            return _trim(list(p))
        k = dp - dm + 1
        q_rev = _mul(list(reversed(p))[:k], inv[:k], n)[:k]
        q = list(reversed(q_rev))
        out = _sub(p, _mul(q, mod, n), n)
        if len(out) > dm:
            raise ArithmeticError("fast reduction failed")
        return out

    return rem


def _powmod(base, exp, mod, n):
    mod = _monic(mod, n)
    rem = _reducer(mod, n)
    result = [1]
    acc = rem(base)
    while exp:
        if exp & 1:
            result = rem(_mul(result, acc, n))
        exp >>= 1
        if exp:
            acc = rem(_mul(acc, acc, n))
    return result


def _eval(p, x, n):
    acc = 0
    for c in reversed(p):
        acc = (acc * x + c) % n
    return acc


def poly_powmod(base: PolyModN, exp: int, modpoly: PolyModN) -> PolyModN:
    """base**exp mod (N, modpoly) by square-and-multiply."""
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    if modpoly.degree < 1:
        raise ValueError("modpoly must have degree >= 1")
    n = modpoly.n
    return PolyModN(tuple(_powmod(list(base.coeffs), exp, list(modpoly.coeffs), n)), n)


def find_root_with_rounds(H: PolyModN, n: int, rng_seed: int = 0) -> tuple[int, int]:
    """One root of H mod n plus the number of splitting rounds used."""
    if H.n != n:
        raise ValueError("polynomial modulus mismatch")
    try:
        g = _monic(list(H.coeffs), n)
        if len(g) < 2:
            raise NoRootError(f"H is constant mod {n}")
        xn = _powmod([0, 1], n, g, n)
        g = _gcd(_sub(xn, [0, 1], n), g, n)
        if len(g) < 2:
            raise NoRootError(f"H has no linear factor mod {n}")
        rng = random.Random(f"cz:{rng_seed}:{n}")
        rounds = 0
        while len(g) > 2:
            rounds += 1
            if rounds > _MAX_SPLIT_ROUNDS:
                raise RuntimeError(f"splitting stalled mod {n} (composite modulus?)")
            a = rng.randrange(n)
            w = _powmod([a, 1], (n - 1) // 2, g, n)
            f = _gcd(_sub(w, [1], n), g, n)
            if len(f) < 2 or len(f) == len(g):
                continue
            g = f if 2 * len(f) <= len(g) + 1 else _quo_monic(g, f, n)
    except NotInvertibleError as exc:
        raise CompositeDetectedError(n, witness=exc.factor,
                                     reason="polynomial arithmetic") from exc
    root = -g[0] % n
    if _eval(list(H.coeffs), root, n) != 0:
        raise RuntimeError(f"extracted root fails to verify mod {n}")
    return root, rounds


def find_root(H: PolyModN, n: int, rng_seed: int = 0) -> int:
    """x0 with H(x0) ≡ 0 mod n, deterministic for a given seed."""
    return find_root_with_rounds(H, n, rng_seed)[0]
