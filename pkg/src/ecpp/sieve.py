"""Smooth-cofactor extraction for candidate curve orders m = N+1-U.

A SieveTable holds r_i = (N+1) mod p_i for all primes p_i <= B.  Given U,
both m = N+1-U and m' = N+1+U are sieved with just the single-word
residues u_i = U mod p_i: p_i | m iff u_i = r_i and p_i | m' iff
u_i = -r_i mod p_i.  Primes with (-D/p_i) = -1 are skipped -- they cannot
divide the order of a curve with CM by -D except to an even power, so an
odd-power appearance is compositeness evidence (CompositeSuspectedError,
raised only when check_filtered is on).

When the chain steps from N to N' = (N+1-U)/c, update_table rebuilds the
residues in O(1) word operations per prime via
r_i' = (r_i - u_i)/c + 1 mod p_i instead of dividing N'+1 afresh.
"""

from __future__ import annotations

from dataclasses import dataclass

from .modarith import kronecker, primes_up_to


class FullySmoothError(Exception):
    """m factored completely over the sieve primes (N' = 1)."""


class CompositeSuspectedError(Exception):
    """A prime inert for -D divides m to an odd power; N is suspect."""

    def __init__(self, n: int, prime: int, m: int):
        super().__init__(f"inert prime {prime} divides {m} to an odd power (N = {n})")
        self.n = n
        self.prime = prime
        self.m = m


@dataclass(frozen=True)
class SieveTable:
    n: int
    bound: int
    primes: tuple[int, ...]
    residues: tuple[int, ...]  # residues[i] = (n+1) mod primes[i]


@dataclass(frozen=True)
class FactorResult:
    c: int
    nprime: int
    factors: dict[int, int]  # prime -> exponent, the factorization of c


def residue_table(n: int, bound: int) -> SieveTable:
    """Table of (n+1) mod p for all primes p <= bound."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    primes = tuple(primes_up_to(bound))
    return SieveTable(n, bound, primes, tuple((n + 1) % p for p in primes))


def sieve_m(U: int, table: SieveTable, D: int | None,
            check_filtered: bool = False) -> tuple[list[int], list[int]]:
    """Hit lists of sieve primes dividing m = N+1-U and m' = N+1+U.

    D = None disables the inert-prime filter.  With check_filtered on,
    filtered primes are trial-divided against m and m' anyway and an
    odd-power hit raises CompositeSuspectedError.
    """
    hits_minus: list[int] = []
    hits_plus: list[int] = []
    for p, r in zip(table.primes, table.residues):
        u = U % p
        if D is not None and kronecker(-D, p) == -1:
            if check_filtered:
                _check_inert(table.n, p, U)
            continue
        if u == r:
            hits_minus.append(p)
        if (u + r) % p == 0:
            hits_plus.append(p)
    return hits_minus, hits_plus


def _check_inert(n: int, p: int, U: int) -> None:
    for m in (n + 1 - U, n + 1 + U):
        if m == 0 or m % p:
            continue
        v, t = 0, m
        while t % p == 0:
            t //= p
            v += 1
        if v % 2:
            raise CompositeSuspectedError(n, p, m)


def extract_cofactor(m: int, hits: list[int], bound: int) -> FactorResult:
    """Split m = c * N' with c the full power product of the hit primes.

    The factor 2 is always stripped (whether or not 2 made the hit list;
    candidate orders from the norm equation carry a forced 2-part whenever
    they are even).  Raises FullySmoothError when nothing remains.
    """
    factors: dict[int, int] = {}
    rest = m
    for p in sorted(set(hits) | {2}):
        if p > bound:
            raise ValueError(f"hit prime {p} exceeds bound {bound}")
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            factors[p] = e
    if rest == 1:
        raise FullySmoothError(f"{m} is {bound}-smooth")
    return FactorResult(c=m // rest, nprime=rest, factors=factors)


def early_abort_ok(n: int, nprime: int, delta: int) -> bool:
    """True iff the step contracts enough: N >= N' * 2^delta."""
    if nprime < 1:
        raise ValueError("nprime must be >= 1")
    return n >= nprime << delta


def update_table(table: SieveTable, U: int, c: int) -> SieveTable:
    """Residue table for N' = (N+1-U)/c, derived from the table for N.

    Entries with p | c fall back to direct division by N'+1; all others
    use the word-size update (r_i - u_i)/c + 1 mod p_i.  The result is
    identical to residue_table(N', bound).
    """
    m = table.n + 1 - U
    if c < 1 or m % c:
        raise ValueError("c must divide N+1-U")
    nprime = m // c
    residues = []
    for p, r in zip(table.primes, table.residues):
        if c % p == 0:
            residues.append((nprime + 1) % p)
        else:
            residues.append(((r - U) * pow(c, -1, p) + 1) % p)
    return SieveTable(nprime, table.bound, table.primes, tuple(residues))
