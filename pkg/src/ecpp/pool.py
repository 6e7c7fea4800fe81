"""Square-root pool and candidate discriminant generation.

Instead of computing sqrt(-D) mod N per discriminant, the prover computes
square roots once for a basis of small prime discriminants q* with
(q*/N) = +1 and multiplies them: a subset whose q* product is a negative
fundamental discriminant -D yields sqrt(-D) as the product of the stored
roots (the squares multiply to exactly -D, so no sign correction is ever
needed for negative products; positive products are discarded).

Candidates are then ranked by the splitting heuristic: a prime splits
completely for -D with probability g/h once all (q*/N) = +1, so sorting
by (h/g, h, D) and cutting the list when the accumulated g/h reaches the
requested budget keeps expected work flat across discriminants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .modarith import CompositeDetectedError, SqrtFailedError, jacobi, sqrt_mod
from .quadratics import (DiscriminantInfo, class_number, class_number_at_most,
                         is_fundamental)


@dataclass(frozen=True)
class SquareRootPool:
    n: int
    entries: tuple[tuple[int, int], ...]  # (q*, s) with s^2 ≡ q* mod n, by |q*|


@dataclass(frozen=True)
class CandidateD:
    info: DiscriminantInfo
    sqrt_d: int  # square root of -D mod N
    weight: Fraction  # h/g, the expected number of candidates per split


def prime_discriminant_stream():
    """Prime discriminants by increasing absolute value: -3, -4, 5, -7, 8, -8, ..."""
    yield -3
    yield -4
    yield 5
    yield -7
    yield 8
    yield -8
    q = 9
    while True:
        if all(q % p for p in range(3, q) if p * p <= q):
            yield q if q % 4 == 1 else -q
        q += 2


def build_pool(n: int, r: int) -> SquareRootPool:
    """The r smallest-|q*| prime discriminants splitting mod n, with roots.

    Requires n an odd probable prime > 3.  A q* sharing a factor with n,
    or a square-root failure, is arithmetic evidence that n is composite
    and raises CompositeDetectedError.
    """
    if n <= 3 or n % 2 == 0:
        raise ValueError("pool modulus must be an odd probable prime > 3")
    entries = []
    for qstar in prime_discriminant_stream():
        if len(entries) >= r:
            break
        sym = jacobi(qstar % n, n)
        if sym == 0:
            raise CompositeDetectedError(n, witness=abs(qstar), reason="shared factor")
        if sym != 1:
            continue
        try:
            s = sqrt_mod(qstar % n, n)
        except SqrtFailedError as exc:
            raise CompositeDetectedError(n, witness=qstar, reason=str(exc)) from exc
        entries.append((qstar, s))
    return SquareRootPool(n, tuple(entries))


def combine(pool: SquareRootPool, max_subset_size: int,
            d_max: int | None = None,
            h_cap: int | None = None) -> list[CandidateD]:
    """All candidate discriminants from subsets of the pool.

    A subset qualifies when its q* product is negative and fundamental:
    distinct prime discriminants make that automatic unless two of
    -4, 8, -8 collide, so one even factor at most is the whole test.
    The subset is the prime-discriminant factorization of -D, so t and g
    come for free; h is computed by form enumeration and cached across
    calls.  With h_cap set, subsets whose class number exceeds the cap are
    dropped without being enumerated to the end (the scheduler would
    discard them anyway).
    """
    if max_subset_size < 1:
        raise ValueError("max_subset_size must be >= 1")
    n = pool.n
    seen: dict[int, CandidateD] = {}
    for size in range(1, max_subset_size + 1):
        for subset in combinations(pool.entries, size):
            prod = 1
            root = 1
            evens = 0
            for qstar, s in subset:
                prod *= qstar
                root = root * s % n
                evens += qstar % 2 == 0
            if prod >= 0 or evens > 1:
                continue
            d = -prod
            if d_max is not None and d > d_max:
                continue
            if d in seen:
                continue
            # distinct prime discriminants with at most one even factor
            # multiply to a fundamental discriminant; no squarefree scan needed
            assert root * root % n == (-d) % n
            if h_cap is None:
                h = class_number(d)
            else:
                h = class_number_at_most(d, h_cap)
                if h is None:
                    continue
            factors = tuple(sorted((q for q, _ in subset), key=abs))
            g = 1 << (size - 1)
            info = DiscriminantInfo(d=d, factors=factors, t=size, h=h, g=g)
            seen[d] = CandidateD(info=info, sqrt_d=root, weight=Fraction(h, g))
    return sorted(seen.values(), key=lambda c: c.info.d)


def schedule(cands: list[CandidateD], budget: float,
             h_max: int | None = None) -> list[CandidateD]:
    """Order candidates by (h/g, h, D) and truncate at the g/h budget.

    Keeps candidates with h <= h_max, sorts ascending, and returns the
    shortest prefix whose summed g/h reaches `budget` (everything, if the
    sum never gets there).
    """
    kept = [c for c in cands if h_max is None or c.info.h <= h_max]
    kept.sort(key=lambda c: (c.weight, c.info.h, c.info.d))
    total = Fraction(0)
    for i, cand in enumerate(kept):
        total += 1 / cand.weight
        if total >= budget:
            return kept[: i + 1]
    return kept
