import math
import random

import pytest

from ecpp.curve import (INFINITY, CurveModN, NoPointFoundError,
                        OrderMismatchError, ProjPoint, SingularCurveError,
                        curve_from_j, divpoly_eval, find_point, on_curve,
                        order_check, pseudo_add, quarter_root_bound_ok,
                        scalar_mul)
from ecpp.modarith import (CompositeDetectedError, is_probable_prime, jacobi,
                           primes_up_to)
from oracles import curve_order


def _all_points(E, n):
    pts = [INFINITY]
    for x in range(n):
        for y in range(n):
            P = ProjPoint(x, y, 1)
            if on_curve(P, E, n):
                pts.append(P)
    return pts


def test_curve_from_j_generic_example():
    curves = curve_from_j(3, 13)
    assert curves[0] == CurveModN(1, 5)
    assert len(curves) == 2
    # the twist uses the smallest non-residue times k
    assert curves[1].a != curves[0].a


def test_curve_from_j_special_shapes():
    assert all(c.b == 0 for c in curve_from_j(1728, 13))
    assert len(curve_from_j(1728, 13)) == 4
    assert all(c.a == 0 for c in curve_from_j(0, 13))
    assert len(curve_from_j(0, 13)) == 6


def test_curve_from_j_twists_cover_distinct_orders():
    p = 13
    orders = {curve_order(c.a, c.b, p) for c in curve_from_j(3, p)}
    assert len(orders) == 2
    assert sum(orders) == 2 * p + 2


def test_curve_from_j_singular_exposure():
    # 1728 - j0 shares the factor 7 with 35
    with pytest.raises(SingularCurveError) as exc:
        curve_from_j(1728 - 7, 35)
    assert exc.value.factor in (5, 7, 35)


def test_pseudo_add_identity_and_inverse():
    E, n = CurveModN(2, 3), 97
    P = find_point(E, n)
    assert pseudo_add(P, INFINITY, E, n).point == P
    assert pseudo_add(INFINITY, P, E, n).point == P
    negP = ProjPoint(P.x, (-P.y) % n, 1)
    assert pseudo_add(P, negP, E, n).point.is_infinity


def test_pseudo_add_two_torsion_doubling():
    # y = 0 point doubles to the identity
    E, n = CurveModN(1, 0), 5
    P = ProjPoint(0, 0, 1)
    assert on_curve(P, E, n)
    assert pseudo_add(P, P, E, n).point.is_infinity


def test_pseudo_add_factor_channel_mod_35():
    E, n = CurveModN(1, 0), 35
    pts = [P for P in _all_points(E, n) if not P.is_infinity]
    hit = None
    for P in pts:
        for Q in pts:
            if P.x != Q.x and (P.x - Q.x) % 5 == 0:
                hit = (P, Q)
                break
        if hit:
            break
    assert hit is not None
    res = pseudo_add(*hit, E, n)
    assert not res.is_point
    assert res.factor == 5


def test_scalar_mul_consistency():
    E, n = CurveModN(2, 3), 97
    P = find_point(E, n)
    assert scalar_mul(1, P, E, n).point == P
    assert scalar_mul(2, P, E, n).point == pseudo_add(P, P, E, n).point
    order = curve_order(2, 3, 97)
    assert scalar_mul(order, P, E, n).point.is_infinity
    with pytest.raises(ValueError):
        scalar_mul(0, P, E, n)


def _reduce(P, p):
    if P.is_infinity:
        return INFINITY
    return ProjPoint(P.x % p, P.y % p, 1)


def test_reduction_compatibility_mod_composite(rng):
    # pseudo-addition mod pq reduces to the honest group law mod each prime
    p, q = 5, 7
    n = p * q
    curves = []
    for a in range(8):
        for b in range(8):
            if math.gcd((4 * a ** 3 + 27 * b ** 2) % n, n) == 1:
                curves.append(CurveModN(a, b))
    points = {E: _all_points(E, n) for E in curves}
    for _ in range(500):
        E = rng.choice(curves)
        P = rng.choice(points[E])
        Q = rng.choice(points[E])
        res = pseudo_add(P, Q, E, n)
        for f in (p, q):
            Ef = CurveModN(E.a % f, E.b % f)
            expected = pseudo_add(_reduce(P, f), _reduce(Q, f), Ef, f)
            assert expected.is_point  # prime modulus: the honest group law
            if res.is_point:
                assert _reduce(res.point, f) == expected.point
        if not res.is_point:
            assert res.factor in (p, q) and n % res.factor == 0


def test_divpoly_base_cases(rng):
    for _ in range(100):
        n = 10007
        a, b = rng.randrange(n), rng.randrange(n)
        x, y = rng.randrange(n), rng.randrange(1, n)
        E = CurveModN(a, b)
        P = ProjPoint(x, y, 1)
        assert divpoly_eval(1, P, E, n).psi == 1
        assert divpoly_eval(2, P, E, n).psi == 2 * y % n
        psi3 = (3 * x ** 4 + 6 * a * x * x + 12 * b * x - a * a) % n
        assert divpoly_eval(3, P, E, n).psi == psi3


def test_divpoly_matches_scalar_multiplication(rng):
    primes = [p for p in primes_up_to(10000) if p > 500]
    checked = 0
    while checked < 120:
        n = rng.choice(primes)
        a, b = rng.randrange(n), rng.randrange(n)
        if (4 * a ** 3 + 27 * b ** 2) % n == 0:
            continue
        E = CurveModN(a, b)
        try:
            P = find_point(E, n, start=rng.randrange(n))
        except NoPointFoundError:
            continue
        m = rng.randrange(1, 1 << 16)
        triple = divpoly_eval(m, P, E, n)
        direct = scalar_mul(m, P, E, n).point
        if triple.psi == 0:
            assert direct.is_infinity
        else:
            assembled = ProjPoint(triple.phi * triple.psi % n, triple.omega,
                                  pow(triple.psi, 3, n)).normalize(n)
            assert not direct.is_infinity
            assert assembled == direct
        checked += 1


def test_divpoly_rejects_bad_point():
    E = CurveModN(1, 1)
    with pytest.raises(ValueError):
        divpoly_eval(0, ProjPoint(1, 1, 1), E, 13)
    with pytest.raises(ValueError):
        divpoly_eval(3, INFINITY, E, 13)


def test_find_point_examples():
    P = find_point(CurveModN(0, 1), 7)
    assert P == ProjPoint(0, 1, 1)
    # y^2 = x^3 + x over F_5 has only 2-torsion: every ordinate is 0
    with pytest.raises(NoPointFoundError):
        find_point(CurveModN(1, 0), 5)
    # scan start is honored and wraps
    Q = find_point(CurveModN(0, 1), 7, start=1)
    assert Q.x >= 1 and on_curve(Q, CurveModN(0, 1), 7)


def test_quarter_root_bound_exactness():
    # against high-precision arithmetic on a dense small grid
    import mpmath
    with mpmath.mp.workprec(120):
        for n in range(2, 400):
            for npr in range(2, 60):
                truth = npr > (mpmath.mpf(n) ** mpmath.mpf(0.25) + 1) ** 2
                assert quarter_root_bound_ok(n, npr) == truth, (n, npr)


def _toy_cases(n, want_c=None):
    """Yield (E, c, nprime) with #E = c * nprime, nprime prime above the
    quarter-root bound, found by exhaustive point counting."""
    for a in range(1, 60):
        for b in range(1, 60):
            if (4 * a ** 3 + 27 * b ** 2) % n == 0:
                continue
            order = curve_order(a, b, n)
            nprime, c = order, 1
            for f in (2, 3, 5, 7, 11, 13):
                while nprime % f == 0:
                    nprime //= f
                    c *= f
            if nprime < 2 or not is_probable_prime(nprime):
                continue
            if not quarter_root_bound_ok(n, nprime):
                continue
            if want_c is not None and c != want_c:
                continue
            yield CurveModN(a, b), c, nprime


def _checked_point(n, E, c, nprime):
    start = 0
    for _ in range(8):
        P = find_point(E, n, start=start)
        start = P.x + 1
        try:
            assert order_check(n, (c, nprime), E, P)
            return P
        except OrderMismatchError:
            continue
    return None


def test_order_check_toy_true_case():
    n = 211
    for E, c, nprime in _toy_cases(n):
        P = _checked_point(n, E, c, nprime)
        if P is not None:
            # exhaustive count is the oracle: the certified order is real
            assert c * nprime == curve_order(E.a, E.b, n)
            return
    raise AssertionError("no toy case found")


def test_order_check_detects_tampered_order():
    n = 211
    for E, c, nprime in _toy_cases(n):
        P = _checked_point(n, E, c, nprime)
        if P is None:
            continue
        with pytest.raises((OrderMismatchError, ValueError)):
            order_check(n, (c, nprime + 1), E, P)
        return
    raise AssertionError("no toy case found")


def test_order_check_rejects_bad_inputs():
    n = 211
    E, c, nprime = next(iter(_toy_cases(n)))
    with pytest.raises(ValueError):
        order_check(n, (c, 3), E, find_point(E, n))  # below quarter-root bound
    with pytest.raises(ValueError):
        order_check(n, (c, nprime), E, INFINITY)


def test_order_check_strict_cofactor_two():
    # c = 2 additionally runs the division-polynomial cross-check
    for n in (211, 223, 227, 229, 233, 239, 241, 251):
        for E, c, nprime in _toy_cases(n, want_c=2):
            if _checked_point(n, E, 2, nprime) is not None:
                return
    raise AssertionError("no toy case found")
