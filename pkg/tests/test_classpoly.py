import math

import mpmath
import pytest
from mpmath import mp

from ecpp.classpoly import (BigComplex, ClassPolynomial,
                            PrecisionExhaustedError, RoundingUncertainError,
                            hilbert_class_poly, j_invariant, load_cache,
                            precision_for, save_cache)
from ecpp.modarith import is_probable_prime, jacobi, primes_up_to
from ecpp.quadratics import class_number, is_fundamental, solve_4n
from oracles import poly_roots_mod

H23_COEFFS = (1, 3491750, -5151296875, 12771880859375)


def _tau(re, im, prec=192):
    with mp.workprec(prec):
        return BigComplex(mp.mpf(re), mp.mpf(im), max(prec, 64))


def test_j_at_i_is_1728():
    prec = 128
    j = j_invariant(_tau(0, 1), prec)
    assert abs(j.to_mpc() - 1728) < mpmath.mpf(1728) * mpmath.mpf(2) ** -prec


def test_j_at_sixth_root_of_unity_is_zero():
    with mp.workprec(200):
        tau = BigComplex(-mp.mpf(1) / 2, mp.sqrt(3) / 2, 128)
    j = j_invariant(tau, 128)
    assert abs(j.to_mpc()) < mpmath.mpf(2) ** -100


def test_j_heegner_163():
    with mp.workprec(300):
        tau = BigComplex(-mp.mpf(1) / 2, mp.sqrt(163) / 2, 200)
    j = j_invariant(tau, 200)
    target = -(640320 ** 3)
    assert abs(j.to_mpc() - target) < abs(mpmath.mpf(target)) * mpmath.mpf(2) ** -180


def test_j_rejects_bad_inputs():
    with pytest.raises(ValueError):
        j_invariant(_tau(0, -1), 128)
    with pytest.raises(ValueError):
        j_invariant(_tau(0, 1), 32)
    with pytest.raises(PrecisionExhaustedError):
        j_invariant(_tau(0, 0.05), 128)


def test_bigcomplex_precision_floor():
    with pytest.raises(ValueError):
        BigComplex(mpmath.mpf(0), mpmath.mpf(1), 48)


def test_precision_for_values():
    assert precision_for(3) == 42
    assert precision_for(4) == 44
    assert precision_for(23) == 80


def test_hilbert_small():
    assert hilbert_class_poly(3).coeffs == (1, 0)
    assert hilbert_class_poly(4).coeffs == (1, -1728)
    assert hilbert_class_poly(23).coeffs == H23_COEFFS


def test_hilbert_degree_matches_class_number_smallish():
    for d in range(3, 400):
        if is_fundamental(-d):
            poly = hilbert_class_poly(d)
            assert poly.degree == class_number(d), d
            assert poly.coeffs[0] == 1


def test_hilbert_determinism_across_precisions():
    base = precision_for(71)
    a = hilbert_class_poly(71, precision=base)
    b = hilbert_class_poly(71, precision=2 * base)
    assert a.coeffs == b.coeffs


def test_hilbert_retry_recovers_from_low_precision():
    # absurdly low start must still converge through the doubling retries
    poly = hilbert_class_poly(23, precision=64)
    assert poly.coeffs == H23_COEFFS


def test_split_primes_have_full_root_count():
    for d in (23, 15):
        h = class_number(d)
        coeffs = list(hilbert_class_poly(d).coeffs)
        split = noroot = 0
        for p in primes_up_to(4000):
            if p < 5 or (-d) % p == 0 or jacobi(-d % p, p) != 1:
                continue
            roots = poly_roots_mod([c % p for c in coeffs], p)
            if solve_4n(d, p) is not None:
                assert len(roots) == h, (d, p)
                split += 1
            else:
                assert len(roots) == 0, (d, p)
                noroot += 1
        assert split > 5 and noroot > 5


def test_inert_primes_even_root_count_for_even_h():
    # for discriminants with even class number, primes with (-D/p) = -1 see
    # an even number of roots (counting without multiplicity) unless they
    # divide the polynomial discriminant; small ramified p are skipped
    for d in (15, 84):
        coeffs = list(hilbert_class_poly(d).coeffs)
        checked = 0
        for p in primes_up_to(2500):
            if p < 100 or jacobi(-d % p, p) != -1:
                continue
            roots = poly_roots_mod([c % p for c in coeffs], p)
            assert len(roots) % 2 == 0, (d, p, roots)
            checked += 1
        assert checked >= 50


def test_cache_roundtrip(tmp_path):
    poly = hilbert_class_poly(23)
    path = save_cache(poly, str(tmp_path))
    assert path.endswith("HD_23.txt")
    loaded = load_cache(23, str(tmp_path))
    assert loaded == poly
    assert load_cache(47, str(tmp_path)) is None
    # a cache file whose degree disagrees with the class number is rejected
    bad = tmp_path / "HD_47.txt"
    bad.write_text("47\n1\n1\n-87\n")
    with pytest.raises(ValueError):
        load_cache(47, str(tmp_path))


def test_class_polynomial_text_roundtrip():
    poly = hilbert_class_poly(71)
    again = ClassPolynomial.from_text(poly.to_text())
    assert again == poly
    with pytest.raises(ValueError):
        ClassPolynomial.from_text("71\n")
    with pytest.raises(ValueError):
        ClassPolynomial.from_text("71\n2\n2\n0\n1\n")  # not monic
