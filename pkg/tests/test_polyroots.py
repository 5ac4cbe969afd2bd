"""Newton polygons, Hensel lifting, and root finding in unramified rings."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmprox.errors import PrecisionExhausted
from cmprox.padic import PadicNumber, ring
from cmprox.polyroots import (IntegerPolynomial, PadicPolynomial, hensel_lift,
                              newton_polygon, padic_roots, roots_in_unramified)


def lift_poly(coeffs, p, f=1, N=16):
    return PadicPolynomial(tuple(
        PadicNumber.from_int(c, p, f, N) for c in coeffs))


# ----- Newton polygons -------------------------------------------------

def test_polygon_of_linear():
    # X + 32768 at p=2: single root of valuation 15
    np_ = newton_polygon(IntegerPolynomial((32768, 1)), 2)
    assert np_.root_valuations() == (Fraction(15),)


def test_polygon_known_quadratic():
    # (X - 5)(X - 125) = X^2 - 130 X + 625
    np_ = newton_polygon(IntegerPolynomial((625, -130, 1)), 5)
    assert sorted(np_.root_valuations()) == [1, 3]


def test_polygon_fractional_slope():
    # X^2 - 5: both roots have valuation 1/2 (ramified, polygon only)
    np_ = newton_polygon(IntegerPolynomial((-5, 0, 1)), 5)
    assert np_.root_valuations() == (Fraction(1, 2), Fraction(1, 2))


def test_polygon_sum_equals_constant_valuation_for_monic():
    rnd = random.Random(5)
    for _ in range(40):
        p = rnd.choice([2, 3, 5])
        vals = [rnd.randrange(0, 6) for _ in range(rnd.randrange(1, 5))]
        poly = IntegerPolynomial((1,))
        acc = [1]
        for v in vals:
            root = p ** v * (1 + p * rnd.randrange(0, 50))
            # multiply by (X - root)
            new = [0] * (len(acc) + 1)
            for i, c in enumerate(acc):
                new[i + 1] += c
                new[i] -= root * c
            acc = new
        poly = IntegerPolynomial(tuple(acc))
        got = sorted(newton_polygon(poly, p).root_valuations())
        assert got == sorted(Fraction(v) for v in vals)


def test_polygon_rejects_exhausted_coefficients():
    x = PadicNumber.from_int(3, 5, 1, 8)
    bad = (x - 3)   # all digits cancelled
    if bad.is_exhausted():
        with pytest.raises(PrecisionExhausted):
            newton_polygon(PadicPolynomial((bad, x)))


# ----- Hensel lifting --------------------------------------------------

def test_hensel_lift_simple_root():
    f = lift_poly((-2, 0, 1), 7, 1, 24)     # X^2 - 2; 2 = 3^2 + 7k
    a0 = PadicNumber.from_int(3, 7, 1, 24)
    r = hensel_lift(f, a0, 20)
    assert f(r).is_zero() or f(r).is_exhausted()
    assert (r - 3).ord() >= 1


def test_hensel_lift_rejects_bad_start():
    from cmprox.errors import CmproxError
    f = lift_poly((-2, 0, 1), 5, 1, 24)     # 2 is not a square mod 5
    with pytest.raises((ValueError, ArithmeticError, CmproxError)):
        hensel_lift(f, PadicNumber.from_int(1, 5, 1, 24), 20)


# ----- root finding ----------------------------------------------------

def test_split_cubic_roots():
    f = lift_poly((-6, 11, -6, 1), 5, 1, 16)   # (X-1)(X-2)(X-3)
    roots = padic_roots(f, 1, precision=12)
    assert len(roots) == 3
    residues = sorted(r.coords[0] % 5 for r in roots)
    assert residues == [1, 2, 3]


def test_inert_quadratic_lands_in_degree_two():
    f = lift_poly((-2, 0, 1), 5, 1, 16)
    roots = padic_roots(f, 2, precision=12)
    assert len(roots) == 2
    assert all(r.f == 2 for r in roots)
    assert (roots[0] + roots[1]).ord_lower_bound() >= 10   # sum = 0


def test_f_max_filters_high_degree_roots():
    # X^3 + X + 1 has no root mod 5, hence is irreducible there
    f = lift_poly((1, 1, 0, 1), 5, 1, 16)
    assert padic_roots(f, 2, precision=12) == []
    assert len(padic_roots(f, 3, precision=12)) == 3


def test_double_root_reported_once():
    # (X - 2)^2 (X - 3) at p = 7
    f = lift_poly((-12, 16, -7, 1), 7, 1, 16)
    roots = padic_roots(f, 1, precision=12)
    residues = sorted(r.coords[0] % 7 for r in roots)
    assert residues == [2, 3]
    with pytest.raises(PrecisionExhausted):
        padic_roots(f, 1, precision=12, collapse_clusters=False)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 3), st.integers(1, 40))
def test_integer_roots_recovered(p, v, u):
    root = p ** v * u
    f = lift_poly((-root, 1), p, 1, 20)
    roots = padic_roots(f, 1, precision=16)
    assert len(roots) == 1
    assert (roots[0] - root).ord_lower_bound() >= 12


def test_roots_in_unramified_mixed_degrees():
    # (X^2 - 2)(X - 4) at p=5: one rational root, two in the quadratic
    poly = IntegerPolynomial((8, -2, -4, 1))
    roots = roots_in_unramified(poly, 5, 2, precision=14)
    degs = sorted(r.f for r in roots)
    assert degs == [1, 2, 2]
    rational = [r for r in roots if r.f == 1]
    assert (rational[0] - 4).ord_lower_bound() >= 10


def test_roots_in_unramified_negative_valuation():
    # 5 X - 1 has the root 1/5 of valuation -1
    poly = IntegerPolynomial((-1, 5))
    roots = roots_in_unramified(poly, 5, 1, precision=14)
    assert len(roots) == 1
    assert roots[0].ord() == -1


def test_roots_in_unramified_zero_root():
    poly = IntegerPolynomial((0, 0, 1, 1))   # X^2 (X + 1)
    roots = roots_in_unramified(poly, 3, 1, precision=12)
    vals = sorted(str(r.ord()) for r in roots)
    assert any(r.is_zero() for r in roots)
    assert any(not r.is_zero() and r.ord() == 0 for r in roots)
    assert vals  # shape sanity
