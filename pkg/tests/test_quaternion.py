"""The rational quaternion algebra (-3, -7p) and its distinguished order."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmprox.quaternion import (EisensteinNumber, QuaternionElement,
                               construct_phi, gram_matrix, order_contains,
                               order_contains_lattice, standard_basis)

small = st.integers(-30, 30)
halves = st.fractions(min_value=-10, max_value=10).filter(
    lambda q: q.denominator in (1, 2, 3, 7, 21))


def E(u, v):
    return EisensteinNumber(Fraction(u), Fraction(v))


def Q(a, b, p=5):
    return QuaternionElement(a, b, p)


# ----- Eisenstein integers ---------------------------------------------

@given(small, small, small, small)
def test_eisenstein_norm_multiplicative(a, b, c, d):
    x, y = E(a, b), E(c, d)
    assert (x * y).norm == x.norm * y.norm


@given(small, small)
def test_eisenstein_conjugate_involution(a, b):
    x = E(a, b)
    assert x.conjugate().conjugate() == x
    assert x.norm == (x * x.conjugate()).u
    assert (x * x.conjugate()).v == 0


@given(small, small)
def test_eisenstein_trace_and_norm_formulas(a, b):
    x = E(a, b)
    assert x.trace == 2 * a + b
    assert x.norm == a * a + a * b + b * b
    assert x.norm >= 0


def test_theta_satisfies_its_equation():
    theta = E(0, 1)
    assert theta * theta == theta - E(1, 0)       # theta^2 = theta - 1
    sqrt_m3 = theta + theta - E(1, 0)             # 2 theta - 1
    assert sqrt_m3 * sqrt_m3 == E(-3, 0)


# ----- quaternions -----------------------------------------------------

@given(small, small, small, small, small, small, small, small)
def test_reduced_norm_multiplicative(a1, b1, c1, d1, a2, b2, c2, d2):
    x = Q(E(a1, b1), E(c1, d1))
    y = Q(E(a2, b2), E(c2, d2))
    assert (x * y).reduced_norm == x.reduced_norm * y.reduced_norm


@given(small, small, small, small, small, small, small, small)
def test_conjugation_is_an_antiautomorphism(a1, b1, c1, d1, a2, b2, c2, d2):
    x = Q(E(a1, b1), E(c1, d1))
    y = Q(E(a2, b2), E(c2, d2))
    assert (x * y).conjugate() == y.conjugate() * x.conjugate()
    assert (x * x.conjugate()).beta.is_zero()


@given(small, small, small, small)
def test_trace_norm_via_characteristic_equation(a, b, c, d):
    x = Q(E(a, b), E(c, d))
    # x^2 - tr(x) x + nr(x) = 0
    t, n = x.reduced_trace, x.reduced_norm
    lhs = x * x - x * t + Q(E(n, 0), E(0, 0))
    assert lhs.is_zero()


def _mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


@given(small, small, small, small, small, small, small, small)
def test_matrix_form_is_a_homomorphism(a1, b1, c1, d1, a2, b2, c2, d2):
    x = Q(E(a1, b1), E(c1, d1))
    y = Q(E(a2, b2), E(c2, d2))
    assert (x * y).matrix_form() == _mat_mul(x.matrix_form(), y.matrix_form())
    m = x.matrix_form()
    assert m[0][0] + m[1][1] == EisensteinNumber(x.reduced_trace, 0)


# ----- the order -------------------------------------------------------

def test_basis_membership_and_products():
    for p in (5, 11):
        basis = standard_basis(p).elements()
        assert len(basis) == 4
        for bi in basis:
            assert order_contains(bi)
            for bj in basis:
                assert order_contains(bi * bj), (bi, bj)


def test_gram_determinant():
    for p in (5, 11, 17, 23):
        _, det = gram_matrix(p)
        assert det == -p * p


def test_gram_matrix_entries():
    gram, _ = gram_matrix(5)
    # first row against the closed form (-6, -3, -2, -3) with sign fixed
    assert [abs(x) for x in gram[0]] == [6, 3, 2, 3]
    for i in range(4):
        for j in range(4):
            assert gram[i][j] == gram[j][i]


def test_gram_rejects_bad_primes():
    with pytest.raises(ValueError):
        gram_matrix(7)      # 7 = 1 mod 3 splits in Q(sqrt(-3))
    with pytest.raises(ValueError):
        gram_matrix(4)


def test_membership_routes_agree(rng):
    basis = standard_basis(5).elements()
    for _ in range(150):
        if rng.random() < 0.7:
            x = Q(E(0, 0), E(0, 0))
            for bi in basis:
                x = x + bi * Fraction(rng.randrange(-4, 5))
        else:
            x = Q(E(Fraction(rng.randrange(-20, 21), rng.choice((1, 2, 3, 7))),
                    Fraction(rng.randrange(-20, 21), rng.choice((1, 2, 3, 7)))),
                  E(Fraction(rng.randrange(-20, 21), rng.choice((1, 3, 7, 21))),
                    Fraction(rng.randrange(-20, 21), rng.choice((1, 3, 7, 21)))))
        assert order_contains(x) == order_contains_lattice(x)


def test_order_closed_under_multiplication(rng):
    basis = standard_basis(5).elements()
    for _ in range(60):
        def rand_elt():
            x = Q(E(0, 0), E(0, 0))
            for bi in basis:
                x = x + bi * Fraction(rng.randrange(-3, 4))
            return x
        x, y = rand_elt(), rand_elt()
        assert order_contains(x * y)
        assert order_contains(x + y)
        assert order_contains(x.conjugate())


# ----- the trace-one element phi ---------------------------------------

def test_phi_certificate_and_invariants():
    for p in (5, 11):
        for n, x in ((0, 1), (1, 3), (2, -5), (3, 9)):
            phi, cert = construct_phi(n, x, p)
            d = 3 * x * x + 4 * p ** (2 * n + 1)
            assert cert.d == d
            assert cert.ok
            assert phi.reduced_trace == 1
            assert phi.reduced_norm == Fraction(1 + d, 4)
            # phi^2 - phi + (1 + d)/4 = 0
            defect = phi * phi - phi + Q(E(Fraction(1 + d, 4), 0),
                                         E(0, 0), p)
            assert defect.is_zero()


def test_phi_requires_odd_x():
    with pytest.raises(ValueError):
        construct_phi(1, 2, 5)
    with pytest.raises(ValueError):
        construct_phi(-1, 1, 5)
