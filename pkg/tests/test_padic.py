"""Unramified p-adic arithmetic: ring laws, valuations, Frobenius, log."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmprox.errors import PrecisionExhausted
from cmprox.padic import (INF, PadicNumber, approximation_exponent, frobenius,
                          fraction_valuation, int_valuation, padic_log, ring,
                          teichmuller)

primes = st.sampled_from([2, 3, 5, 7])
degrees = st.sampled_from([1, 2, 3])


def notation(p, f, n, N=16):
    return PadicNumber.from_int(n, p, f, N)


def test_int_valuation_basic():
    assert int_valuation(40, 2) == 3
    assert int_valuation(40, 5) == 1
    assert int_valuation(-250, 5) == 3
    assert int_valuation(7, 3) == 0
    with pytest.raises(ValueError):
        int_valuation(0, 2)


def test_fraction_valuation_zero_is_inf():
    assert fraction_valuation(Fraction(0), 5) == INF
    assert fraction_valuation(Fraction(25, 3), 5) == 2
    assert fraction_valuation(Fraction(3, 25), 5) == -2


@given(primes, degrees, st.integers(1, 10 ** 9), st.integers(1, 10 ** 9))
def test_mul_valuation_additive(p, f, a, b):
    x, y = notation(p, f, a), notation(p, f, b)
    assert (x * y).ord() == x.ord() + y.ord()


@given(primes, degrees, st.integers(-10 ** 6, 10 ** 6),
       st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6))
def test_ring_laws(p, f, a, b, c):
    x, y, z = (notation(p, f, t) for t in (a, b, c))
    assert ((x + y) + z).agrees_with(x + (y + z))
    assert (x * y).agrees_with(y * x)
    assert (x * (y + z)).agrees_with(x * y + x * z)
    assert ((x + y) - y).agrees_with(x)


@given(primes, degrees, st.integers(1, 10 ** 8))
def test_inverse_roundtrip(p, f, a):
    x = notation(p, f, a)
    v = x.ord()
    assert ((x / x) - 1).is_zero() or ((x / x) - 1).is_exhausted()
    assert (x / x).ord() == 0 if v == 0 else True


def test_exact_rational_coercion():
    x = PadicNumber.from_fraction(Fraction(1, 3), 5, 1, 10)
    assert (3 * x - 1).is_zero() or (3 * x - 1).is_exhausted()
    y = PadicNumber.from_fraction(Fraction(-7, 2), 5, 2, 10)
    assert (2 * y + 7).is_zero() or (2 * y + 7).is_exhausted()


@given(primes, degrees, st.integers(0, 10 ** 10))
def test_frobenius_is_additive_and_multiplicative(p, f, seed):
    x = notation(p, f, 2 * seed + 1)
    y = notation(p, f, seed + 3)
    assert frobenius(x + y).agrees_with(frobenius(x) + frobenius(y))
    assert frobenius(x * y).agrees_with(frobenius(x) * frobenius(y))


@given(primes, degrees, st.integers(1, 10 ** 8))
def test_frobenius_order_divides_f(p, f, a):
    x = notation(p, f, a)
    y = x
    for _ in range(f):
        y = frobenius(y)
    assert y.agrees_with(x)


def test_frobenius_fixes_prime_field():
    # an element lifted from Z is fixed
    z = PadicNumber.from_int(29, 7, 3, 16)
    assert frobenius(z).agrees_with(z)
    # but the Teichmuller lift of a residue generator is moved
    gen = PadicNumber.from_coords(ring(7, 3), 0, (0, 1, 0), 16)
    w = teichmuller(gen)
    assert not frobenius(w).agrees_with(w)


def test_teichmuller_is_root_of_unity():
    for p, f in ((2, 2), (3, 2), (5, 1), (5, 3)):
        u = PadicNumber.from_coords(ring(p, f), 0, (1,) * f, 20)
        w = teichmuller(u)
        e = p ** f - 1
        assert (w ** e - 1).is_zero() or (w ** e - 1).is_exhausted()
        assert w.ord() == 0


@given(primes, st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_padic_log_is_additive(p, a, b):
    m = 4 if p == 2 else p     # log converges on 1 + 4 Z_2, 1 + p Z_p
    u = 1 + m * notation(p, 1, a, 24)
    v = 1 + m * notation(p, 1, b, 24)
    lhs = padic_log(u * v)
    rhs = padic_log(u) + padic_log(v)
    assert lhs.agrees_with(rhs)


def test_padic_log_valuation_matches_unit():
    # ord(log(1 + p^k u)) = k for p odd, k >= 1, u a unit
    for p, k in ((3, 1), (5, 2), (7, 1)):
        g = PadicNumber.from_int(1 + p ** k * 2, p, 1, 24)
        assert padic_log(g).ord() == k


def test_log_rejects_non_principal_units():
    with pytest.raises(ValueError):
        padic_log(PadicNumber.from_int(2, 5, 1, 10))


def test_exhausted_ord_raises():
    x = notation(5, 1, 17)
    d = x - 17
    assert d.is_zero() or d.is_exhausted()
    if d.is_exhausted():
        with pytest.raises(PrecisionExhausted):
            d.ord()


def test_embedding_is_ring_hom():
    x = notation(5, 2, 12345)
    y = notation(5, 2, 678)
    X = x.embed_into(6)
    Y = y.embed_into(6)
    assert (X + Y).agrees_with((x + y).embed_into(6))
    assert (X * Y).agrees_with((x * y).embed_into(6))


def test_embedding_preserves_valuation_and_frobenius_compat():
    x = notation(3, 2, 45)
    assert x.embed_into(4).ord() == x.ord()
    # Frobenius on the big field restricts to Frobenius on the small one
    lhs = frobenius(x).embed_into(4)
    big = x.embed_into(4)
    rhs = frobenius(big)
    assert lhs.agrees_with(rhs) or lhs.agrees_with(frobenius(frobenius(big)))


def test_approximation_exponent_small_cases():
    rec = approximation_exponent(2, 1, 2)
    assert rec.arg == 4 and rec.value == math.factorial(4)
    for u in (1, 3):
        assert pow(u, rec.value, 4) == 1
    rec = approximation_exponent(3, 1, 2)
    assert rec.arg == 9
    for u in range(1, 9):
        if u % 3:
            assert pow(u, rec.value, 9) == 1
    big = approximation_exponent(5, 2, 3)
    assert big.arg == 5 ** 6 and big.value is None   # symbolic beyond 20!


def test_registry_moduli_are_loaded():
    # vendored registry pins the degree-30 modulus; construction is instant
    r = ring(5, 30)
    assert len(r.modulus) == 31 and r.modulus[-1] == 1
