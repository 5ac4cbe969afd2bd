"""Modular polynomial tables, magnitudes, distances, and rigidity checks."""

import random
from fractions import Fraction

import pytest

import cmprox.modular as modular
from cmprox.classpoly import singular_moduli_at
from cmprox.errors import (CmproxError, NotInIdealAtCap, PrecisionExhausted)
from cmprox.modular import (IdealPresentation, Magnitude, MultiPoly,
                            OrdinaryModulus, check_union_product_distances,
                            distance, distance_prime_upper, gauss_norm,
                            hecke_image_point, ideal_membership_bounded,
                            magnitude_max, magnitude_min, modular_poly, psi,
                            rigidity_threshold_check, sup_norm_difference)
from cmprox.padic import INF, PadicNumber, ring


def test_psi_values():
    assert [psi(N) for N in (1, 2, 3, 4, 5, 6, 7, 8, 12)] == \
        [1, 3, 4, 6, 6, 12, 8, 12, 24]


def test_level_one_is_difference():
    phi1 = modular_poly(1)
    assert phi1(7, 3) == 4
    assert phi1(3, 3) == 0


def test_phi2_known_evaluations():
    phi2 = modular_poly(2)
    # 2-isogenous pair of class-number-one j-invariants
    assert phi2(1728, 287496) == 0
    assert phi2(287496, 1728) == 0
    # Phi_2(0, Y) = (Y - 54000)^3
    assert phi2(0, 54000) == 0
    assert phi2(0, 0) == -(54000 ** 3)
    assert phi2(1728, 1729) != 0


def test_phi3_and_phi5_vanish_on_isogenous_cm_points():
    import sympy
    from cmprox.classpoly import hilbert_class_poly
    # j(-3) = 0 and j(-27) are related by a cyclic 3-isogeny
    j27 = -hilbert_class_poly(-27).coeffs[0]
    assert modular_poly(3)(0, j27) == 0
    # 1728 = j(-4) is 5-isogenous to the (irrational) roots of H_{-100}:
    # certify by a common factor instead of a single evaluation
    Y = sympy.Symbol("Y")
    h100 = sum(c * Y ** k
               for k, c in enumerate(hilbert_class_poly(-100).coeffs))
    phi5_at_1728 = sum(c * 1728 ** i * Y ** j
                       for i, j, c in modular_poly(5).coeffs)
    g = sympy.gcd(sympy.Poly(h100, Y), sympy.Poly(phi5_at_1728, Y))
    assert sympy.degree(g, Y) == 2    # the full conjugate pair divides


# ----- negative controls: corrupted tables must be rejected by name -----

class _FakeFiles:
    def __init__(self, text):
        self.text = text

    def joinpath(self, *parts):
        return self

    def read_text(self):
        return self.text


class _FakeResources:
    def __init__(self, text):
        self._text = text

    def files(self, pkg):
        return _FakeFiles(self._text)


def _real_phi2_text():
    from importlib import resources
    return resources.files("cmprox").joinpath("data", "phi_2.txt").read_text()


def _with_table(monkeypatch, text):
    monkeypatch.setattr(modular, "resources", _FakeResources(text))
    modular.modular_poly.cache_clear()


@pytest.fixture
def restore_tables():
    # clear the poisoned cache entry; the monkeypatch is undone right after,
    # so the next modular_poly call reloads the genuine vendored table
    yield
    modular.modular_poly.cache_clear()


def test_corrupt_table_missing_top_degree(monkeypatch, restore_tables):
    lines = [ln for ln in _real_phi2_text().splitlines()
             if not ln.startswith("3 0")]
    _with_table(monkeypatch, "\n".join(lines))
    with pytest.raises(CmproxError, match="bidegree"):
        modular.modular_poly(2)


def test_corrupt_table_parity_flip_breaks_kronecker(monkeypatch, restore_tables):
    out = []
    for ln in _real_phi2_text().splitlines():
        if ln.startswith("0 0 "):
            i, j, c = ln.split()
            ln = f"{i} {j} {int(c) + 1}"     # odd shift: mod-2 shape changes
        out.append(ln)
    _with_table(monkeypatch, "\n".join(out))
    with pytest.raises(CmproxError, match="Kronecker congruence"):
        modular.modular_poly(2)


def test_corrupt_table_constant_pin(monkeypatch, restore_tables):
    out = []
    for ln in _real_phi2_text().splitlines():
        if ln.startswith("0 0 "):
            i, j, c = ln.split()
            ln = f"{i} {j} {int(c) + 2}"     # parity kept: Kronecker passes
        out.append(ln)
    _with_table(monkeypatch, "\n".join(out))
    with pytest.raises(CmproxError, match="constant coefficient"):
        modular.modular_poly(2)


# ----- magnitudes ------------------------------------------------------

def test_magnitude_order_and_product():
    z = Magnitude.zero(5)
    one = Magnitude.one(5)
    small = Magnitude.from_ord(5, 3)
    big = Magnitude.from_ord(5, -2)
    assert z < small < one < big
    assert (small * small).exponent == 6
    assert (z * big).is_zero()
    assert magnitude_max([z, small, big]) is big
    assert magnitude_min([one, small, z]) is z


def test_gauss_norm():
    f = MultiPoly.build(2, {(1, 0): Fraction(1, 5), (0, 1): 25})
    assert gauss_norm(f, 5).exponent == -1
    zero = MultiPoly.build(2, {})
    assert gauss_norm(zero, 5).is_zero()


def test_multipoly_eval_routes_agree(rng):
    for _ in range(25):
        f = MultiPoly.build(2, {
            (rng.randrange(3), rng.randrange(3)): rng.randrange(-9, 10)
            for _ in range(4)})
        a, b = rng.randrange(100), rng.randrange(100)
        exact = f.evaluate_exact((a, b))
        x = (PadicNumber.from_int(a, 5, 1, 18),
             PadicNumber.from_int(b, 5, 1, 18))
        val = f.evaluate(x)
        diff = val - PadicNumber.from_fraction(exact, 5, 1, 18)
        assert diff.is_zero() or diff.is_exhausted()


# ----- distances -------------------------------------------------------

def _pt(c, p=5, f=1, N=12):
    return PadicNumber.from_int(c, p, f, N)


def _linear_ideal(c1, c2):
    X0, X1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    return IdealPresentation(2, 5, (X0 - MultiPoly.constant(2, c1),
                                    X1 - MultiPoly.constant(2, c2)))


def test_distance_zero_on_the_zero_set():
    x = (_pt(37), _pt(12))
    assert distance(x, _linear_ideal(37, 12)).is_zero()


def test_distance_positive_off_the_zero_set():
    x = (_pt(37 + 5 ** 2), _pt(12))
    d = distance(x, _linear_ideal(37, 12))
    assert d.exponent == 2


def test_distance_requires_integral_coordinates():
    bad = PadicNumber.from_fraction(Fraction(1, 5), 5, 1, 12)
    with pytest.raises(ValueError):
        distance((bad, _pt(0)), _linear_ideal(0, 0))


def test_distance_undecidable_mix_raises():
    # one generator decided at ord 3, the other all-cancelled at bound 1
    x = (_pt(10, N=6), _pt(4, N=1))
    X0, X1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    gens = (X0 - MultiPoly.constant(2, 10 + 5 ** 3),
            X1 - MultiPoly.constant(2, 4))
    with pytest.raises(PrecisionExhausted):
        distance(x, IdealPresentation(2, 5, gens))


def test_sup_norm_difference():
    x = (_pt(3), _pt(8))
    y = (_pt(3 + 25), _pt(8 + 5))
    assert sup_norm_difference(x, y).exponent == 1
    assert sup_norm_difference(x, x).is_zero()


def test_distance_prime_upper_asserts_chain():
    x = (_pt(7 + 5 ** 3), _pt(2))
    ideal = _linear_ideal(7, 2)
    samples = [(_pt(7), _pt(2))]
    best = distance_prime_upper(x, samples, ideal)
    assert best.exponent == 3


def test_union_and_product_comparisons(rng):
    for _ in range(30):
        c = [rng.randrange(5 ** 5) for _ in range(4)]
        x = (_pt(c[0] + 5 ** rng.randrange(1, 4)), _pt(c[1]))
        a = _linear_ideal(c[0], c[1])
        b = _linear_ideal(c[2], c[3])
        u = check_union_product_distances(x, a, b, "union")
        assert u.holds
        pr = check_union_product_distances(x, a, b, "product", y=x)
        assert pr.holds


# ----- bounded ideal membership ---------------------------------------

def test_membership_roundtrip(rng):
    X0, X1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    for _ in range(30):
        g1 = X0 * X0 - MultiPoly.constant(2, rng.randrange(1, 50))
        g2 = X1 - MultiPoly.constant(2, rng.randrange(1, 50))
        a1 = MultiPoly.build(2, {(rng.randrange(2), 0): rng.randrange(1, 9),
                                 (0, 0): rng.randrange(-5, 6)})
        a2 = MultiPoly.build(2, {(0, rng.randrange(2)): rng.randrange(1, 9)})
        f = a1 * g1 + a2 * g2
        cert = ideal_membership_bounded(f, (g1, g2), 2, 5)
        recon = MultiPoly.build(2, {})
        for mult, g in zip(cert.multipliers, (g1, g2)):
            recon = recon + mult * g
        assert recon.terms == f.terms
        assert cert.multiplier_norm <= cert.constant * cert.f_norm


def test_membership_failure_at_cap():
    X0, X1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    one = MultiPoly.constant(2, 1)
    with pytest.raises(NotInIdealAtCap):
        ideal_membership_bounded(one, (X0, X1), 2, 5)


# ----- Hecke images ----------------------------------------------------

def test_hecke_identity_level():
    x = (_pt(1728, N=16),)
    out = hecke_image_point(x, (1,))
    assert out == [x]


def test_hecke_fiber_over_1728():
    x = (PadicNumber.from_int(1728, 5, 1, 24),)
    fibers = hecke_image_point(x, (2,), f_max=4, precision=20)
    flat = [pt[0] for pt in fibers]
    assert any((y - 287496).is_zero() or (y - 287496).is_exhausted()
               for y in flat)
    assert 1 <= len(flat) <= psi(2)


def test_hecke_fiber_over_exact_zero_collapses_cluster():
    x = (PadicNumber.zero(5, 1),)
    fibers = hecke_image_point(x, (2,), f_max=2, precision=16)
    # Phi_2(0, Y) = (Y - 54000)^3: one representative, not three copies
    assert len(fibers) == 1
    y = fibers[0][0]
    assert (y - 54000).is_zero() or (y - 54000).is_exhausted()


def test_hecke_product_of_levels():
    x = (PadicNumber.from_int(1728, 5, 1, 20), PadicNumber.zero(5, 1))
    out = hecke_image_point(x, (2, 2), f_max=2, precision=16)
    assert all(len(pt) == 2 for pt in out)
    assert len(out) >= 2


# ----- rigidity --------------------------------------------------------

def test_ordinary_modulus_guards():
    rec = singular_moduli_at(-11, 5, precision=16, f_max=1)
    OrdinaryModulus(-11, rec.roots[0])          # fine
    with pytest.raises(TypeError):
        OrdinaryModulus(-11, 42)
    with pytest.raises(ValueError):
        OrdinaryModulus(-3, rec.roots[0])       # supersingular at 5


def test_rigidity_distinct_roots_are_far():
    r1 = singular_moduli_at(-11, 5, precision=20, f_max=1).roots[0]
    r2 = singular_moduli_at(-19, 5, precision=20, f_max=1).roots[0]
    out = rigidity_threshold_check(OrdinaryModulus(-11, r1),
                                   OrdinaryModulus(-19, r2), 1, 5)
    assert out.passed and out.order == 0
    assert out.threshold == Fraction(6, 4)
    out2 = rigidity_threshold_check(OrdinaryModulus(-11, r1),
                                    OrdinaryModulus(-19, r2), 2, 5)
    assert out2.passed and out2.order == 0
    assert out2.threshold == Fraction(18, 4)


def test_rigidity_same_root_is_certified():
    r1 = singular_moduli_at(-11, 5, precision=20, f_max=1).roots[0]
    m = OrdinaryModulus(-11, r1)
    out = rigidity_threshold_check(m, m, 1, 5)
    assert out.certified_zero and out.order == INF


def test_rigidity_isogenous_pair_certified_by_resultant():
    # h(-31) = 3 with [p_2] of order 3: every unordered root pair is
    # related by the 2-isogeny sigma, so Phi_2 vanishes exactly on it
    rec = singular_moduli_at(-31, 5, precision=24, f_max=6)
    assert len(rec.roots) == 3
    mods = [OrdinaryModulus(-31, r) for r in rec.roots]
    certified = 0
    for i in range(3):
        for j in range(i + 1, 3):
            out = rigidity_threshold_check(mods[i], mods[j], 2, 5)
            assert out.passed
            certified += bool(out.certified_zero)
    assert certified == 3


def test_rigidity_rejects_wrong_prime():
    r1 = singular_moduli_at(-11, 5, precision=16, f_max=1).roots[0]
    with pytest.raises(ValueError):
        rigidity_threshold_check(OrdinaryModulus(-11, r1),
                                 OrdinaryModulus(-11, r1), 1, 7)
