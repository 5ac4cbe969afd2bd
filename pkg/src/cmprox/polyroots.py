"""Polynomials over Z and over unramified p-adic rings: Newton polygons,
Hensel lifting, and exhaustive root search in unramified extensions.

The root search follows the classical residue-then-shift recursion: find
the residue roots, Hensel-lift the smooth ones, and recurse on the shifted
polynomial f(r0 + pT)/p^mu where the lift is obstructed.  Working modulus
shrinks by at least one digit per recursion level, so the search always
terminates, if need be with an explicit precision-exhausted error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import residue
from .errors import NonSmoothPoint, PrecisionExhausted
from .padic import (DEFAULT_PRECISION, INF, PadicNumber, UnramifiedRing,
                    fraction_valuation, int_valuation, ring)


# ----------------------------------------------------------------------
# Carriers
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerPolynomial:
    """Dense integer polynomial, ascending coefficients, exact arithmetic."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def __call__(self, x):
        if isinstance(x, PadicNumber):
            out = PadicNumber.zero(x.p, x.f)
            for c in reversed(self.coeffs):
                out = out * x + c
            return out
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def derivative(self):
        if self.degree <= 0:
            return IntegerPolynomial((0,))
        return IntegerPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def is_monic(self):
        return self.coeffs[-1] == 1

    def reversed(self):
        return IntegerPolynomial(tuple(reversed(self.coeffs)))

    def squarefree_part(self):
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(self.coeffs)), x)
        g = sympy.gcd(poly, poly.diff(x))
        sf = sympy.div(poly, g, x)[0]
        coeffs = [int(c) for c in reversed(sf.all_coeffs())]
        return IntegerPolynomial(tuple(coeffs))

    def to_sympy(self, symbol="x"):
        return sympy.Poly(list(reversed(self.coeffs)), sympy.Symbol(symbol))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*X^{i}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class PadicPolynomial:
    """Polynomial with PadicNumber coefficients in one common ring."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1].is_zero():
            c.pop()
        if not c:
            raise ValueError("empty coefficient list")
        rings = {cc.ring for cc in c if isinstance(cc, PadicNumber)}
        if len(rings) != 1:
            raise ValueError("coefficients must share one ring")
        if c[-1].is_exhausted():
            raise ValueError("leading coefficient is undecidable at stored precision")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def ring(self):
        return self.coeffs[-1].ring

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x: PadicNumber):
        out = PadicNumber.zero(x.p, x.f)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def derivative(self):
        if self.degree == 0:
            return PadicPolynomial((PadicNumber.zero(self.ring.p, self.ring.f),))
        return PadicPolynomial(tuple(i * c for i, c in enumerate(self.coeffs))[1:])


# ----------------------------------------------------------------------
# Newton polygons
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull data of coefficient valuations at a prime p.

    segments: (slope, length) pairs with strictly increasing Fraction
    slopes; the negated slopes are the valuations of the nonzero roots,
    with multiplicity equal to the horizontal length.  Roots at 0 are
    recorded separately as zero_multiplicity.
    """

    p: int
    segments: tuple
    zero_multiplicity: int

    def root_valuations(self):
        """Finite root valuations, one entry per root, largest first."""
        vals = []
        for slope, length in self.segments:
            vals.extend([-slope] * length)
        vals.sort(reverse=True)
        return tuple(vals)

    def max_root_valuation(self):
        vals = self.root_valuations()
        return vals[0] if vals else None

    def total_length(self):
        return sum(length for _, length in self.segments)


def newton_polygon(f, p=None) -> NewtonPolygon:
    """Newton polygon of a polynomial (integer or p-adic coefficients).

    For p-adic input every coefficient valuation must be exactly known;
    a precision-exhausted coefficient raises PrecisionExhausted.
    """
    if isinstance(f, IntegerPolynomial):
        if p is None:
            raise ValueError("a prime is required for integer input")
        pts = []
        for i, c in enumerate(f.coeffs):
            if c != 0:
                pts.append((i, int_valuation(c, p)))
    elif isinstance(f, PadicPolynomial):
        p = f.ring.p
        pts = []
        for i, c in enumerate(f.coeffs):
            if c.is_zero():
                continue
            if c.is_exhausted():
                raise PrecisionExhausted(
                    f"coefficient {i} has undecidable valuation (>= {c.bound})",
                    bound=c.bound)
            pts.append((i, c.ord()))
    else:
        raise TypeError("expected IntegerPolynomial or PadicPolynomial")
    if not pts:
        raise ValueError("zero polynomial has no Newton polygon")
    zero_mult = pts[0][0]
    # lower convex hull, left to right (monotone chain on the lower side)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        length = x2 - x1
        if segments and segments[-1][0] == slope:
            segments[-1] = (slope, segments[-1][1] + length)
        else:
            segments.append((slope, length))
    assert all(s1 < s2 for (s1, _), (s2, _) in zip(segments, segments[1:]))
    return NewtonPolygon(p=p, segments=tuple(segments), zero_multiplicity=zero_mult)


# ----------------------------------------------------------------------
# Ring-level helpers (coordinates mod p^W, absolute scale)
# ----------------------------------------------------------------------

def _divmod_linear(poly, rho, r, q):
    """Synthetic division by (X - rho); returns (quotient, f(rho))."""
    n = len(poly) - 1
    quot = [r.zero_elem] * max(n, 0)
    acc = poly[n]
    for k in range(n - 1, -1, -1):
        quot[k] = acc
        acc = r.add(poly[k], r.mul(rho, acc, q), q)
    return quot, acc


def _eval_ring(poly, x, r, q):
    out = r.zero_elem
    for c in reversed(poly):
        out = r.add(r.mul(out, x, q), c, q)
    return out


def _derivative_ring(poly, q):
    return [tuple((i * x) % q for x in c) for i, c in enumerate(poly)][1:]


def _newton_refine(poly, r, y, W, t):
    """Newton iteration at fixed modulus p^W; t = ord of f'(y)."""
    q = r.p ** W
    dpoly = _derivative_ring(poly, q)
    for _ in range(W.bit_length() + 6):
        fy = _eval_ring(poly, y, r, q)
        v0 = r.coord_valuation(fy, W)
        if v0 >= W:
            return y
        fpy = _eval_ring(dpoly, y, r, q)
        vt = r.coord_valuation(fpy, W)
        assert vt == t, "derivative valuation drifted"
        qq = r.p ** (W - vt)
        u0 = r.shift_down(fy, vt, qq)
        u1 = r.shift_down(fpy, vt, qq)
        corr = r.mul(u0, r.inv(u1, qq), qq)
        y = r.sub(y, corr, q)
    fy = _eval_ring(poly, y, r, q)
    if r.coord_valuation(fy, W) + 0 < min(2 * (W - t), W):
        raise PrecisionExhausted("Newton iteration failed to converge")
    return y


def _integral_ring_roots(poly, r, W, collapse=False):
    """Roots in the ring of poly (coords mod p^W), as (coords, digits) pairs.

    poly must have unit content (some coefficient a p-unit).  Returned
    digits is the number of certified base-p digits of the root.

    With collapse=True a root branch that cannot be separated at the
    working precision (a repeated root, or a cluster below resolution) is
    reported once as a representative with the digits that were resolved,
    instead of raising PrecisionExhausted.
    """
    if W <= 0:
        if collapse:
            return [(r.zero_elem, 0)]
        raise PrecisionExhausted("working precision exhausted in root search")
    res_poly = [tuple(x % r.p for x in c) for c in poly]
    res_poly = residue.trim(res_poly)
    if not res_poly:
        raise PrecisionExhausted("polynomial vanishes at residue level")
    if residue.degree(res_poly) == 0:
        return []
    rr = residue.roots_in_field(r, res_poly)
    out = []
    q = r.p ** W
    for rho in rr:
        rho = tuple(rho)
        # Taylor coefficients of poly at rho
        taylor = []
        cur = list(poly)
        for _ in range(len(poly)):
            cur, remv = _divmod_linear(cur, rho, r, q)
            taylor.append(remv)
            if not cur:
                break
        v1 = r.coord_valuation(taylor[1], W) if len(taylor) > 1 else W
        if v1 == 0:
            # simple residue root: exactly one root above it, Hensel-liftable
            y = _newton_refine(poly, r, rho, W, 0)
            out.append((y, W))
            continue
        # shift: g(T) = poly(rho + pT), coefficient k picks up p^k
        shifted = []
        for k, tk in enumerate(taylor):
            pk = r.p ** min(k, W)
            shifted.append(tuple((x * pk) % q for x in tk))
        mu = min(r.coord_valuation(c, W) for c in shifted)
        if mu >= W:
            if collapse:
                out.append((rho, 1))
                continue
            raise PrecisionExhausted(
                "cannot separate root branch at working precision")
        W2 = W - mu
        q2 = r.p ** W2
        reduced = [r.shift_down(c, mu, q2) for c in shifted]
        for tau, digits in _integral_ring_roots(reduced, r, W2, collapse):
            g = min(W, 1 + digits)
            qg = r.p ** g
            root = r.add(rho, r.scalar_mul(r.p, tau, qg), qg)
            out.append((root, g))
    return out


def _residue_degree_of_root(x: PadicNumber):
    """Smallest e with frobenius^e fixing x at the stored precision."""
    from .padic import frobenius
    g = x.f
    for e in sorted(d for d in range(1, g + 1) if g % d == 0):
        y = x
        for _ in range(e):
            y = frobenius(y)
        if y.agrees_with(x):
            return e
    return g


# ----------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------

def hensel_lift(f, a0: PadicNumber, target_precision: int) -> PadicNumber:
    """Lift an approximate root to a certified one by Newton iteration.

    Precondition (checked): ord(f(a0)) > 2 ord(f'(a0)).  The returned root
    r satisfies ord(f(r)) >= target_precision and agrees with a0 on the
    initial Hensel ball.
    """
    if isinstance(f, IntegerPolynomial):
        coeff_ints = f.coeffs
        fa = f(a0)
        fpa = f.derivative()(a0)
    elif isinstance(f, PadicPolynomial):
        coeff_ints = None
        fa = f(a0)
        fpa = f.derivative()(a0)
    else:
        raise TypeError("expected IntegerPolynomial or PadicPolynomial")
    if fpa.is_zero() or fpa.is_exhausted():
        raise NonSmoothPoint("derivative vanishes (or is undecidable) at a0")
    t = fpa.ord()
    m = fa.ord_lower_bound()
    if not (m > 2 * t):
        raise NonSmoothPoint(
            f"Hensel precondition fails: ord f(a0) = {m} <= 2*ord f'(a0) = {2 * t}")
    if a0.ord_lower_bound() < 0:
        raise ValueError("hensel_lift expects an integral starting point")
    r = a0.ring
    W = target_precision + t + 2
    q = r.p ** W
    if coeff_ints is not None:
        poly = [tuple(([c % q] + [0] * (r.f - 1))) for c in coeff_ints]
    else:
        poly = _padic_coeffs_to_ring(f, W)
    y0 = _number_to_coords(a0, r, W)
    y = _newton_refine(poly, r, y0, W, t)
    return PadicNumber.from_coords(r, 0, y, W - t)


def _number_to_coords(x: PadicNumber, r, W):
    """Absolute-scale coordinates mod p^W of an integral number."""
    if x.is_zero():
        return r.zero_elem
    if x.is_exhausted():
        return r.zero_elem
    if x.v < 0:
        raise ValueError("not integral")
    q = r.p ** W
    pv = r.p ** x.v
    return tuple((c * pv) % q for c in x.coords)


def _padic_coeffs_to_ring(f: PadicPolynomial, W):
    r = f.ring
    return [_number_to_coords(c, r, W) for c in f.coeffs]


def roots_in_unramified(f: IntegerPolynomial, p: int, f_max: int,
                        precision: int = DEFAULT_PRECISION):
    """All distinct roots of f in unramified extensions of residue degree
    <= f_max, to the requested precision.

    Returns a list of PadicNumber, each living in the ring matching its
    residue degree.  Multiple roots are reported once (the search operates
    on the square-free part).  Roots of negative valuation are recovered
    from the reversed polynomial; an exact zero root is reported as the
    zero marker.
    """
    if f.degree < 1:
        return []
    sf = f.squarefree_part()
    out = []
    z = next(i for i, c in enumerate(sf.coeffs) if c)
    if z:
        out.append(PadicNumber.zero(p, 1))
        sf = IntegerPolynomial(sf.coeffs[z:])
    out.extend(_search_integral(sf, p, f_max, precision))
    # negative-valuation roots: positive-valuation roots of the reversal
    if int_valuation(sf.coeffs[-1], p) > 0 and sf.degree >= 1:
        rev = IntegerPolynomial(tuple(reversed(sf.coeffs)))
        for root in _search_integral(rev, p, f_max, precision):
            if not root.is_zero() and root.ord() >= 1:
                out.append(root ** (-1))
    return out


def _search_integral(f: IntegerPolynomial, p, f_max, precision):
    vmin = min(int_valuation(c, p) for c in f.coeffs if c)
    if vmin:
        f = IntegerPolynomial(tuple(c // p ** vmin for c in f.coeffs))
    found = []
    for g in range(1, f_max + 1):
        r = ring(p, g)
        W = precision + 16
        q = r.p ** W
        poly = [tuple([c % q] + [0] * (g - 1)) for c in f.coeffs]
        for coords, digits in _integral_ring_roots(poly, r, W):
            x = PadicNumber.from_coords(r, 0, coords, min(digits, precision + 8))
            if x.kind == "exh":
                # the root is divisible by more p-power than we certified
                raise PrecisionExhausted("root indistinguishable from zero")
            if _residue_degree_of_root(x) == g:
                found.append(_truncate(x, precision))
    return found


def _truncate(x: PadicNumber, N):
    if x.kind != "num" or x.N <= N:
        return x
    q = x.p ** N
    return PadicNumber(x.ring, "num", v=x.v,
                       coords=tuple(c % q for c in x.coords), N=N)


def padic_roots(f: PadicPolynomial, f_max: int, precision=None,
                collapse_clusters=True):
    """Roots of a p-adic-coefficient polynomial in unramified extensions.

    Coefficients must be integral with a unit leading coefficient.  Roots
    of residue degree e <= f_max are searched in the compositum of the
    coefficient field and the degree-e field.

    Repeated roots (or clusters of roots closer together than the working
    precision resolves) are reported once, as a representative carrying
    only the certified digits; with collapse_clusters=False such branches
    raise PrecisionExhausted instead.
    """
    r0 = f.ring
    p = r0.p
    if f.coeffs[-1].ord() != 0:
        raise ValueError("leading coefficient must be a unit")
    if precision is None:
        precision = DEFAULT_PRECISION
    avail = min((c.abs_precision() for c in f.coeffs if c.kind == "num"),
                default=DEFAULT_PRECISION)
    W = int(min(avail, precision))
    out = []
    for e in range(1, f_max + 1):
        h = math.lcm(r0.f, e)
        rh = ring(p, h)
        coeffs_h = [c.embed_into(h, rh) if not c.is_zero() else c
                    for c in f.coeffs]
        poly = []
        for c in coeffs_h:
            if c.is_zero():
                poly.append(rh.zero_elem)
            elif c.is_exhausted():
                if c.bound < W:
                    raise PrecisionExhausted("coefficient undecidable below target")
                poly.append(rh.zero_elem)
            else:
                poly.append(_number_to_coords(c, rh, W))
        for coords, digits in _integral_ring_roots(poly, rh, W,
                                                   collapse=collapse_clusters):
            x = PadicNumber.from_coords(rh, 0, coords, digits)
            if x.kind == "exh" and not collapse_clusters:
                # root cluster centered at 0 below resolution
                raise PrecisionExhausted("root indistinguishable from zero")
            if _residue_degree_of_root(x) == e:
                out.append(x)
    return out
