"""Modular polynomials, point-level Hecke images, p-adic distances to
algebraic sets, Gauss norms, and bounded ideal membership.

The distance of a point to a zero set is computed as the maximum of
|f(x)|_p over a *chosen generator set* of the vanishing ideal.  The true
distance is a supremum over every integral element of the ideal; the two
agree up to the explicit constant of the bounded-membership lemma (any
integral member is a combination f = sum a_i f_i with |a_i| <= c|f|, so
the sup over members is at most c times the generator max).  The
membership routine reports that c, which keeps the generator choice
auditable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import sympy

from .errors import CmproxError, NotInIdealAtCap, PrecisionExhausted
from .padic import INF, PadicNumber, fraction_valuation, ring
from .polyroots import PadicPolynomial, padic_roots
from .quadratic import reduction_type

SUPPORTED_LEVELS = (1, 2, 3, 5, 7)


def psi(N: int) -> int:
    """Degree of the level-N correspondence: N * prod_{l | N} (l+1)/l."""
    if N < 1:
        raise ValueError("level must be positive")
    out = N
    for ell in sympy.primefactors(N):
        out = out * (ell + 1) // ell
    return out


# ----------------------------------------------------------------------
# Modular polynomials
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ModularPolynomial:
    N: int
    coeffs: tuple     # ((xdeg, ydeg, c), ...), full symmetric expansion

    @property
    def degree(self) -> int:
        return psi(self.N)

    def coefficient_rows(self):
        """Mapping xdeg -> dense ascending list of Y-coefficients."""
        rows: dict = {}
        for i, j, c in self.coeffs:
            rows.setdefault(i, {})[j] = c
        deg = self.degree
        return {i: [row.get(j, 0) for j in range(deg + 1)]
                for i, row in rows.items()}

    def __call__(self, x, y):
        """Evaluate at a pair (numbers, Fractions, or PadicNumbers)."""
        rows = self.coefficient_rows()
        total = None
        for i in sorted(rows, reverse=True):
            inner = None
            for c in reversed(rows[i]):
                inner = c if inner is None else inner * y + c
            term = inner * x ** i if i else inner
            total = term if total is None else total + term
        return total

    def poly_in_y(self, x: PadicNumber) -> PadicPolynomial:
        """Phi_N(x, Y) as a univariate polynomial over x's ring."""
        rows = self.coefficient_rows()
        deg = self.degree
        ycoeffs = []
        for j in range(deg + 1):
            acc = PadicNumber.zero(x.p, x.f)
            for i in rows:
                c = rows[i][j]
                if c:
                    acc = acc + c * x ** i
            ycoeffs.append(acc)
        return PadicPolynomial(tuple(ycoeffs))


def _validate_table(N: int, entries) -> None:
    deg = psi(N)
    got_deg_x = max(i for i, _, _ in entries)
    got_deg_y = max(j for _, j, _ in entries)
    if got_deg_x != deg or got_deg_y != deg:
        raise CmproxError(
            f"phi_{N} table bidegree ({got_deg_x}, {got_deg_y}) != {deg}")
    table = {(i, j): c for i, j, c in entries}
    for (i, j), c in table.items():
        if table.get((j, i)) != c:
            raise CmproxError(f"phi_{N} table is not symmetric at {(i, j)}")
    if sympy.isprime(N):
        # Kronecker congruence mod N: Phi_N = (X^N - Y)(X - Y^N)
        ref: dict = {}
        for (i1, j1, c1) in ((N, 0, 1), (0, 1, -1)):
            for (i2, j2, c2) in ((1, 0, 1), (0, N, -1)):
                k = (i1 + i2, j1 + j2)
                ref[k] = (ref.get(k, 0) + c1 * c2) % N
        seen = {k: c % N for k, c in table.items() if c % N}
        if seen != {k: v for k, v in ref.items() if v}:
            raise CmproxError(
                f"phi_{N} table violates the Kronecker congruence mod {N}")
    if N == 2 and table.get((0, 0)) != -157464000000000:
        raise CmproxError("phi_2 constant coefficient is wrong")


@lru_cache(maxsize=None)
def modular_poly(N: int) -> ModularPolynomial:
    """The level-N modular polynomial from the vendored table."""
    if N not in SUPPORTED_LEVELS:
        raise ValueError(f"no table for level {N}; supported: {SUPPORTED_LEVELS}")
    if N == 1:
        return ModularPolynomial(N=1, coeffs=((1, 0, 1), (0, 1, -1)))
    text = resources.files("cmprox").joinpath("data", f"phi_{N}.txt").read_text()
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        i, j, c = line.split()
        i, j, c = int(i), int(j), int(c)
        entries.append((i, j, c))
        if i != j:
            entries.append((j, i, c))
    _validate_table(N, entries)
    return ModularPolynomial(N=N, coeffs=tuple(sorted(entries)))


# ----------------------------------------------------------------------
# Magnitudes (exact p-adic absolute values)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Magnitude:
    """p^(-exponent) kept exactly; exponent = +inf encodes 0."""

    p: int
    exponent: object    # Fraction, int, or math.inf

    @classmethod
    def zero(cls, p):
        return cls(p, INF)

    @classmethod
    def one(cls, p):
        return cls(p, 0)

    @classmethod
    def from_ord(cls, p, v):
        return cls(p, v)

    def is_zero(self) -> bool:
        return self.exponent == INF

    def __float__(self):
        if self.is_zero():
            return 0.0
        return float(self.p) ** float(-self.exponent)

    def __mul__(self, other):
        if isinstance(other, Magnitude):
            assert other.p == self.p
            if self.is_zero() or other.is_zero():
                return Magnitude.zero(self.p)
            return Magnitude(self.p, self.exponent + other.exponent)
        return NotImplemented

    def _cmp_key(self):
        return -self.exponent if not self.is_zero() else -INF

    def __le__(self, other):
        return self._cmp_key() <= other._cmp_key()

    def __lt__(self, other):
        return self._cmp_key() < other._cmp_key()

    def __repr__(self):
        if self.is_zero():
            return "|0|"
        return f"{self.p}^-{self.exponent}"


def magnitude_max(items):
    return max(items, key=Magnitude._cmp_key)


def magnitude_min(items):
    return min(items, key=Magnitude._cmp_key)


# ----------------------------------------------------------------------
# Multivariate polynomials over Q with p-integral coefficients
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    nvars: int
    terms: tuple     # ((exponent tuple, Fraction), ...) sorted

    @classmethod
    def build(cls, nvars, mapping):
        terms = tuple(sorted(
            (tuple(e), Fraction(c)) for e, c in dict(mapping).items()
            if Fraction(c) != 0))
        return cls(nvars=nvars, terms=terms)

    @classmethod
    def variable(cls, nvars, k):
        e = [0] * nvars
        e[k] = 1
        return cls.build(nvars, {tuple(e): 1})

    @classmethod
    def constant(cls, nvars, c):
        return cls.build(nvars, {(0,) * nvars: c})

    def total_degree(self):
        return max((sum(e) for e, _ in self.terms), default=0)

    def gauss_ord(self, p):
        """min_p of coefficient valuations; INF for the zero polynomial."""
        if not self.terms:
            return INF
        return min(fraction_valuation(c, p) for _, c in self.terms)

    def __add__(self, other):
        acc = {e: c for e, c in self.terms}
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return MultiPoly.build(self.nvars, acc)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiPoly.build(self.nvars,
                                   {e: c * other for e, c in self.terms})
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return MultiPoly.build(self.nvars, acc)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __sub__(self, other):
        return self + other * Fraction(-1)

    def evaluate(self, point):
        """Evaluate at a tuple of PadicNumber coordinates."""
        total = None
        for e, c in self.terms:
            term = None
            for x, k in zip(point, e):
                if k:
                    term = x ** k if term is None else term * x ** k
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return PadicNumber.zero(point[0].p, point[0].f)
        if isinstance(total, (int, Fraction)):
            x0 = point[0]
            return PadicNumber.from_fraction(Fraction(total), x0.p, x0.f,
                                             x0.N if x0.kind == "num" else 32)
        return total

    def evaluate_exact(self, point):
        """Evaluate at exact rational coordinates."""
        total = Fraction(0)
        for e, c in self.terms:
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= Fraction(x) ** k
            total += term
        return total

    def lift_to_product(self, total_vars, offset):
        """Reinterpret in a larger variable ring, variables shifted by offset."""
        out = {}
        for e, c in self.terms:
            ee = [0] * total_vars
            for k, v in enumerate(e):
                ee[offset + k] = v
            out[tuple(ee)] = c
        return MultiPoly.build(total_vars, out)


def gauss_norm(f: MultiPoly, p: int) -> Magnitude:
    """Maximum p-adic absolute value of the coefficients."""
    return Magnitude.from_ord(p, f.gauss_ord(p))


@dataclass(frozen=True)
class IdealPresentation:
    """A finite generator set for (the integral part of) a vanishing ideal."""

    nvars: int
    p: int
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if g.nvars != self.nvars:
                raise ValueError("generator variable count mismatch")
            if g.gauss_ord(self.p) < 0:
                raise ValueError(
                    "generators must be p-integral (Gauss norm <= 1)")


def distance(x, ideal: IdealPresentation) -> Magnitude:
    """max_f |f(x)|_p over the supplied generators.

    Zero exactly when every generator vanishes at the stored precision.
    Raises PrecisionExhausted when an undecidable (all digits cancelled)
    generator value could exceed every decidable one, so the max itself is
    undecidable.
    """
    p = ideal.p
    for xi in x:
        if xi.ord_lower_bound() < 0:
            raise ValueError("distance requires integral coordinates")
    decided = []
    undecided_bounds = []
    for g in ideal.generators:
        val = g.evaluate(x)
        if val.is_zero():
            continue
        if val.is_exhausted():
            undecided_bounds.append(val.bound)
        else:
            decided.append(val.ord())
    if not decided:
        return Magnitude.zero(p)
    v = min(decided)
    if any(b < v for b in undecided_bounds):
        raise PrecisionExhausted(
            "distance undecidable: a precision-exhausted generator value "
            "may dominate the decidable maximum")
    return Magnitude.from_ord(p, v)


def sup_norm_difference(x, y) -> Magnitude:
    """|x - y|_p as the max over coordinates, exact or an error."""
    p = x[0].p
    decided = []
    bounds = []
    for xi, yi in zip(x, y):
        d = xi - yi
        if d.is_zero():
            continue
        if d.is_exhausted():
            bounds.append(d.bound)
        else:
            decided.append(d.ord())
    if not decided:
        return Magnitude.zero(p)
    v = min(decided)
    if any(b < v for b in bounds):
        raise PrecisionExhausted("sup norm undecidable at stored precision")
    return Magnitude.from_ord(p, v)


def distance_prime_upper(x, samples, ideal: IdealPresentation | None = None):
    """min over sample points of Z of the sup-norm |x - y|_p.

    This upper-bounds the infimum-over-Z distance; when the generator
    presentation is supplied the chain distance(x, I) <= result is asserted
    (generator values vanish on Z, so each |f(x)| = |f(x)-f(y)| <= |x-y|).
    """
    if not samples:
        raise ValueError("need at least one sample point of Z")
    best = magnitude_min([sup_norm_difference(x, y) for y in samples])
    if ideal is not None:
        d = distance(x, ideal)
        assert d <= best, "generator distance exceeded the sample upper bound"
    return best


# ----------------------------------------------------------------------
# Bounded ideal membership (row echelon with explicit transformation)
# ----------------------------------------------------------------------

def _monomials_upto(nvars, deg):
    out = []
    for total in range(deg + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), total):
            e = [0] * nvars
            for k in combo:
                e[k] += 1
            out.append(tuple(e))
    return sorted(out)


@dataclass(frozen=True)
class MembershipCertificate:
    multipliers: tuple      # one MultiPoly per generator
    constant: Magnitude     # the c of the norm bound
    f_norm: Magnitude
    multiplier_norm: Magnitude


def ideal_membership_bounded(f: MultiPoly, generators, cap: int,
                             p: int) -> MembershipCertificate:
    """Decide f = sum a_i f_i with deg a_i <= cap; control |a_i| <= c |f|.

    The certificate constant c is the maximal p-adic magnitude of the
    entries of the transformation matrix taking the stacked products
    (monomial * generator) to reduced row echelon form; the returned
    multipliers provably satisfy max |a_i|_p <= c |f|_p.
    """
    nvars = f.nvars
    mults = _monomials_upto(nvars, cap)
    rows = []        # coefficient vectors of mu * f_i
    tags = []        # (generator index, mu)
    degmax = cap + max(g.total_degree() for g in generators)
    degmax = max(degmax, f.total_degree())
    cols = _monomials_upto(nvars, degmax)
    col_index = {m: k for k, m in enumerate(cols)}
    for gi, g in enumerate(generators):
        for mu in mults:
            prod = g * MultiPoly.build(nvars, {mu: 1})
            vec = [Fraction(0)] * len(cols)
            for e, c in prod.terms:
                vec[col_index[e]] = c
            rows.append(vec)
            tags.append((gi, mu))
    n_rows = len(rows)
    # RREF with an augmented identity: U @ original = R
    U = [[Fraction(1 if i == j else 0) for j in range(n_rows)]
         for i in range(n_rows)]
    R = [row[:] for row in rows]
    pivots = []     # (row, col)
    rr = 0
    for col in range(len(cols)):
        sel = None
        for i in range(rr, n_rows):
            if R[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        R[rr], R[sel] = R[sel], R[rr]
        U[rr], U[sel] = U[sel], U[rr]
        inv = 1 / R[rr][col]
        R[rr] = [v * inv for v in R[rr]]
        U[rr] = [v * inv for v in U[rr]]
        for i in range(n_rows):
            if i != rr and R[i][col] != 0:
                t = R[i][col]
                R[i] = [a - t * b for a, b in zip(R[i], R[rr])]
                U[i] = [a - t * b for a, b in zip(U[i], U[rr])]
        pivots.append((rr, col))
        rr += 1
    # express f against the echelon rows
    residual = [Fraction(0)] * len(cols)
    for e, c in f.terms:
        residual[col_index[e]] = c
    combo = [Fraction(0)] * n_rows
    for row_i, col in pivots:
        t = residual[col]
        if t:
            combo[row_i] = t
            residual = [a - t * b for a, b in zip(residual, R[row_i])]
    if any(residual):
        raise NotInIdealAtCap(
            f"not in the ideal at multiplier degree cap {cap}")
    # pull multipliers back through the transformation
    coeff_per_row = [Fraction(0)] * n_rows
    for i in range(n_rows):
        coeff_per_row[i] = sum(combo[k] * U[k][i] for k in range(n_rows))
    per_gen: dict = {gi: {} for gi in range(len(generators))}
    for (gi, mu), c in zip(tags, coeff_per_row):
        if c:
            per_gen[gi][mu] = per_gen[gi].get(mu, 0) + c
    multipliers = tuple(MultiPoly.build(nvars, per_gen[gi])
                        for gi in range(len(generators)))
    c_ord = min((fraction_valuation(v, p)
                 for row in U for v in row if v != 0), default=0)
    c_mag = Magnitude.from_ord(p, min(c_ord, 0))
    f_norm = gauss_norm(f, p)
    a_norm = magnitude_max([gauss_norm(a, p) for a in multipliers]
                           ) if multipliers else Magnitude.zero(p)
    assert a_norm <= c_mag * f_norm, "membership norm bound violated"
    return MembershipCertificate(multipliers=multipliers, constant=c_mag,
                                 f_norm=f_norm, multiplier_norm=a_norm)


# ----------------------------------------------------------------------
# Union / product distance inequalities
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceComparison:
    mode: str
    left: Magnitude
    middle: Magnitude
    right: Magnitude
    holds: bool


def check_union_product_distances(x, ideal_a: IdealPresentation,
                                  ideal_b: IdealPresentation,
                                  mode: str, y=None) -> DistanceComparison:
    """Distance inequalities for unions and products of zero sets.

    union: generators of I(Z)I(Z') (pairwise products) present Z union Z';
    checks dist(x,Z) dist(x,Z') <= dist(x, Z u Z') <= min of the two.
    product: lifted generator union presents Z x Z'; checks
    max(dist(x,Z), dist(y,Z')) <= dist((x,y), Z x Z') (with equality for
    this presentation).
    """
    if mode == "union":
        if ideal_a.nvars != ideal_b.nvars:
            raise ValueError("union requires equal variable counts")
        products = tuple(g1 * g2 for g1 in ideal_a.generators
                         for g2 in ideal_b.generators)
        union_ideal = IdealPresentation(nvars=ideal_a.nvars, p=ideal_a.p,
                                        generators=products)
        da = distance(x, ideal_a)
        db = distance(x, ideal_b)
        du = distance(x, union_ideal)
        lower = da * db
        upper = magnitude_min([da, db])
        holds = lower <= du <= upper
        return DistanceComparison(mode="union", left=lower, middle=du,
                                  right=upper, holds=holds)
    if mode == "product":
        if y is None:
            raise ValueError("product mode needs the second point")
        total = ideal_a.nvars + ideal_b.nvars
        lifted = tuple(g.lift_to_product(total, 0)
                       for g in ideal_a.generators) + \
            tuple(g.lift_to_product(total, ideal_a.nvars)
                  for g in ideal_b.generators)
        prod_ideal = IdealPresentation(nvars=total, p=ideal_a.p,
                                       generators=lifted)
        da = distance(x, ideal_a)
        db = distance(y, ideal_b)
        dp = distance(tuple(x) + tuple(y), prod_ideal)
        lower = magnitude_max([da, db])
        holds = lower <= dp
        return DistanceComparison(mode="product", left=lower, middle=dp,
                                  right=lower, holds=holds)
    raise ValueError(f"unknown mode {mode!r}")


# ----------------------------------------------------------------------
# Hecke images of points
# ----------------------------------------------------------------------

def hecke_image_point(x, levels, f_max: int = 6, precision=None):
    """Coordinatewise unramified solutions of Phi_{N_i}(x_i, Y) = 0,
    combined as a product set.

    Only roots lying in unramified extensions of residue degree <= f_max
    are produced; each coordinate contributes at most Psi(N_i) of them.
    """
    per_coord = []
    for xi, Ni in zip(x, levels):
        if Ni == 1:
            per_coord.append([xi])
            continue
        phi = modular_poly(Ni)
        poly = phi.poly_in_y(xi)
        roots = padic_roots(poly, f_max=f_max, precision=precision)
        if len(roots) > psi(Ni):
            raise CmproxError(
                f"level-{Ni} fiber has {len(roots)} > Psi = {psi(Ni)} roots")
        per_coord.append(roots)
    return [tuple(combo) for combo in itertools.product(*per_coord)]


# ----------------------------------------------------------------------
# Rigidity threshold checks for pairs of ordinary singular moduli
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrdinaryModulus:
    """One explicit unramified root of a class polynomial, tagged by d."""
    d: int
    root: PadicNumber

    def __post_init__(self):
        if not isinstance(self.root, PadicNumber):
            raise TypeError("root must be a PadicNumber")
        if reduction_type(self.d, self.root.ring.p) != "ordinary":
            raise ValueError(
                f"d = {self.d} is supersingular at p = {self.root.ring.p}")


@dataclass(frozen=True)
class RigidityReport:
    N: int
    p: int
    threshold: Fraction
    order: object           # Fraction/int, INF for certified zero, None if n/a
    certified_zero: bool
    passed: bool
    note: str = ""


@lru_cache(maxsize=None)
def _certify_zero_by_resultant(d1: int, d2: int, N: int) -> bool:
    """Exact algebraic certificate that Phi_N vanishes on some pair of
    roots of H_{d1}, H_{d2}: the resultant of H_{d1}(X) and Phi_N(X, Y)
    with respect to X shares a factor with H_{d2}(Y)."""
    from .classpoly import hilbert_class_poly
    X, Y = sympy.symbols("X Y")
    h1 = sum(c * X ** k for k, c in enumerate(hilbert_class_poly(d1).coeffs))
    h2 = sum(c * Y ** k for k, c in enumerate(hilbert_class_poly(d2).coeffs))
    phi = modular_poly(N)
    phi_expr = sum(c * X ** i * Y ** j for i, j, c in phi.coeffs)
    res = sympy.resultant(h1, phi_expr, X)
    g = sympy.gcd(sympy.Poly(res, Y), sympy.Poly(h2, Y))
    return sympy.degree(g, Y) >= 1


def rigidity_threshold_check(x1: OrdinaryModulus, x2: OrdinaryModulus,
                             N: int, p: int) -> RigidityReport:
    """ord_p Phi_N(x1, x2) against the threshold 6 Psi(N)/(p-1).

    PASS when the valuation stays at or below the threshold, or when the
    value is certified zero by exact resultant arithmetic (for N = 1, an
    exact zero can only be the same root twice).  A value that vanishes at
    working precision without a certificate raises PrecisionExhausted.
    """
    for xm in (x1, x2):
        if xm.root.ring.p != p:
            raise ValueError("root lives over a different prime")
        if reduction_type(xm.d, p) != "ordinary":
            raise ValueError(f"d = {xm.d} is not ordinary at {p}")
    threshold = Fraction(6 * psi(N), p - 1)
    a, b = x1.root, x2.root
    F = math.lcm(a.f, b.f)
    big = ring(p, F)
    a = a.embed_into(F, big)
    b = b.embed_into(F, big)
    if N == 1:
        val = a - b
    else:
        val = modular_poly(N)(a, b)
    if val.is_zero() or val.is_exhausted():
        certified = (x1.d == x2.d and x1.root is x2.root) if N == 1 else \
            _certify_zero_by_resultant(x1.d, x2.d, N)
        if certified:
            return RigidityReport(N=N, p=p, threshold=threshold, order=INF,
                                  certified_zero=True, passed=True,
                                  note="exact zero (resultant certificate)"
                                  if N > 1 else "identical root")
        raise PrecisionExhausted(
            f"Phi_{N}(x1, x2) vanishes at working precision with no exact "
            f"certificate (bound {val.ord_lower_bound()})")
    v = val.ord()
    return RigidityReport(N=N, p=p, threshold=threshold, order=v,
                          certified_zero=False, passed=v <= threshold,
                          note="")
