"""Exact arithmetic in the rational quaternion algebra ramified at p
and infinity, presented over K = Q(sqrt(-3)).

Elements are pairs [alpha, beta] with alpha, beta in K, multiplying by
u^2 = -7p and u*alpha = conj(alpha)*u where u = [0, 1]; K sits inside
via alpha -> [alpha, 0].  K itself is handled in the theta-basis,
theta = (1 + sqrt(-3))/2 with theta^2 = theta - 1, so everything is a
pair of exact rationals and all traces, norms and memberships are
decided exactly.

The distinguished order consists of the [alpha, beta] with
alpha in D^-1, beta in q^-1 D^-1 and alpha - 7 beta integral, where
D = sqrt(-3) Z[theta] is the different and q = (2 + sqrt(-3)) Z[theta]
(a prime above 7).  Both fractional-ideal memberships reduce to
integrality of two fixed linear forms in the theta-coordinates:

* alpha = u + v theta in D^-1      <=>  u + 2v and 2u + v in Z,
  because sqrt(-3) (u + v theta) = -(u + 2v) + (2u + v) theta;
* beta = u + v theta in q^-1 D^-1  <=>  5u + 4v and 4u - v in Z,
  because (2 + sqrt(-3)) sqrt(-3) = 4 theta - 5 and
  (4 theta - 5)(u + v theta) = -(5u + 4v) + (4u - v) theta.

A brute-force lattice oracle (is the element an integer combination of
the standard basis?) double-checks these congruences in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

__all__ = [
    "EisensteinNumber",
    "QuaternionElement",
    "OrderBasis",
    "standard_basis",
    "order_contains",
    "order_contains_lattice",
    "gram_matrix",
    "PhiCertificate",
    "construct_phi",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x)!r}")


@dataclass(frozen=True)
class EisensteinNumber:
    """u + v*theta with theta = (1 + sqrt(-3))/2, exact rationals.

    theta^2 = theta - 1; conjugation sends theta to 1 - theta.
    """
    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", _frac(self.u))
        object.__setattr__(self, "v", _frac(self.v))

    @classmethod
    def from_int(cls, n) -> "EisensteinNumber":
        return cls(Fraction(n), Fraction(0))

    def _coerce(self, other):
        if isinstance(other, EisensteinNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return EisensteinNumber.from_int(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return EisensteinNumber(self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinNumber(-self.u, -self.v)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        # (u1 + v1 t)(u2 + v2 t) with t^2 = t - 1
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return EisensteinNumber(u1 * u2 - v1 * v2,
                                u1 * v2 + v1 * u2 + v1 * v2)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinNumber":
        return EisensteinNumber(self.u + self.v, -self.v)

    @property
    def norm(self) -> Fraction:
        return self.u * self.u + self.u * self.v + self.v * self.v

    @property
    def trace(self) -> Fraction:
        return 2 * self.u + self.v

    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __repr__(self):
        return f"({self.u}) + ({self.v})*theta"


_ZERO = EisensteinNumber(0, 0)
_ONE = EisensteinNumber(1, 0)
THETA = EisensteinNumber(0, 1)
SQRT_M3 = EisensteinNumber(-1, 2)  # 2*theta - 1


@dataclass(frozen=True)
class QuaternionElement:
    """[alpha, beta] in the algebra with u^2 = -7p, u a = conj(a) u."""
    alpha: EisensteinNumber
    beta: EisensteinNumber
    p: int

    @classmethod
    def from_scalar(cls, a, p) -> "QuaternionElement":
        if isinstance(a, (int, Fraction)):
            a = EisensteinNumber.from_int(a)
        return cls(a, _ZERO, p)

    def _coerce(self, other):
        if isinstance(other, QuaternionElement):
            if other.p != self.p:
                raise ValueError("elements live over different primes")
            return other
        if isinstance(other, (int, Fraction, EisensteinNumber)):
            return QuaternionElement.from_scalar(other, self.p)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuaternionElement(self.alpha + other.alpha,
                                 self.beta + other.beta, self.p)

    __radd__ = __add__

    def __neg__(self):
        return QuaternionElement(-self.alpha, -self.beta, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.alpha, self.beta, other.alpha, other.beta
        return QuaternionElement(
            a * c - 7 * self.p * (b * d.conjugate()),
            a * d + b * c.conjugate(),
            self.p,
        )

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self

    def conjugate(self) -> "QuaternionElement":
        return QuaternionElement(self.alpha.conjugate(), -self.beta, self.p)

    @property
    def reduced_trace(self) -> Fraction:
        return self.alpha.trace

    @property
    def reduced_norm(self) -> Fraction:
        return self.alpha.norm + 7 * self.p * self.beta.norm

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def matrix_form(self):
        """2x2 matrix over K rendering the element; rows of pairs.

        The embedding sends [alpha, beta] to
        ((alpha, beta), (-7p conj(beta), conj(alpha))); its matrix trace
        equals the reduced trace and its determinant the reduced norm.
        """
        return (
            (self.alpha, self.beta),
            (-7 * self.p * self.beta.conjugate(), self.alpha.conjugate()),
        )

    def __repr__(self):
        return f"[{self.alpha}, {self.beta}]@p={self.p}"


# ----------------------------------------------------------------------
# The order and its standard basis
# ----------------------------------------------------------------------

def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def order_contains(x: QuaternionElement) -> bool:
    """Exact membership in the distinguished maximal order.

    Checks the three defining conditions through the fixed linear forms
    derived in the module docstring.
    """
    a, b = x.alpha, x.beta
    if not (_is_int(a.u + 2 * a.v) and _is_int(2 * a.u + a.v)):
        return False
    if not (_is_int(5 * b.u + 4 * b.v) and _is_int(4 * b.u - b.v)):
        return False
    diff = a - 7 * b
    return _is_int(diff.u) and _is_int(diff.v)


@dataclass(frozen=True)
class OrderBasis:
    """The four standard generators of the order as a Z-module."""
    b1: QuaternionElement
    b2: QuaternionElement
    b3: QuaternionElement
    b4: QuaternionElement

    def elements(self):
        return (self.b1, self.b2, self.b3, self.b4)


def standard_basis(p: int) -> OrderBasis:
    """b1 = [1-2theta, 0], b2 = [1-theta, 0],
    b3 = [(1-2theta)/3, (4-5theta)/21], b4 = [1-theta, (3-9theta)/21]."""
    F = Fraction
    basis = OrderBasis(
        QuaternionElement(EisensteinNumber(1, -2), _ZERO, p),
        QuaternionElement(EisensteinNumber(1, -1), _ZERO, p),
        QuaternionElement(EisensteinNumber(F(1, 3), F(-2, 3)),
                          EisensteinNumber(F(4, 21), F(-5, 21)), p),
        QuaternionElement(EisensteinNumber(1, -1),
                          EisensteinNumber(F(3, 21), F(-9, 21)), p),
    )
    for b in basis.elements():
        if not order_contains(b):
            raise ArithmeticError(f"basis element {b} fails membership")
    return basis


def _coords(x: QuaternionElement):
    return (x.alpha.u, x.alpha.v, x.beta.u, x.beta.v)


def order_contains_lattice(x: QuaternionElement) -> bool:
    """Membership oracle: solve for integer coordinates in the basis.

    Exact Gaussian elimination over Q on the 4x4 coordinate matrix of
    the standard basis; independent of the congruence route.
    """
    basis = standard_basis(x.p)
    cols = [_coords(b) for b in basis.elements()]
    # rows: equations per coordinate; unknowns: the four multiplicities
    aug = [[cols[j][i] for j in range(4)] + [_coords(x)[i]]
           for i in range(4)]
    for col in range(4):
        piv = next(r for r in range(col, 4) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(4):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return all(aug[r][4].denominator == 1 for r in range(4))


def _det4(m):
    """Determinant of a 4x4 matrix of Fractions by cofactor expansion."""
    def det3(a):
        return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    total = Fraction(0)
    for j in range(4):
        minor = [[m[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * m[0][j] * det3(minor)
    return total


def gram_matrix(p: int):
    """Matrix of reduced traces tr(b_i b_j) and its determinant.

    Requires p an odd prime with p = 2 mod 3 (inert in K).  Computed
    from the actual quaternion products, not from a stored table.
    """
    if p % 2 == 0 or p % 3 != 2 or not sympy.isprime(p):
        raise ValueError("p must be an odd prime congruent to 2 mod 3")
    bs = standard_basis(p).elements()
    gram = [[(bi * bj).reduced_trace for bj in bs] for bi in bs]
    return gram, _det4(gram)


# ----------------------------------------------------------------------
# The trace-one endomorphism with prescribed norm
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PhiCertificate:
    """Witnesses for the two claims about phi.

    scalar_part + p^n * order_part = phi exhibits membership in
    Z[theta] + p^n * (order); identity_defect is phi^2 - phi + (1+d)/4
    and must be zero.
    """
    d: int
    scalar_part: EisensteinNumber
    order_part: QuaternionElement
    identity_defect: QuaternionElement

    @property
    def ok(self) -> bool:
        return (self.scalar_part.is_integral()
                and order_contains(self.order_part)
                and self.identity_defect.is_zero())


def construct_phi(n: int, x: int, p: int):
    """phi = [1/2 - (2 theta - 1) x / 2, (3 - 2 theta) p^n / 7].

    Returns (phi, certificate) where the certificate witnesses
    phi in Z[theta] + p^n * (order) and phi^2 - phi + (1+d)/4 = 0 with
    d = 3 x^2 + 4 p^(2n+1).  Requires n >= 0 and x odd.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if x % 2 == 0:
        raise ValueError("x must be odd")
    F = Fraction
    alpha = EisensteinNumber(F(1 + x, 2), F(-x))
    unit_beta = EisensteinNumber(F(3, 7), F(-2, 7))   # (3 - 2 theta)/7
    beta = p ** n * unit_beta
    phi = QuaternionElement(alpha, beta, p)

    d = 3 * x * x + 4 * p ** (2 * n + 1)
    defect = phi * phi - phi + F(1 + d, 4)
    cert = PhiCertificate(
        d=d,
        scalar_part=alpha,
        order_part=QuaternionElement(_ZERO, unit_beta, p),
        identity_defect=defect,
    )
    if not cert.ok:
        raise ArithmeticError(f"construction invariants failed for {phi}")
    return phi, cert
