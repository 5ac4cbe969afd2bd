"""Exact 2x2 matrix constructions over Q_p.

Two pieces of machinery live here:

* a checkable form of the valuation identity
  ``ord_p(gamma^D - 1) = ord_p(D) + ord_p(gamma - 1)`` for
  ``gamma = 1 mod p`` and odd ``p`` (for ``p = 2`` only an inequality
  survives), and

* the construction of a diagonal matrix ``diag(p^-e a^D, p^-e b^D)``
  whose conjugates ``B_i = A_i^-1 diag(...) A_i`` under finitely many
  given matrices ``A_i`` are all integral, not all divisible by ``p``,
  and whose determinant valuation sits in a controlled window.

Matrices are stored with exact rational entries.  Every quantity the
construction needs (valuations, the exponent ``e``) is an exact integer
computed symbolically, so no working precision is ever involved; the
p-adic-number route only appears in tests as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateMatrix, PrecisionExhausted
from .padic import INF, PadicNumber, fraction_valuation, int_valuation

__all__ = [
    "LogOrderRecord",
    "log_order_predicate",
    "MatrixGL2",
    "compute_k_i",
    "ConjugatorResult",
    "construct_conjugator",
    "random_gl2",
]


# ----------------------------------------------------------------------
# ord(gamma^D - 1) versus ord(D) + ord(gamma - 1)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LogOrderRecord:
    """Both sides of the multiplicativity check, as exact valuations.

    For odd p the claim is lhs == rhs with
    rhs = ord_p(D) + ord_p(gamma - 1); for p = 2 it is lhs <= rhs with
    rhs = ord_2(D) + ord_2(gamma^2 - 1) - 1.  INF encodes gamma^D = 1.
    """
    p: int
    D: int
    lhs: object
    rhs: object
    relation: str  # "eq" or "le"

    @property
    def holds(self) -> bool:
        if self.relation == "eq":
            return self.lhs == self.rhs
        return self.lhs <= self.rhs


def _ord_of(x, p):
    """Valuation of an exact rational or a PadicNumber.

    PadicNumber.ord raises PrecisionExhausted when the value cancelled
    to below the stored precision, which is exactly the error contract
    the predicate advertises.
    """
    if isinstance(x, PadicNumber):
        if x.ring.p != p:
            raise ValueError("number lives over a different prime")
        if x.ring.f != 1:
            raise ValueError("expected a number in Q_p (residue degree 1)")
        if x.is_zero():
            return INF
        return x.ord()
    return fraction_valuation(Fraction(x), p)


def log_order_predicate(gamma, D: int) -> LogOrderRecord:
    """Check the valuation identity for gamma in 1 + pZ_p.

    ``gamma`` may be an exact int/Fraction together with an explicit
    prime (pass a PadicNumber to carry its own prime).  For exact input
    use ``log_order_predicate((gamma, p), D)``.

    Returns the record with both sides; raises ArithmeticError if the
    relation fails (it is a theorem, so a failure means a bug) and
    PrecisionExhausted when a p-adic input has too few digits to decide
    either side.
    """
    if isinstance(gamma, tuple):
        gamma, p = gamma
        gamma = Fraction(gamma)
    elif isinstance(gamma, PadicNumber):
        p = gamma.ring.p
    else:
        raise TypeError("pass a PadicNumber or a (rational, prime) pair")
    if D < 1:
        raise ValueError("D must be a positive integer")

    v1 = _ord_of(gamma - 1, p)
    if v1 != INF and v1 < 1:
        raise ValueError("gamma must be congruent to 1 mod p")

    lhs = _ord_of(gamma ** D - 1, p)
    vD = int_valuation(D, p) if D % p == 0 else 0
    if p >= 3:
        rhs = vD + v1
        rec = LogOrderRecord(p, D, lhs, rhs, "eq")
    else:
        v2 = _ord_of(gamma * gamma - 1, p)
        rhs = vD + v2 - 1 if v2 != INF else INF
        rec = LogOrderRecord(p, D, lhs, rhs, "le")
    if not rec.holds:
        raise ArithmeticError(f"valuation identity violated: {rec}")
    return rec


# ----------------------------------------------------------------------
# Exact rational 2x2 matrices
# ----------------------------------------------------------------------

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"matrix entries must be exact rationals, got {type(x)!r}")


@dataclass(frozen=True)
class MatrixGL2:
    """Invertible 2x2 matrix over Q, viewed inside GL_2(Q_p).

    Entries are exact rationals, so the determinant valuation is an
    exact integer rather than a stored-precision statement.
    """
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    p: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.det == 0:
            raise DegenerateMatrix("matrix is singular")

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def det_valuation(self) -> int:
        return fraction_valuation(self.det, self.p)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def scale(self, s) -> "MatrixGL2":
        s = Fraction(s)
        if s == 0:
            raise DegenerateMatrix("cannot scale by zero")
        return MatrixGL2(s * self.a, s * self.b, s * self.c, s * self.d, self.p)

    def mul(self, other: "MatrixGL2") -> "MatrixGL2":
        if other.p != self.p:
            raise ValueError("matrices live over different primes")
        return MatrixGL2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.p,
        )

    def inverse(self) -> "MatrixGL2":
        dt = self.det
        return MatrixGL2(self.d / dt, -self.b / dt,
                         -self.c / dt, self.a / dt, self.p)

    def conjugated_diagonal(self, u, v) -> "MatrixGL2":
        """A^-1 diag(u, v) A, exactly."""
        u, v = Fraction(u), Fraction(v)
        diag = MatrixGL2(u, 0, 0, v, self.p)
        return self.inverse().mul(diag).mul(self)

    def is_integral(self) -> bool:
        """All entries in Z_p."""
        return all(fraction_valuation(x, self.p) >= 0 for x in self.entries())

    def in_p_matrices(self) -> bool:
        """All entries in pZ_p."""
        return all(fraction_valuation(x, self.p) >= 1 for x in self.entries())


def compute_k_i(A: MatrixGL2) -> int:
    """ord(det A) minus the least valuation among ad, bd, ac.

    Invariant under rescaling A by a nonzero scalar: scaling by s adds
    2 ord(s) to both the determinant term and each product term.
    """
    p = A.p
    prods = (A.a * A.d, A.b * A.d, A.a * A.c)
    vals = [fraction_valuation(x, p) for x in prods if x != 0]
    if not vals:
        raise DegenerateMatrix(
            "all of ad, bd, ac vanish; the construction needs one of them")
    return A.det_valuation - min(vals)


# ----------------------------------------------------------------------
# The conjugator construction
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ConjugatorResult:
    """Outcome of the diagonal-conjugator construction.

    alpha, beta are exact integers (powers of p, or p^k0 + p^k); the
    diagonal matrix is diag(p^-e alpha^D, p^-e beta^D).  k_values are
    the per-matrix invariants, k their maximum and case records which
    branch was taken.
    """
    p: int
    D: int
    k0: int
    alpha: int
    beta: int
    e: int
    k_values: tuple
    k: int
    case: str                    # "k<=k0" or "k>k0"
    matrices: tuple              # the conjugates B_i, one per input


def _exact_e_large_k(p: int, k0: int, k: int, D: int) -> int:
    """ord_p(alpha^D - beta^D) - k for alpha = p^k0 + p^k, beta = p^k0.

    Factoring out beta^D reduces this to ord_p(gamma^D - 1) for
    gamma = 1 + p^(k - k0), which is exact: for odd p it is
    ord_p(D) + (k - k0); for p = 2 the lifting-the-exponent identity
    gives ord(gamma - 1) for odd D and
    ord(gamma - 1) + ord(gamma + 1) + ord(D) - 1 for even D.  Either
    way no big power of alpha is ever expanded.
    """
    m = k - k0
    vD = int_valuation(D, p) if D % p == 0 else 0
    if p >= 3:
        ord_gd1 = vD + m
    elif D % 2 == 1:
        ord_gd1 = m
    else:
        # ord_2(gamma + 1) = ord_2(2^m + 2): 2 when m = 1, else 1
        ord_gp1 = 2 if m == 1 else 1
        ord_gd1 = m + ord_gp1 + vD - 1
    return D * k0 + ord_gd1 - k


def construct_conjugator(matrices: Sequence[MatrixGL2], k0: int,
                         D: int) -> ConjugatorResult:
    """Build diag(p^-e alpha^D, p^-e beta^D) and its conjugates B_i.

    Requires k0 >= 2 ord_p(2D) and at least one matrix; all matrices
    must share one prime.  The result satisfies, by construction:

    * every B_i is integral and some B_i is not in p M_2(Z_p);
    * k0 <= ord_p(p^-2e alpha^D beta^D) <= 3 D k0;
    * in the k > k0 case additionally 0 <= e <= D k0 - k0/2.

    These are verified before returning; a violation raises
    ArithmeticError since it can only come from an implementation bug.
    """
    if not matrices:
        raise ValueError("need at least one matrix")
    p = matrices[0].p
    if any(A.p != p for A in matrices):
        raise ValueError("matrices live over different primes")
    if D < 1 or k0 < 1:
        raise ValueError("D and k0 must be positive integers")
    v2D = int_valuation(2 * D, p) if (2 * D) % p == 0 else 0
    if k0 < 2 * v2D:
        raise ValueError(f"k0 = {k0} < 2 ord_p(2D) = {2 * v2D}")

    k_values = tuple(compute_k_i(A) for A in matrices)
    k = max(k_values)

    if k <= k0:
        alpha, beta = 1, p ** k0
        e = -max(0, k)
        case = "k<=k0"
    else:
        alpha, beta = p ** k0 + p ** k, p ** k0
        e = _exact_e_large_k(p, k0, k, D)
        case = "k>k0"

    u = Fraction(alpha) ** D / Fraction(p) ** e
    v = Fraction(beta) ** D / Fraction(p) ** e
    conj = tuple(A.conjugated_diagonal(u, v) for A in matrices)
    result = ConjugatorResult(p, D, k0, alpha, beta, e, k_values, k,
                              case, conj)
    _verify(result)
    return result


def _verify(r: ConjugatorResult) -> None:
    for i, B in enumerate(r.matrices):
        if not B.is_integral():
            raise ArithmeticError(f"B_{i} is not integral: {B}")
    if all(B.in_p_matrices() for B in r.matrices):
        raise ArithmeticError("every conjugate fell into p M_2(Z_p)")
    # ord(p^-2e alpha^D beta^D), from the exact integers
    total = -2 * r.e + r.D * (int_valuation(r.alpha, r.p)
                              + int_valuation(r.beta, r.p))
    if not (r.k0 <= total <= 3 * r.D * r.k0):
        raise ArithmeticError(
            f"determinant valuation {total} outside [{r.k0}, {3 * r.D * r.k0}]")
    if r.case == "k>k0":
        if not (0 <= r.e <= r.D * r.k0 - Fraction(r.k0, 2)):
            raise ArithmeticError(f"e = {r.e} outside [0, Dk0 - k0/2]")


# ----------------------------------------------------------------------
# Random instances for property tests
# ----------------------------------------------------------------------

def random_gl2(rng, p: int, val_cap: int = 4) -> MatrixGL2:
    """Random matrix in M_2(Z_p) with entry valuations <= val_cap.

    Entries are unit * p^v with v uniform on [0, val_cap] and a random
    unit part; occasionally an entry is zeroed to hit the degenerate
    branches.  Rejects singular matrices and matrices on which the
    k-invariant is undefined, matching the construction's precondition.
    """
    def entry():
        if rng.random() < 0.10:
            return Fraction(0)
        unit = rng.randrange(1, p ** 3)
        while unit % p == 0:
            unit = rng.randrange(1, p ** 3)
        return Fraction(unit * p ** rng.randrange(0, val_cap + 1))

    while True:
        try:
            A = MatrixGL2(entry(), entry(), entry(), entry(), p)
            compute_k_i(A)
            return A
        except DegenerateMatrix:
            continue
