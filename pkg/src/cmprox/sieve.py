"""Square-free values of f(x) = 3x^2 + 4p^(2n+1), exactly.

Everything here is integer arithmetic: the count N(y) of x with
f(x) <= y square-free is computed both by trial-division factorization
and through the Mobius identity N(y) = sum_d mu(d) A_(d^2)(y), and the
two routes must agree.  The density constant
c(p,n) = prod_ell (1 - rho(ell^2)/ell^2) is enclosed in a rigorous
interval (fixed-point arithmetic with certified tail) and checked to
exceed 1/7.

Root counts rho(m) of f mod m are multiplicative.  Per prime:
rho(3^e) = 0 (f is never divisible by 3); for ell not dividing 6p,
Hensel gives rho(ell^e) = rho(ell) = 1 + (-12 p^(2n+1) | ell); for
ell = p the roots mod p^e are exactly the multiples of p^ceil(e/2)
when e <= 2n+1 and vanish for e >= 2n+2; for ell = 2 the roots are
found by digit-by-digit lifting (their number stays <= 8).

The epsilon appearing in the source estimates is a proof-only
parameter tuning error terms; no computation here depends on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy.ntheory import sqrt_mod

from .errors import Inconclusive, ResourceLimit

__all__ = [
    "SieveConfig",
    "rho",
    "rho_brute",
    "roots_mod_prime_power",
    "count_N",
    "ProductInterval",
    "euler_product_c",
    "reference_lower_bound",
    "AdmissibleX",
    "minimal_admissible_x",
    "unit_pair_count",
    "SieveReport",
    "build_report",
]

_SCALE_BITS = 64
_SCALE = 1 << _SCALE_BITS


@dataclass(frozen=True)
class SieveConfig:
    """Parameters of one sieve run.

    y is the default counting bound; y_cap/x_cap bound resource use and
    euler_truncation is the default prime cutoff for the c(p,n)
    product.
    """
    p: int
    n: int
    y: int | None = None      # default: max(10^6, f(1))
    y_cap: int = 10 ** 8
    x_cap: int = 10 ** 6
    euler_truncation: int = 10 ** 5

    def __post_init__(self):
        if self.p < 5 or not sympy.isprime(self.p):
            raise ValueError("p must be a prime >= 5")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.y is None:
            object.__setattr__(self, "y", max(10 ** 6, self.f(1)))
        if self.y < self.f(1):
            raise ValueError("y must be at least f(1)")

    @property
    def constant_term(self) -> int:
        return 4 * self.p ** (2 * self.n + 1)

    def f(self, x: int) -> int:
        return 3 * x * x + self.constant_term

    def x_limit(self, y: int) -> int:
        """Largest x >= 0 with f(x) <= y (0 when even f(0) > y)."""
        if y < self.constant_term:
            return -1  # no x at all, not even 0
        x = math.isqrt((y - self.constant_term) // 3)
        while self.f(x + 1) <= y:
            x += 1
        while x >= 0 and self.f(x) > y:
            x -= 1
        return x


# ----------------------------------------------------------------------
# Root counting mod prime powers
# ----------------------------------------------------------------------

def _lift_roots(ell: int, e: int, cfg: SieveConfig):
    """All roots of f mod ell^e by digit lifting from mod ell."""
    roots = [x for x in range(ell) if cfg.f(x) % ell == 0]
    mod = ell
    for _ in range(e - 1):
        nxt = []
        new_mod = mod * ell
        for r in roots:
            for t in range(ell):
                cand = r + mod * t
                if cfg.f(cand) % new_mod == 0:
                    nxt.append(cand)
        roots, mod = nxt, new_mod
        if not roots:
            break
    return tuple(sorted(roots))


def roots_mod_prime_power(ell: int, e: int, cfg: SieveConfig):
    """Roots of f mod ell^e as a sorted tuple.

    Fast paths: quadratic formula plus Newton steps for ell not
    dividing 6p; digit lifting for ell in {2, p}; empty for ell = 3.
    """
    if e < 1:
        raise ValueError("exponent must be positive")
    if ell == 3:
        return ()
    if ell == 2 or ell == cfg.p:
        return _lift_roots(ell, e, cfg)
    # x^2 = -4 p^(2n+1) / 3 mod ell, then Hensel (roots are simple)
    a = (-cfg.constant_term * pow(3, -1, ell)) % ell
    base = sqrt_mod(a, ell, all_roots=True) or []
    mod = ell
    roots = list(base)
    while mod < ell ** e:
        new_mod = min(mod * mod, ell ** e)
        roots = [
            (r - cfg.f(r) * pow(6 * r, -1, new_mod)) % new_mod
            for r in roots
        ]
        mod = new_mod
    return tuple(sorted(roots))


def _rho_prime_square(ell: int, cfg: SieveConfig) -> int:
    """rho(ell^2) without factoring; the only input the Euler product needs."""
    if ell == 3:
        return 0
    if ell == cfg.p:
        return cfg.p
    if ell == 2:
        return len(_lift_roots(2, 2, cfg))
    ls = pow(-12 * cfg.p ** (2 * cfg.n + 1), (ell - 1) // 2, ell)
    return 1 + (1 if ls == 1 else -1)


def rho(m: int, cfg: SieveConfig) -> int:
    """Number of roots of f mod m; multiplicative over prime powers."""
    if m < 1:
        raise ValueError("m must be positive")
    out = 1
    for ell, e in sympy.factorint(m).items():
        if ell == 3:
            return 0
        if ell == cfg.p:
            out *= cfg.p ** (e // 2) if e <= 2 * cfg.n + 1 else 0
        elif ell == 2:
            out *= len(_lift_roots(2, e, cfg))
        else:
            ls = pow(-12 * cfg.p ** (2 * cfg.n + 1), (ell - 1) // 2, ell)
            out *= 1 + (1 if ls == 1 else -1)
        if out == 0:
            return 0
    return out


def rho_brute(m: int, cfg: SieveConfig) -> int:
    """Direct enumeration oracle for small m."""
    if m > 10 ** 4:
        raise ResourceLimit("brute-force rho is capped at m <= 10^4")
    return sum(1 for x in range(m) if cfg.f(x) % m == 0)


# ----------------------------------------------------------------------
# Counting square-free values
# ----------------------------------------------------------------------

def _is_squarefree(m: int, primes) -> bool:
    for q in primes:
        if q * q > m:
            break
        if m % q == 0:
            m //= q
            if m % q == 0:
                return False
    return True  # remaining cofactor is 1 or prime


def _count_progression(a: int, mod: int, xmax: int) -> int:
    """#{x in [1, xmax] : x = a mod mod} for 0 <= a < mod."""
    if xmax < 1:
        return 0
    if a == 0:
        return xmax // mod
    if a > xmax:
        return 0
    return (xmax - a) // mod + 1


def count_N(y: int, cfg: SieveConfig, method: str = "brute",
            chunk: int = 1 << 14) -> int:
    """Number of x >= 1 with f(x) <= y and f(x) square-free.

    method "brute" factors every value by trial division; "mobius"
    evaluates sum_(d <= sqrt(y)) mu(d) A_(d^2)(y) with the progressions
    mod d^2 obtained from the per-prime root sets via CRT.  The two are
    independent implementations of the same integer.
    """
    if y > cfg.y_cap:
        raise ResourceLimit(f"y = {y} exceeds the configured cap {cfg.y_cap}")
    xmax = cfg.x_limit(y)
    if xmax < 1:
        return 0

    if method == "brute":
        primes = list(sympy.primerange(2, math.isqrt(y) + 1))
        total = 0
        # independent chunks, merged in order
        for lo in range(1, xmax + 1, chunk):
            hi = min(lo + chunk - 1, xmax)
            total += sum(1 for x in range(lo, hi + 1)
                         if _is_squarefree(cfg.f(x), primes))
        return total

    if method != "mobius":
        raise ValueError(f"unknown method {method!r}")

    total = 0
    for d in range(1, math.isqrt(y) + 1):
        mu = int(sympy.mobius(d))
        if mu == 0 or d % 3 == 0:
            continue
        # roots of f mod d^2 by CRT over the prime-square factors
        roots = [0]
        mod = 1
        dead = False
        for ell in sympy.factorint(d):
            part = roots_mod_prime_power(ell, 2, cfg)
            if not part:
                dead = True
                break
            ell2 = ell * ell
            inv = pow(mod, -1, ell2)
            roots = [r + mod * (((s - r) * inv) % ell2)
                     for r in roots for s in part]
            mod *= ell2
        if dead:
            continue
        a_d2 = sum(_count_progression(r % mod, mod, xmax) for r in roots)
        total += mu * a_d2
    return total


# ----------------------------------------------------------------------
# The Euler product c(p, n) with a certified tail
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProductInterval:
    """Rigorous enclosure [lo, hi] with endpoints lo_num/2^64 etc."""
    lo_num: int
    hi_num: int
    L: int

    @property
    def low(self) -> Fraction:
        return Fraction(self.lo_num, _SCALE)

    @property
    def high(self) -> Fraction:
        return Fraction(self.hi_num, _SCALE)

    def __contains__(self, value) -> bool:
        return self.low <= Fraction(value) <= self.high

    def entirely_above(self, threshold) -> bool:
        return self.low > Fraction(threshold)

    def entirely_below(self, threshold) -> bool:
        return self.high < Fraction(threshold)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def euler_product_c(cfg: SieveConfig, L: int | None = None) -> ProductInterval:
    """Enclose c(p,n) = prod_ell (1 - rho(ell^2)/ell^2) and check > 1/7.

    Multiplies exact factors for ell <= L with outward rounding at
    2^-64, then applies the tail bound: each omitted factor lies in
    [1 - 2/ell^2, 1], so the tail product is within
    [1 - 2/(L-1), 1] = [(L-3)/(L-1), 1].  Raises Inconclusive if the
    final interval straddles 1/7.
    """
    if L is None:
        L = cfg.euler_truncation
    if L < 100:
        raise ValueError("truncation must be at least 100")
    lo = hi = _SCALE
    for ell in sympy.primerange(2, L + 1):
        r = _rho_prime_square(ell, cfg)
        if r == 0:
            continue
        num, den = ell * ell - r, ell * ell
        lo = (lo * num) // den
        hi = _ceil_div(hi * num, den)
    lo = (lo * (L - 3)) // (L - 1)
    out = ProductInterval(lo, hi, L)
    if out.entirely_above(Fraction(1, 7)):
        return out
    if out.entirely_below(Fraction(1, 7)):
        raise ArithmeticError(f"c({cfg.p},{cfg.n}) certified below 1/7: {out}")
    raise Inconclusive(
        f"interval [{out.low}, {out.high}] straddles 1/7; increase L")


@lru_cache(maxsize=8)
def reference_lower_bound(L: int) -> ProductInterval:
    """Enclosure of (2/5) prod_(ell <= L) (1 - ell^(-3/2)).

    ell^(3/2) is irrational, so each factor is bracketed through
    integer square roots: with s = isqrt(ell * 4^40) one has
    s <= sqrt(ell) 2^40 < s + 1, hence
    1 - 2^40/(ell s) <= 1 - ell^(-3/2) <= 1 - 2^40/(ell (s+1)).
    """
    shift = 40
    lo = hi = _SCALE
    for ell in sympy.primerange(2, L + 1):
        s = math.isqrt(ell << (2 * shift))
        lo = (lo * (ell * s - (1 << shift))) // (ell * s)
        hi = _ceil_div(hi * (ell * (s + 1) - (1 << shift)), ell * (s + 1))
    return ProductInterval((lo * 2) // 5, _ceil_div(hi * 2, 5), L)


# ----------------------------------------------------------------------
# Admissible arguments and unit pairs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleX:
    """Least x with f(x) square-free, plus its full factorization."""
    x: int
    value: int
    factorization: tuple  # ((prime, exponent), ...) sorted

    def __post_init__(self):
        prod = 1
        for q, e in self.factorization:
            prod *= q ** e
        if prod != self.value or any(e != 1 for _, e in self.factorization):
            raise ArithmeticError("certificate does not certify square-freeness")


def minimal_admissible_x(cfg: SieveConfig) -> AdmissibleX:
    """Smallest x >= 1 with f(x) square-free.

    Square-freeness already forces x odd (else 4 | f), x coprime to p
    (else p^2 | f) and 3 never divides f; all three are asserted on the
    winner anyway.
    """
    for x in range(1, cfg.x_cap + 1):
        value = cfg.f(x)
        fact = sympy.factorint(value)
        if all(e == 1 for e in fact.values()):
            assert x % 2 == 1, "square-free value with even x"
            assert math.gcd(value, cfg.p) == 1, "square-free value divisible by p"
            assert value % 3 != 0, "f is never divisible by 3"
            return AdmissibleX(x, value, tuple(sorted(fact.items())))
    raise ResourceLimit(f"no admissible x up to {cfg.x_cap}")


def unit_pair_count(y: int, k: int, cfg: SieveConfig) -> int:
    """#{(x, d) positive integers : 3x^2 + 4p^(2n+1) = d^2 k <= y}."""
    if k < 1:
        raise ValueError("k must be positive")
    if y > cfg.y_cap:
        raise ResourceLimit(f"y = {y} exceeds the configured cap {cfg.y_cap}")
    count = 0
    for x in range(1, cfg.x_limit(y) + 1):
        m = cfg.f(x)
        if m % k:
            continue
        q = m // k
        s = math.isqrt(q)
        if s >= 1 and s * s == q:
            count += 1
    return count


# ----------------------------------------------------------------------
# Assembled report
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SieveReport:
    config: SieveConfig
    n_brute: int
    n_mobius: int
    rho_table: tuple          # ((m, rho(m)), ...) for m up to a cap
    c_interval: ProductInterval
    minimal_x: AdmissibleX

    def __post_init__(self):
        if self.n_brute != self.n_mobius:
            raise ArithmeticError(
                f"count mismatch: brute {self.n_brute} != mobius {self.n_mobius}")


def build_report(cfg: SieveConfig, y: int | None = None,
                 rho_cap: int = 64) -> SieveReport:
    y = cfg.y if y is None else y
    return SieveReport(
        config=cfg,
        n_brute=count_N(y, cfg, "brute"),
        n_mobius=count_N(y, cfg, "mobius"),
        rho_table=tuple((m, rho(m, cfg)) for m in range(1, rho_cap + 1)),
        c_interval=euler_product_c(cfg),
        minimal_x=minimal_admissible_x(cfg),
    )
