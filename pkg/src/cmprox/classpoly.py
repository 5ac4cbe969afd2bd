"""Hilbert class polynomials with certified integer coefficients, and the
p-adic data of their roots (singular moduli).

j(tau) is evaluated as E4(q)^3 / eta(q)^24 with mpmath at a working
precision derived from the classical bound sum_Q pi sqrt(|d|)/a_Q.  Every
polynomial build re-evaluates j at the principal form through the exact
integer q-expansion as an independent route; coefficients farther than
0.25 from an integer are a hard error, never a silent rounding.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import qseries
from .errors import PrecisionFailure, ResourceLimit
from .padic import PadicNumber
from .polyroots import IntegerPolynomial, NewtonPolygon, newton_polygon, \
    roots_in_unramified
from .quadratic import Discriminant, class_group, reduction_type

ABS_D_CAP = 50000

_memory_cache: dict = {}


def _eta24_over_q(q):
    """prod (1-q^n)^24 at the current mpmath precision (Delta/q)."""
    # pentagonal expansion of prod(1-q^n), then 24th power
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps - 5)
    total = mpmath.mpf(1)
    k = 1
    while True:
        t1 = q ** (k * (3 * k - 1) // 2)
        t2 = q ** (k * (3 * k + 1) // 2)
        term = t1 + t2
        if k % 2:
            total -= term
        else:
            total += term
        if abs(term) < tol:
            break
        k += 1
    return total ** 24


def _e4(q):
    tol = mpmath.mpf(10) ** (-mpmath.mp.dps - 5)
    total = mpmath.mpf(1)
    n = 1
    qn = q
    while True:
        s3 = sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
        term = 240 * s3 * qn
        total += term
        if abs(qn) * n ** 4 < tol:
            break
        n += 1
        qn = qn * q
    return total


def j_eta_route(tau):
    """j(tau) = E4^3 / (Delta/q * q), eta-product based."""
    q = mpmath.exp(2j * mpmath.pi * tau)
    return _e4(q) ** 3 / (_eta24_over_q(q) * q)


def j_qexp_route(tau, nterms=None):
    """j(tau) straight from the exact integer q-expansion (cross-check)."""
    q = mpmath.exp(2j * mpmath.pi * tau)
    if nterms is None:
        nterms = max(8, int(mpmath.mp.dps * math.log(10) /
                            (2 * math.pi * float(tau.imag))) + 8)
    c = qseries.j_coefficients(nterms)
    total = 1 / q
    qn = mpmath.mpf(1)
    for k in range(1, len(c)):
        total += c[k] * qn
        qn = qn * q
    return total


@dataclass(frozen=True)
class HilbertClassPolynomial:
    d: int
    coeffs: tuple   # ascending, exact integers, monic

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def as_polynomial(self) -> IntegerPolynomial:
        return IntegerPolynomial(self.coeffs)

    def checksum(self) -> int:
        return sum(self.coeffs) % (1 << 64)


def _required_dps(d: int, forms) -> int:
    bound = sum(math.pi * math.sqrt(-d) / Q.a for Q in forms) * math.log10(math.e)
    return int(math.ceil(bound)) + len(forms) + 15


def hilbert_class_poly(d, cache_dir=None) -> HilbertClassPolynomial:
    """Hilbert class polynomial H_d, exact and monic of degree h(d)."""
    if isinstance(d, Discriminant):
        d = d.value
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant")
    if -d > ABS_D_CAP:
        raise ResourceLimit(f"|d| = {-d} exceeds the cap {ABS_D_CAP}")
    if d in _memory_cache:
        return _memory_cache[d]
    cached = _read_cache(d, cache_dir)
    if cached is not None:
        _memory_cache[d] = cached
        return cached
    G = class_group(d)
    forms = G.forms
    dps = _required_dps(d, forms)
    with mpmath.workdps(dps):
        sqrt_d = mpmath.sqrt(mpmath.mpf(-d))
        j_values = {}
        for Q in sorted(forms, key=lambda Q: (Q.a, -abs(Q.b), Q.b), reverse=False):
            if Q.b < 0 and (Q.a, -Q.b, Q.c) in j_values:
                j_values[(Q.a, Q.b, Q.c)] = mpmath.conj(j_values[(Q.a, -Q.b, Q.c)])
                continue
            tau = (-Q.b + 1j * sqrt_d) / (2 * Q.a)
            j_values[(Q.a, Q.b, Q.c)] = j_eta_route(tau)
        # independent-route check at the principal form (largest Im tau, so
        # the exact q-expansion needs only a few terms even at full dps)
        P = forms[G.principal_index]
        tau_p = (-P.b + 1j * sqrt_d) / (2 * P.a)
        ref = j_qexp_route(tau_p)
        jp = j_values[(P.a, P.b, P.c)]
        if abs(jp - ref) > mpmath.mpf(10) ** (10 - dps) * (1 + abs(jp)):
            raise PrecisionFailure(
                f"eta-route and q-expansion j values disagree at d={d}: "
                f"{jp} vs {ref}")
        # multiply linear factors in deterministic (sorted) order
        poly = [mpmath.mpc(1)]
        for Q in forms:
            jq = j_values[(Q.a, Q.b, Q.c)]
            poly = [mpmath.mpc(0)] + poly
            for i in range(len(poly) - 1):
                poly[i] = poly[i] - jq * poly[i + 1]
        coeffs = []
        for z in poly:
            re, im = z.real, z.imag
            n = mpmath.nint(re)
            if abs(re - n) > 0.25 or abs(im) > 0.25:
                raise PrecisionFailure(
                    f"coefficient of H_{d} not integral at dps={dps}: {z}")
            coeffs.append(int(n))
    out = HilbertClassPolynomial(d=d, coeffs=tuple(coeffs))
    assert out.coeffs[-1] == 1 and out.degree == len(forms)
    _memory_cache[d] = out
    _write_cache(out, cache_dir)
    return out


def _cache_path(d, cache_dir):
    return os.path.join(cache_dir, f"hcp_{-d}.txt")


def _read_cache(d, cache_dir):
    if cache_dir is None:
        return None
    path = _cache_path(d, cache_dir)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        head_d, head_h = map(int, lines[0].split())
        coeffs = tuple(int(x) for x in lines[1: 2 + head_h])
        checksum = int(lines[2 + head_h])
    except (ValueError, IndexError):
        return None
    if head_d != d or len(coeffs) != head_h + 1:
        return None
    if sum(coeffs) % (1 << 64) != checksum:
        return None    # stale or corrupted: fall through to a fresh build
    return HilbertClassPolynomial(d=d, coeffs=coeffs)


def _write_cache(hcp, cache_dir):
    if cache_dir is None:
        return
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(hcp.d, cache_dir)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(f"{hcp.d} {hcp.degree}\n")
        for c in hcp.coeffs:
            fh.write(f"{c}\n")
        fh.write(f"{hcp.checksum()}\n")
    os.replace(tmp, path)


# ----------------------------------------------------------------------
# Singular moduli at a prime
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SingularModulusRecord:
    d: int
    p: int
    reduction: str                 # "ordinary" | "supersingular"
    polygon: NewtonPolygon
    valuations: tuple              # finite root valuations (Fractions)
    zero_roots: int                # multiplicity of the exact root 0
    roots: tuple                   # explicit unramified roots when available

    def max_valuation(self):
        if self.zero_roots:
            return math.inf
        return max(self.valuations) if self.valuations else None


def singular_moduli_at(d, p, precision=24, f_max=0,
                       cache_dir=None) -> SingularModulusRecord:
    """Newton-polygon valuations (always) and explicit unramified roots
    (ordinary reduction, residue degree <= f_max) of H_d at p."""
    if isinstance(d, Discriminant):
        d = d.value
    hcp = hilbert_class_poly(d, cache_dir=cache_dir)
    poly = hcp.as_polynomial()
    polygon = newton_polygon(poly, p)
    red = reduction_type(Discriminant(d), p)
    roots = ()
    if f_max > 0 and red == "ordinary":
        roots = tuple(roots_in_unramified(poly, p, f_max, precision))
    return SingularModulusRecord(
        d=d, p=p, reduction=red, polygon=polygon,
        valuations=polygon.root_valuations(),
        zero_roots=polygon.zero_multiplicity, roots=roots)
