"""Truncated arithmetic in unramified extensions of the p-adic numbers.

Elements are represented as p^v * u where u is a unit of the ring of
integers of the unramified extension of residue degree f, stored as a
coordinate tuple in the polynomial basis 1, w, ..., w^(f-1) for a fixed
monic irreducible lift of degree f.  Each number carries its valuation v
exactly and a relative precision of N significant base-p digits.

Exact zero is a distinct marker with valuation +infinity.  A subtraction
that cancels every stored digit does *not* produce exact zero: it produces
a "precision-exhausted zero" that remembers only a lower bound for the
valuation, and asking for its exact valuation raises PrecisionExhausted.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import CmproxError, PrecisionExhausted

INF = math.inf
DEFAULT_PRECISION = 32

_REGISTRY_FILE = "unramified_registry.json"


def int_valuation(n: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined for integers; use the zero marker")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def fraction_valuation(q, p: int):
    """p-adic valuation of a rational number; INF for zero."""
    q = Fraction(q)
    if q == 0:
        return INF
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


# ----------------------------------------------------------------------
# Dense polynomial arithmetic over F_p (ascending coefficient lists).
# Only used for modulus discovery and residue inverses; the general
# residue-field toolkit lives in residue.py.
# ----------------------------------------------------------------------

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_rem(a, m, p):
    # m monic
    a = a[:]
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i in range(dm + 1):
                a[off + i] = (a[off + i] - c * m[i]) % p
        a.pop()
    return _fp_trim(a)


def _fp_mulmod(a, b, m, p):
    return _fp_rem(_fp_mul(a, b, p), m, p)


def _fp_powmod(a, e, m, p):
    out = [1]
    base = _fp_rem(a[:], m, p)
    while e:
        if e & 1:
            out = _fp_mulmod(out, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return out


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a[:]), _fp_trim(b[:])
    while b:
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a, b = bm, _fp_rem(a, bm, p)
    return a


def _fp_divmod(a, b, p):
    """Quotient and remainder of dense F_p polynomials, b nonzero."""
    q = [0] * max(1, len(a) - len(b) + 1)
    r = a[:]
    inv = pow(b[-1], -1, p)
    while r and len(r) >= len(b):
        c = (r[-1] * inv) % p
        off = len(r) - len(b)
        q[off] = c
        if c:
            for i in range(len(b)):
                r[off + i] = (r[off + i] - c * b[i]) % p
        r.pop()
        _fp_trim(r)
    return _fp_trim(q), r


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _fp_trim([(x - y) % p for x, y in zip(a, b)])


def _fp_xgcd(a, m, p):
    """Return (g, s) with s*a = g mod m, g the monic gcd.  Used for inverses."""
    r0, r1 = m[:], _fp_rem(a[:], m, p)
    s0, s1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _fp_sub(s0, _fp_mul(q, s1, p), p)
    if not r0:
        raise ZeroDivisionError("zero polynomial has no inverse")
    lead_inv = pow(r0[-1], -1, p)
    g = [(c * lead_inv) % p for c in r0]
    s = [(c * lead_inv) % p for c in s0]
    return g, s


def _fp_sub_x(a, p):
    """a(x) - x as a fresh trimmed list."""
    t = a[:] + [0] * max(0, 2 - len(a))
    t[1] = (t[1] - 1) % p
    return _fp_trim(t)


def _fp_is_irreducible(m, p):
    """Irreducibility of a monic polynomial over F_p (Rabin's test)."""
    f = len(m) - 1
    if f == 1:
        return True
    x = [0, 1]
    if _fp_sub_x(_fp_powmod(x, p ** f, m, p), p):
        return False
    for r in {q for q in range(2, f + 1) if f % q == 0 and _is_prime_small(q)}:
        g = _fp_gcd(m, _fp_sub_x(_fp_powmod(x, p ** (f // r), m, p), p), p)
        if len(g) - 1 > 0:
            return False
    return True


def _is_prime_small(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _search_modulus(p: int, f: int):
    """Deterministic choice of a monic irreducible lift of degree f.

    Small fields get the lexicographically smallest irreducible; larger
    degrees use a seeded pseudo-random search (same sequence every run).
    The vendored registry file caches the outcome, so lookups never repeat
    the search in practice.
    """
    if f == 1:
        return (0, 1)
    if p ** f <= 4096:
        # lexicographic over (c_{f-1}, ..., c_1, c_0)? use simple ascending scan
        for idx in range(p ** f):
            coeffs = []
            t = idx
            for _ in range(f):
                coeffs.append(t % p)
                t //= p
            m = coeffs + [1]
            if m[0] == 0:
                continue
            if _fp_is_irreducible(m, p):
                return tuple(m)
        raise CmproxError("no irreducible polynomial found (impossible)")
    rng = random.Random(f"unramified-modulus:{p}:{f}")
    while True:
        m = [rng.randrange(p) for _ in range(f)] + [1]
        if m[0] == 0:
            m[0] = 1 + rng.randrange(p - 1) if p > 1 else 1
        if _fp_is_irreducible(m, p):
            return tuple(m)


def _load_registry_data():
    try:
        text = resources.files("cmprox").joinpath("data", _REGISTRY_FILE).read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        return {"moduli": {}, "embeddings": {}}
    return json.loads(text)


_registry_data = None


def _registry():
    global _registry_data
    if _registry_data is None:
        _registry_data = _load_registry_data()
    return _registry_data


# ----------------------------------------------------------------------
# Rings
# ----------------------------------------------------------------------

class UnramifiedRing:
    """Ring of integers of the unramified extension of Q_p of degree f.

    Elements at working modulus q = p^N are coordinate tuples of length f
    with entries in [0, q).  All methods are pure; instances are shared
    through the module-level registry and treated as immutable.
    """

    def __init__(self, p: int, f: int, modulus=None):
        self.p = p
        self.f = f
        if modulus is None:
            key = f"{p},{f}"
            vend = _registry()["moduli"].get(key)
            modulus = tuple(vend) if vend else _search_modulus(p, f)
        self.modulus = tuple(modulus)
        assert len(self.modulus) == f + 1 and self.modulus[-1] == 1
        # x^(f+j) mod m as integer coefficient rows, j = 0..f-2
        self._red_rows = self._reduction_rows()
        self._sigma_cache = {}   # N -> tuple of powers of sigma(w)
        self._embed_cache = {}   # (g, N) -> image of w_g at precision N
        self.one = tuple([1] + [0] * (f - 1))
        self.zero_elem = tuple([0] * f)

    def __repr__(self):
        return f"UnramifiedRing(p={self.p}, f={self.f})"

    def _reduction_rows(self):
        f = self.f
        if f == 1:
            return []
        rows = []
        # x^f = -(m0 + m1 x + ... + m_{f-1} x^{f-1})
        base = [(-c) for c in self.modulus[:f]]
        rows.append(base)
        for _ in range(f - 2):
            prev = rows[-1]
            nxt = [0] + prev[:-1]
            if prev[-1]:
                for i in range(f):
                    nxt[i] += prev[-1] * base[i]
            rows.append(nxt)
        return [tuple(r) for r in rows]

    # -- element operations; a, b are coordinate tuples; q the modulus p^N --

    def add(self, a, b, q):
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b, q):
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a, q):
        return tuple((-x) % q for x in a)

    def scalar_mul(self, c, a, q):
        return tuple((c * x) % q for x in a)

    def mul(self, a, b, q):
        f = self.f
        if f == 1:
            return ((a[0] * b[0]) % q,)
        conv = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = conv[:f]
        for j in range(f - 1):
            c = conv[f + j]
            if c:
                row = self._red_rows[j]
                for i in range(f):
                    out[i] += c * row[i]
        return tuple(x % q for x in out)

    def pow(self, a, e, q):
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base, q)
            base = self.mul(base, base, q)
            e >>= 1
        return out

    def inv(self, a, q):
        """Inverse of a unit (nonzero mod p), by residue xgcd + Newton lifting."""
        p = self.p
        a_res = [x % p for x in a]
        if not any(a_res):
            raise ZeroDivisionError("not a unit in the unramified ring")
        if self.f == 1:
            return (pow(a[0], -1, q),)
        g, s = _fp_xgcd(_fp_trim(a_res), list(self.modulus), p)
        if len(g) != 1:
            raise ZeroDivisionError("not a unit in the unramified ring")
        b = tuple((s + [0] * self.f)[: self.f])
        # Newton: b <- b(2 - ab), doubling correct digits
        N = _nbits_modulus(q, p)
        k = 1
        while k < N:
            k = min(2 * k, N)
            qk = self.p ** k
            ab = self.mul(a, b, qk)
            two_minus = tuple(((2 if i == 0 else 0) - x) % qk for i, x in enumerate(ab))
            b = self.mul(b, two_minus, qk)
        return tuple(x % q for x in b)

    def is_unit(self, a):
        return any(x % self.p for x in a)

    def coord_valuation(self, a, cap):
        """min_i v_p(a_i), treating all-zero as >= cap."""
        best = cap
        for x in a:
            if x:
                v = int_valuation(x, self.p)
                if v < best:
                    best = v
                    if best == 0:
                        return 0
        return best

    def shift_down(self, a, t, q_after):
        """Divide exactly by p^t (every coordinate must be divisible)."""
        pt = self.p ** t
        return tuple((x // pt) % q_after for x in a)

    def eval_int_poly(self, coeffs, x, q):
        """Evaluate an integer-coefficient polynomial at a ring element."""
        out = self.zero_elem
        for c in reversed(coeffs):
            out = self.mul(out, x, q)
            if c % q:
                out = tuple((o + (c if i == 0 else 0)) % q for i, o in enumerate(out))
        return out

    # -- Frobenius --

    def _sigma_powers(self, N):
        """Powers sigma(w)^i, i < f, at precision N.  sigma lifts x -> x^p."""
        have = self._sigma_cache.get(N)
        if have:
            return have
        # reuse a higher-precision computation if available
        for N2, powers in sorted(self._sigma_cache.items()):
            if N2 >= N:
                q = self.p ** N
                sliced = tuple(tuple(x % q for x in pw) for pw in powers)
                self._sigma_cache[N] = sliced
                return sliced
        q = self.p ** N
        if self.f == 1:
            out = (self.one,)
            self._sigma_cache[N] = out
            return out
        w = tuple([0, 1] + [0] * (self.f - 2))
        y = self.pow(w, self.p, self.p)  # residue-level starting point
        y = tuple(int(c) for c in y)
        k = 1
        mcoef = list(self.modulus)
        dcoef = [i * c for i, c in enumerate(mcoef)][1:]
        while k < N:
            k = min(2 * k, N)
            qk = self.p ** k
            fy = self.eval_int_poly(mcoef, y, qk)
            fpy = self.eval_int_poly(dcoef, y, qk)
            corr = self.mul(fy, self.inv(fpy, qk), qk)
            y = self.sub(y, corr, qk)
        powers = [self.one, y]
        for _ in range(self.f - 2):
            powers.append(self.mul(powers[-1], y, q))
        out = tuple(powers)
        self._sigma_cache[N] = out
        return out

    def frobenius_coords(self, a, N):
        q = self.p ** N
        if self.f == 1:
            return tuple(x % q for x in a)
        powers = self._sigma_powers(N)
        out = self.zero_elem
        for c, pw in zip(a, powers):
            if c:
                out = self.add(out, self.scalar_mul(c, pw, q), q)
        return out

    # -- embeddings of smaller unramified rings --

    def embedding_of(self, g: int, N: int):
        """Image of the degree-g generator w_g in this ring, precision N.

        Requires g | f.  The residue-level image is taken from the vendored
        registry when present, else computed deterministically; it is then
        Hensel-lifted against the degree-g modulus.
        """
        if self.f % g:
            raise ValueError(f"no embedding: {g} does not divide {self.f}")
        key = (g, N)
        if key in self._embed_cache:
            return self._embed_cache[key]
        if g == 1:
            out = self.one
            self._embed_cache[key] = out
            return out
        sub = ring(self.p, g)
        if sub.modulus == self.modulus:
            w = tuple([0, 1] + [0] * (self.f - 2))
            self._embed_cache[key] = w
            return w
        res = _registry()["embeddings"].get(f"{self.p},{g},{self.f}")
        if res is None:
            from .residue import subfield_root
            res = subfield_root(self, sub)
        res = tuple(int(c) for c in res)
        mcoef = list(sub.modulus)
        dcoef = [i * c for i, c in enumerate(mcoef)][1:]
        y = res
        k = 1
        while k < N:
            k = min(2 * k, N)
            qk = self.p ** k
            fy = self.eval_int_poly(mcoef, y, qk)
            fpy = self.eval_int_poly(dcoef, y, qk)
            y = self.sub(y, self.mul(fy, self.inv(fpy, qk), qk), qk)
        self._embed_cache[key] = y
        return y


def _nbits_modulus(q, p):
    """N with q = p^N (q always an exact power here)."""
    n = 0
    while q > 1:
        q //= p
        n += 1
    return n


_ring_cache: dict = {}


def ring(p: int, f: int) -> UnramifiedRing:
    """Registry lookup for the unramified ring of degree f over Q_p."""
    if p < 2 or f < 1:
        raise ValueError("need a prime p >= 2 and degree f >= 1")
    key = (p, f)
    r = _ring_cache.get(key)
    if r is None:
        r = UnramifiedRing(p, f)
        _ring_cache[key] = r
    return r


# ----------------------------------------------------------------------
# Numbers
# ----------------------------------------------------------------------

class PadicNumber:
    """Immutable truncated element of an unramified extension of Q_p."""

    __slots__ = ("ring", "kind", "v", "coords", "N", "bound")

    def __init__(self, ring_, kind, v=None, coords=None, N=None, bound=None):
        object.__setattr__(self, "ring", ring_)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "bound", bound)

    def __setattr__(self, *a):
        raise AttributeError("PadicNumber is immutable")

    # -- constructors --

    @classmethod
    def zero(cls, p, f=1):
        return cls(ring(p, f), "zero")

    @classmethod
    def exhausted(cls, p, f, bound):
        return cls(ring(p, f), "exh", bound=bound)

    @classmethod
    def from_coords(cls, ring_, v, coords, N):
        """Normalize raw coordinates given at scale p^v, known mod p^N."""
        if N <= 0:
            return cls(ring_, "exh", bound=v + N)
        q = ring_.p ** N
        coords = tuple(x % q for x in coords)
        if not any(coords):
            return cls(ring_, "exh", bound=v + N)
        t = ring_.coord_valuation(coords, N)
        if t:
            coords = ring_.shift_down(coords, t, ring_.p ** (N - t))
            return cls(ring_, "num", v=v + t, coords=coords, N=N - t)
        return cls(ring_, "num", v=v, coords=coords, N=N)

    @classmethod
    def from_int(cls, n, p, f=1, precision=DEFAULT_PRECISION):
        return cls.from_fraction(Fraction(n), p, f, precision)

    @classmethod
    def from_fraction(cls, q, p, f=1, precision=DEFAULT_PRECISION):
        q = Fraction(q)
        r = ring(p, f)
        if q == 0:
            return cls(r, "zero")
        vn = int_valuation(q.numerator, p)
        vd = int_valuation(q.denominator, p)
        v = vn - vd
        mod = p ** precision
        num_u = abs(q.numerator) // p ** vn
        den_u = q.denominator // p ** vd
        unit = (num_u * pow(den_u, -1, mod)) % mod
        if q < 0:
            unit = (-unit) % mod
        coords = tuple([unit] + [0] * (f - 1))
        return cls(r, "num", v=v, coords=coords, N=precision)

    # -- queries --

    @property
    def p(self):
        return self.ring.p

    @property
    def f(self):
        return self.ring.f

    def is_zero(self):
        return self.kind == "zero"

    def is_exhausted(self):
        return self.kind == "exh"

    def ord(self):
        """Exact valuation; +inf marker for exact zero.

        A precision-exhausted zero has no decidable valuation: raising here
        (rather than returning the bound) is what keeps downstream equality
        checks from misreporting.
        """
        if self.kind == "zero":
            return INF
        if self.kind == "exh":
            raise PrecisionExhausted(
                f"valuation undecidable: all digits cancelled, ord >= {self.bound}",
                bound=self.bound)
        return self.v

    def ord_lower_bound(self):
        if self.kind == "zero":
            return INF
        if self.kind == "exh":
            return self.bound
        return self.v

    def abs_precision(self):
        if self.kind == "num":
            return self.v + self.N
        if self.kind == "exh":
            return self.bound
        return INF

    def residue(self):
        """Residue coordinates (length-f tuple mod p) of a unit; 0 tuple for positives."""
        if self.kind != "num":
            raise PrecisionExhausted("no residue available") if self.kind == "exh" \
                else ValueError("residue of exact zero is 0")
        if self.v > 0:
            return self.ring.zero_elem
        if self.v < 0:
            raise ValueError("not integral")
        return tuple(x % self.p for x in self.coords)

    # -- helpers --

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.ring is self.ring:
                return other
            if other.ring.p != self.ring.p:
                raise ValueError("mixed primes")
            if other.f == 1:
                return other.embed_into(self.f)
            if self.f == 1:
                return other  # handled by caller symmetry
            raise ValueError(
                f"cannot mix residue degrees {self.f} and {other.f}; embed explicitly")
        if isinstance(other, (int, Fraction)):
            prec = self.N if self.kind == "num" else DEFAULT_PRECISION
            return PadicNumber.from_fraction(Fraction(other), self.p, self.f,
                                             max(prec, 1))
        return NotImplemented

    def embed_into(self, f_target, big_ring=None):
        """Image in the unramified ring of degree f_target (f | f_target)."""
        r2 = big_ring if big_ring is not None else ring(self.p, f_target)
        if r2.f == self.f:
            return self
        if self.kind == "zero":
            return PadicNumber(r2, "zero")
        if self.kind == "exh":
            return PadicNumber(r2, "exh", bound=self.bound)
        if self.f == 1:
            coords = tuple([self.coords[0]] + [0] * (r2.f - 1))
            return PadicNumber(r2, "num", v=self.v, coords=coords, N=self.N)
        iota = r2.embedding_of(self.f, self.N)
        q = r2.p ** self.N
        out = r2.zero_elem
        pw = r2.one
        for i, c in enumerate(self.coords):
            if i:
                pw = r2.mul(pw, iota, q)
            if c:
                out = r2.add(out, r2.scalar_mul(c, pw, q), q)
        return PadicNumber(r2, "num", v=self.v, coords=out, N=self.N)

    # -- arithmetic --

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, PadicNumber) and other.ring is not self.ring and self.f == 1:
            return other + self
        a, b = self, other
        if a.kind == "zero":
            return b
        if b.kind == "zero":
            return a
        if a.kind == "exh" or b.kind == "exh":
            if a.kind == "exh" and b.kind == "exh":
                return PadicNumber(a.ring, "exh", bound=min(a.bound, b.bound))
            num, exh = (a, b) if a.kind == "num" else (b, a)
            cut = min(num.abs_precision(), exh.bound)
            if num.v >= exh.bound:
                return PadicNumber(a.ring, "exh", bound=exh.bound)
            return PadicNumber.from_coords(a.ring, num.v, num.coords,
                                           cut - num.v)
        A = min(a.abs_precision(), b.abs_precision())
        vmin = min(a.v, b.v)
        M = A - vmin
        if M <= 0:
            return PadicNumber(a.ring, "exh", bound=A)
        q = a.p ** M
        ca = a.ring.scalar_mul(a.p ** (a.v - vmin), a.coords, q) if a.v > vmin \
            else tuple(x % q for x in a.coords)
        cb = a.ring.scalar_mul(b.p ** (b.v - vmin), b.coords, q) if b.v > vmin \
            else tuple(x % q for x in b.coords)
        return PadicNumber.from_coords(a.ring, vmin, a.ring.add(ca, cb, q), M)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.kind != "num":
            return self
        q = self.p ** self.N
        return PadicNumber(self.ring, "num", v=self.v,
                           coords=self.ring.neg(self.coords, q), N=self.N)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, PadicNumber) and other.ring is not self.ring and self.f == 1:
            return (-other) + self
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, PadicNumber) and other.ring is not self.ring and self.f == 1:
            return other * self
        a, b = self, other
        if a.kind == "zero" or b.kind == "zero":
            return PadicNumber(a.ring, "zero")
        if a.kind == "exh" or b.kind == "exh":
            if a.kind == "exh" and b.kind == "exh":
                return PadicNumber(a.ring, "exh", bound=a.bound + b.bound)
            num, exh = (a, b) if a.kind == "num" else (b, a)
            return PadicNumber(a.ring, "exh", bound=exh.bound + num.v)
        N = min(a.N, b.N)
        q = a.p ** N
        return PadicNumber(a.ring, "num", v=a.v + b.v,
                           coords=a.ring.mul(a.coords, b.coords, q), N=N)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if isinstance(other, PadicNumber) and other.ring is not self.ring and self.f == 1:
            return other.__rtruediv__(self)
        if other.kind == "zero":
            raise ZeroDivisionError("division by exact p-adic zero")
        if other.kind == "exh":
            raise PrecisionExhausted(
                "division by a precision-exhausted zero", bound=other.bound)
        if self.kind == "zero":
            return self
        if self.kind == "exh":
            return PadicNumber(self.ring, "exh", bound=self.bound - other.v)
        N = min(self.N, other.N)
        q = self.p ** N
        inv = self.ring.inv(other.coords, q)
        return PadicNumber(self.ring, "num", v=self.v - other.v,
                           coords=self.ring.mul(self.coords, inv, q), N=N)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            base = PadicNumber.from_int(1, self.p, self.f,
                                        self.N or DEFAULT_PRECISION) / self
            return base ** (-e)
        if self.kind == "zero":
            return self if e else PadicNumber.from_int(1, self.p, self.f)
        if self.kind == "exh":
            if e == 0:
                return PadicNumber.from_int(1, self.p, self.f)
            return PadicNumber(self.ring, "exh", bound=self.bound * e)
        q = self.p ** self.N
        return PadicNumber(self.ring, "num", v=self.v * e,
                           coords=self.ring.pow(self.coords, e, q), N=self.N)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (self.ring is other.ring and self.kind == other.kind
                and self.v == other.v and self.coords == other.coords
                and self.N == other.N and self.bound == other.bound)

    def __hash__(self):
        return hash((id(self.ring), self.kind, self.v, self.coords, self.N, self.bound))

    def agrees_with(self, other) -> bool:
        """True when self - other vanishes at the shared precision."""
        d = self - other
        return d.kind != "num"

    def __repr__(self):
        p = self.p
        if self.kind == "zero":
            return f"O_exact(p={p})"
        if self.kind == "exh":
            return f"O({p}^{self.bound})+?  (precision-exhausted)"
        digits_shown = min(self.N, 6)
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            ds = []
            t = c % (p ** digits_shown)
            k = 0
            while t:
                d = t % p
                if d:
                    ds.append(f"{d}" if k == 0 else f"{d}*{p}^{k}")
                t //= p
                k += 1
            coef = "+".join(ds) if ds else "0"
            parts.append(coef if i == 0 else f"({coef})*w^{i}")
        body = " + ".join(parts) if parts else "0"
        head = f"{p}^{self.v}*" if self.v else ""
        return f"{head}({body} + O({p}^{self.N}))"


# ----------------------------------------------------------------------
# Derived operations
# ----------------------------------------------------------------------

def padic_log(x: PadicNumber) -> PadicNumber:
    """p-adic logarithm on the domain of the convergent series.

    Requires ord(x-1) >= 1 for odd p and ord(x-1) >= 2 for p = 2.  The
    result satisfies ord(log x) = ord(x - 1) and log(xy) = log x + log y
    at the shared precision.
    """
    p = x.p
    one = PadicNumber.from_int(1, p, x.f, x.N if x.kind == "num" else DEFAULT_PRECISION)
    z = x - one
    if z.kind == "zero":
        return PadicNumber(x.ring, "zero")
    lb = z.ord_lower_bound()
    needed = 2 if p == 2 else 1
    if lb < needed:
        raise ValueError(
            f"padic_log domain: need ord(x-1) >= {needed} at p={p}, got {lb}")
    if z.kind == "exh":
        return z  # log of something indistinguishable from 1
    A = z.abs_precision()
    # number of series terms: k*ord(z) - ord_p(k) >= A for all k > K
    K = 1
    while True:
        K += 1
        if K * z.v - math.floor(math.log(K, p)) > A + 1:
            break
    total = PadicNumber(x.ring, "zero")
    zk = z
    for k in range(1, K + 1):
        if k > 1:
            zk = zk * z
        term = zk / k if k % p == 0 else zk * Fraction(1, k)
        if k % 2 == 0:
            term = -term
        total = total + term
    return total


def frobenius(x: PadicNumber) -> PadicNumber:
    """The canonical lift of the p-power map; identity on Q_p elements.

    Satisfies frobenius^f = identity digit-for-digit at the working
    precision.
    """
    if x.kind != "num":
        return x
    coords = x.ring.frobenius_coords(x.coords, x.N)
    return PadicNumber(x.ring, "num", v=x.v, coords=coords, N=x.N)


def teichmuller(x: PadicNumber) -> PadicNumber:
    """Teichmuller representative with the same residue as the unit x."""
    if x.kind != "num" or x.v != 0:
        raise ValueError("Teichmuller lift needs a unit")
    r = x.ring
    q = r.p ** x.N
    qf = r.p ** r.f
    z = tuple(c % r.p for c in x.coords)
    for _ in range(x.N + 1):
        z = r.pow(z, qf, q)
    return PadicNumber(r, "num", v=0, coords=z, N=x.N)


@dataclass(frozen=True)
class ApproximationExponent:
    """The factorial exponent D = (p^(f*n))!, possibly kept symbolic.

    For residue cardinality arguments m = p^(f*n) above 20 the factorial is
    never expanded; only divisibility questions are answered (all that is
    used downstream: gamma^D lands in the principal units for every unit
    gamma of a degree-f' field with f' <= m, since f' | D).
    """

    p: int
    f: int
    n: int
    arg: int            # p^(f*n)
    value: int | None   # exact factorial when arg <= 20

    @property
    def symbolic(self) -> bool:
        return self.value is None

    def valuation(self, ell: int) -> int:
        """ord_ell(arg!) via Legendre's formula."""
        s, pk = 0, ell
        while pk <= self.arg:
            s += self.arg // pk
            pk *= ell
        return s

    def is_multiple_of(self, k: int) -> bool:
        if k <= 0:
            raise ValueError("need a positive divisor candidate")
        if k <= self.arg:
            return True
        from sympy import factorint
        return all(self.valuation(ell) >= e for ell, e in factorint(k).items())

    def describe(self) -> str:
        if self.value is not None:
            return str(self.value)
        return f"({self.arg})!"


def approximation_exponent(p: int, f: int, n: int) -> ApproximationExponent:
    """Exponent D with x^D - 1 in (pi^n) for every unit x of the local field.

    D is the factorial of the cardinality of the quotient O/pi^n O, which
    for the unramified degree-f extension is p^(f*n).
    """
    if n < 1 or f < 1:
        raise ValueError("need n >= 1 and f >= 1")
    m = p ** (f * n)
    value = math.factorial(m) if m <= 20 else None
    return ApproximationExponent(p=p, f=f, n=n, arg=m, value=value)
