"""Exact integer q-expansions: Eisenstein series, the discriminant form,
and the modular j-function.

Everything here is plain integer series arithmetic (dense lists, index =
exponent).  j is computed as E4^3 / Delta; the weight-12 identity
E4^3 - E6^2 = 1728 Delta gives an internal consistency check exercised by
the tests.
"""

from __future__ import annotations

from functools import lru_cache


def _sigma_table(k: int, nmax: int):
    """sigma_k(n) for n = 0..nmax (index 0 unused, set to 0)."""
    s = [0] * (nmax + 1)
    for d in range(1, nmax + 1):
        dk = d ** k
        for m in range(d, nmax + 1, d):
            s[m] += dk
    return s


def series_mul(a, b, nmax: int):
    out = [0] * (nmax + 1)
    for i, ai in enumerate(a[: nmax + 1]):
        if ai:
            top = nmax - i
            for j, bj in enumerate(b[: top + 1]):
                if bj:
                    out[i + j] += ai * bj
    return out


def series_pow(a, e: int, nmax: int):
    out = [1] + [0] * nmax
    base = a[: nmax + 1] + [0] * (nmax + 1 - len(a))
    while e:
        if e & 1:
            out = series_mul(out, base, nmax)
        e >>= 1
        if e:
            base = series_mul(base, base, nmax)
    return out


def series_inv(a, nmax: int):
    """Inverse of a series with constant term 1 (exact integer recurrence)."""
    assert a[0] == 1
    b = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                acc += a[k] * b[n - k]
        b[n] = -acc
    return b


def eisenstein_e4(nmax: int):
    s3 = _sigma_table(3, nmax)
    return [1] + [240 * s3[n] for n in range(1, nmax + 1)]


def eisenstein_e6(nmax: int):
    s5 = _sigma_table(5, nmax)
    return [1] + [-504 * s5[n] for n in range(1, nmax + 1)]


def eta_quotient24(nmax: int):
    """prod (1-q^n)^24 = Delta/q, via the pentagonal-number expansion."""
    euler = [0] * (nmax + 1)
    euler[0] = 1
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 > nmax and e2 > nmax:
            break
        sign = -1 if k % 2 else 1
        if e1 <= nmax:
            euler[e1] += sign
        if e2 <= nmax:
            euler[e2] += sign
        k += 1
    return series_pow(euler, 24, nmax)


@lru_cache(maxsize=8)
def j_coefficients(nmax: int):
    """Coefficients of j = 1/q + 744 + 196884 q + ...

    Returned tuple c has c[i] = coefficient of q^(i-1), so c[0] = 1.
    """
    e4 = eisenstein_e4(nmax + 1)
    num = series_pow(e4, 3, nmax + 1)
    den = eta_quotient24(nmax + 1)
    j_shift = series_mul(num, series_inv(den, nmax + 1), nmax + 1)
    return tuple(j_shift[: nmax + 2])


def weight12_identity_defect(nmax: int):
    """E4^3 - E6^2 - 1728*(Delta/q shifted): all-zero list iff the series
    code is consistent."""
    e4 = eisenstein_e4(nmax)
    e6 = eisenstein_e6(nmax)
    lhs = series_mul(e4, series_mul(e4, e4, nmax), nmax)
    rhs = series_mul(e6, e6, nmax)
    delta = [0] + eta_quotient24(nmax - 1 if nmax else 0)[: nmax]
    return [x - y - 1728 * z for x, y, z in zip(lhs, rhs, delta)]
