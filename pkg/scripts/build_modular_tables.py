#!/usr/bin/env python3
"""Build the vendored modular polynomial tables src/cmprox/data/phi_<N>.txt.

Construction is exact integer/rational q-series arithmetic throughout:
for prime N the N+1 conjugate functions of j(tau) under the level-N
correspondence are j((tau+k)/N), k = 0..N-1, and j(N tau).  Power sums of
the first N conjugates come from an N-dissection of the series of j^m
(which stays in Z[[q]]: summing over k kills every exponent not divisible
by N and multiplies the survivors by N), Newton's identities produce the
elementary symmetric functions, and appending the j(N tau) factor gives
the coefficients of Phi_N(X, j) as q-series with poles <= N+1.  Each one
is then reduced against powers of j; the reduction must terminate with an
identically zero remainder on the stored window, which (with the symmetry,
Kronecker-congruence and numeric checks below) certifies the table.

Deterministic: reruns regenerate byte-identical files.
"""

import os
import sys
from fractions import Fraction

import mpmath

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from cmprox.qseries import j_coefficients  # noqa: E402

TARGETS = (2, 3, 5, 7)
OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "cmprox", "data")


# Laurent series: dict exponent -> coefficient, plus an exclusive validity
# bound T (coefficients for exponents >= T are unknown, not zero).

def series_mul(a, ta, b, tb, cap):
    pa = min(a) if a else 0
    pb = min(b) if b else 0
    t = min(ta + pb, tb + pa, cap)
    out = {}
    for i, ai in a.items():
        if ai:
            for j, bj in b.items():
                e = i + j
                if e < t and bj:
                    out[e] = out.get(e, 0) + ai * bj
    return {k: v for k, v in out.items() if v}, t


def series_add(a, ta, b, tb):
    t = min(ta, tb)
    out = {k: v for k, v in a.items() if k < t}
    for k, v in b.items():
        if k < t:
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}, t


def series_scale(a, c):
    return {k: c * v for k, v in a.items() if c * v}


def dissect(a, ta, N):
    """Sum over the N branches (tau+k)/N: keep N | r, reindex, scale by N."""
    out = {r // N: N * v for r, v in a.items() if r % N == 0}
    t = ta // N if ta % N == 0 else ta // N + 1
    return out, t


def subst_qN(a, ta, N):
    return {r * N: v for r, v in a.items()}, N * ta


def build_phi(N, jmax=400):
    jc = j_coefficients(jmax)
    j = ({k - 1: jc[k] for k in range(len(jc)) if jc[k]}, jmax)
    cap = jmax
    # powers of j, exact on (-m, T_m)
    jpow = {0: ({0: 1}, cap), 1: j}
    for m in range(2, N + 2):
        jpow[m] = series_mul(*jpow[m - 1], *j, cap)
    # power sums of the N "divided" conjugates, and the j(N tau) branch
    sigma = {m: dissect(*jpow[m], N) for m in range(1, N + 1)}
    bpow = {m: subst_qN(*jpow[m], N) for m in range(0, 2)}
    # Newton's identities over Q for the N-element set
    e = {0: ({0: Fraction(1)}, cap)}
    for i in range(1, N + 1):
        acc, tacc = {}, cap
        for m in range(1, i + 1):
            term, tt = series_mul(*e[i - m], *sigma[m], cap)
            sign = 1 if m % 2 else -1
            acc, tacc = series_add(acc, tacc, series_scale(term, sign), tt)
        e[i] = (series_scale(acc, Fraction(1, i)), tacc)
    # full symmetric functions including j(N tau)
    full = {}
    for i in range(0, N + 2):
        cur, tcur = e.get(i, ({}, cap))
        if i >= 1:
            lower = e.get(i - 1)
            if lower is not None:
                prod, tp = series_mul(*lower, *bpow[1], cap)
                cur, tcur = series_add(cur, tcur, prod, tp)
        full[i] = (cur, tcur)
    # reduce each q-series to a polynomial in j
    phi = {}   # (xdeg, ydeg) -> int coefficient
    for i in range(0, N + 2):
        s, ts = full[i]
        assert ts >= 2, f"validity window too small for e_{i} (T={ts})"
        coeffs = {}
        while s and min(s) < 0:
            M = -min(s)
            c = s[-M]
            coeffs[M] = c
            sub, tsub = jpow[M]
            s, ts = series_add(s, ts, series_scale(sub, -c), tsub)
        if 0 in s:
            coeffs[0] = s.pop(0)
        assert not any(v for k, v in s.items() if k < ts), \
            f"nonzero remainder reducing e_{i} of Phi_{N}: {s}"
        for ydeg, c in coeffs.items():
            c = Fraction(c)
            assert c.denominator == 1, f"non-integral coefficient in Phi_{N}"
            sign = -1 if i % 2 else 1
            phi[(N + 1 - i, ydeg)] = sign * int(c)
    return phi


def validate(N, phi):
    deg = N + 1
    # symmetry
    for (i, j), c in phi.items():
        assert phi.get((j, i), 0) == c, f"Phi_{N} not symmetric at {(i, j)}"
    # Kronecker congruence: Phi_N = (X^N - Y)(X - Y^N) mod N for N prime
    ref = {}
    for (i1, j1, c1) in ((N, 0, 1), (0, 1, -1)):
        for (i2, j2, c2) in ((1, 0, 1), (0, N, -1)):
            key = (i1 + i2, j1 + j2)
            ref[key] = (ref.get(key, 0) + c1 * c2) % N
    seen = {k: c % N for k, c in phi.items() if c % N}
    assert seen == {k: v for k, v in ref.items() if v}, \
        f"Kronecker congruence fails for Phi_{N}"
    # numeric vanishing of Phi_N(j(tau), j(N tau))
    with mpmath.workdps(60):
        jc = j_coefficients(80)
        def jval(tau):
            q = mpmath.exp(2j * mpmath.pi * tau)
            return 1 / q + sum(jc[k] * q ** (k - 1) for k in range(1, len(jc)))
        for tau in (0.13 + 1.21j, -0.37 + 0.93j):
            tau = mpmath.mpc(tau)
            x, y = jval(tau), jval(N * tau)
            val = sum(c * x ** i * y ** j for (i, j), c in phi.items())
            scale = max(abs(c) * abs(x) ** i * abs(y) ** j
                        for (i, j), c in phi.items())
            assert abs(val) / scale < mpmath.mpf(10) ** -25, \
                f"Phi_{N}(j(tau), j(N tau)) does not vanish numerically"
    if N == 2:
        assert phi[(0, 0)] == -157464000000000
        # Phi_2(0, Y) = (Y - 54000)^3
        assert phi[(0, 3)] == 1 and phi[(0, 2)] == -162000
        assert phi[(0, 1)] == 8748000000
    print(f"Phi_{N}: {len(phi)} terms, degree {deg}, all checks passed")


def write_table(N, phi):
    os.makedirs(OUT_DIR, exist_ok=True)
    path = os.path.join(OUT_DIR, f"phi_{N}.txt")
    lines = [f"# modular polynomial Phi_{N}(X, Y); rows: xdeg ydeg coeff (xdeg >= ydeg)"]
    for (i, j) in sorted(phi):
        if i >= j:
            lines.append(f"{i} {j} {phi[(i, j)]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {path}")


def main():
    for N in TARGETS:
        phi = build_phi(N)
        validate(N, phi)
        write_table(N, phi)


if __name__ == "__main__":
    main()
