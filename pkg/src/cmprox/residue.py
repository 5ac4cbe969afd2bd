"""Polynomial root machinery over the residue fields F_{p^f}.

Field elements are the coordinate tuples of an UnramifiedRing taken mod p;
polynomials over the field are lists of such tuples (ascending degree).
The splitting walks a deterministic sweep of field elements instead of
sampling randomly, so every run takes the same branch decisions.
"""

from __future__ import annotations

from .errors import CmproxError


def element_at(r, idx: int):
    """idx-th field element in the fixed base-p digit enumeration."""
    coords = []
    for _ in range(r.f):
        coords.append(idx % r.p)
        idx //= r.p
    return tuple(coords)


def iter_elements(r):
    for idx in range(r.p ** r.f):
        yield element_at(r, idx)


# -- polynomials over F_q ------------------------------------------------

def trim(poly):
    while poly and not any(poly[-1]):
        poly.pop()
    return poly


def degree(poly):
    return len(poly) - 1


def monic(r, poly):
    lead = poly[-1]
    if lead == r.one:
        return poly[:]
    inv = r.inv(lead, r.p)
    return [r.mul(c, inv, r.p) for c in poly]


def mul(r, a, b):
    p = r.p
    out = [r.zero_elem] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if any(ai):
            for j, bj in enumerate(b):
                out[i + j] = r.add(out[i + j], r.mul(ai, bj, p), p)
    return trim(out)


def divmod_(r, a, b):
    p = r.p
    q = [r.zero_elem] * max(1, len(a) - len(b) + 1)
    rem = a[:]
    inv = r.inv(b[-1], p)
    while rem and len(rem) >= len(b):
        c = r.mul(rem[-1], inv, p)
        off = len(rem) - len(b)
        q[off] = c
        if any(c):
            for i in range(len(b)):
                rem[off + i] = r.sub(rem[off + i], r.mul(c, b[i], p), p)
        rem.pop()
        trim(rem)
    return trim(q), rem


def rem(r, a, b):
    return divmod_(r, a, b)[1]


def gcd(r, a, b):
    a, b = trim(a[:]), trim(b[:])
    while b:
        a, b = b, rem(r, a, b)
    return monic(r, a) if a else a


def mulmod(r, a, b, m):
    return rem(r, mul(r, a, b), m)


def powmod(r, a, e, m):
    out = [r.one]
    base = rem(r, a[:], m)
    while e:
        if e & 1:
            out = mulmod(r, out, base, m)
        base = mulmod(r, base, base, m)
        e >>= 1
    return out


def eval_at(r, poly, x):
    p = r.p
    out = r.zero_elem
    for c in reversed(poly):
        out = r.add(r.mul(out, x, p), c, p)
    return out


def sub_poly(r, a, b):
    p = r.p
    n = max(len(a), len(b))
    a = a + [r.zero_elem] * (n - len(a))
    b = b + [r.zero_elem] * (n - len(b))
    return trim([r.sub(x, y, p) for x, y in zip(a, b)])


def from_int_coeffs(r, coeffs):
    """Lift a list of integers to a polynomial over F_q (scalar coefficients)."""
    out = []
    for c in coeffs:
        cc = c % r.p
        out.append(tuple([cc] + [0] * (r.f - 1)))
    return trim(out)


# -- root finding --------------------------------------------------------

def roots_in_field(r, poly):
    """All distinct roots in F_{p^f} of a polynomial over F_{p^f}.

    Deterministic: the splitting sweep and the output order are fixed.
    """
    poly = trim([tuple(c) for c in poly])
    if not poly:
        raise ValueError("zero polynomial has every element as a root")
    if degree(poly) == 0:
        return []
    q = r.p ** r.f
    x_poly = [r.zero_elem, r.one]
    xq = powmod(r, x_poly, q, poly)
    linear_part = gcd(r, poly, sub_poly(r, xq, x_poly))
    roots = []
    _split_all(r, linear_part, roots)
    roots.sort()
    return roots


def _split_all(r, h, out):
    """h is monic and splits into distinct linear factors; collect roots."""
    d = degree(h)
    if d <= 0:
        return
    if d == 1:
        out.append(r.neg(h[0], r.p))
        return
    q = r.p ** r.f
    if r.p != 2:
        exp = (q - 1) // 2
        for idx in range(4 * q):
            c = element_at(r, idx % q)
            shifted = [c, r.one]  # X + c
            g = powmod(r, shifted, exp, h)
            g = sub_poly(r, g, [r.one])
            g = gcd(r, h, g)
            if 0 < degree(g) < d:
                _split_all(r, g, out)
                _split_all(r, divmod_(r, h, g)[0], out)
                return
        raise CmproxError("deterministic splitting sweep exhausted")
    # p = 2: additive (trace) splitting
    m = r.f
    for idx in range(1, 4 * q):
        c = element_at(r, idx % q)
        if not any(c):
            continue
        acc = [r.zero_elem]
        term = rem(r, [r.zero_elem, c], h)  # cX
        for _ in range(m):
            acc = sub_poly(r, acc, [r.neg(t, 2) for t in term])  # acc += term
            term = mulmod(r, term, term, h)
        g = gcd(r, h, acc)
        if 0 < degree(g) < d:
            _split_all(r, g, out)
            _split_all(r, divmod_(r, h, g)[0], out)
            return
    raise CmproxError("deterministic splitting sweep exhausted (p=2)")


# -- linear algebra mod p ------------------------------------------------

def _solve_dependency(vectors, p):
    """First linear dependency among successive vectors mod p.

    Returns coefficients c_0..c_k (c_k = 1) with sum c_i v_i = 0, where k
    is minimal.  Vectors are coordinate tuples.
    """
    n = len(vectors[0])
    basis = []   # rows in echelon form: (pivot_col, row, combo)
    for k, vec in enumerate(vectors):
        row = list(vec)
        combo = [0] * len(vectors)
        combo[k] = 1
        for pivot_col, brow, bcombo in basis:
            c = row[pivot_col]
            if c:
                for i in range(n):
                    row[i] = (row[i] - c * brow[i]) % p
                for i in range(len(vectors)):
                    combo[i] = (combo[i] - c * bcombo[i]) % p
        nz = next((i for i, x in enumerate(row) if x), None)
        if nz is None:
            inv = pow(combo[k], -1, p)
            return [(c * inv) % p for c in combo[: k + 1]]
        inv = pow(row[nz], -1, p)
        row = [(x * inv) % p for x in row]
        combo = [(x * inv) % p for x in combo]
        basis.append((nz, row, combo))
    return None


def minimal_polynomial(r, a):
    """Monic minimal polynomial over F_p of a in F_{p^f} (integer coeffs)."""
    p = r.p
    vectors = [r.one]
    cur = r.one
    for _ in range(r.f):
        cur = r.mul(cur, a, p)
        vectors.append(cur)
        dep = _solve_dependency(vectors, p)
        if dep is not None:
            return tuple(dep)
    raise CmproxError("minimal polynomial search failed")  # pragma: no cover


def frobenius_matrix(r):
    """Columns: Frobenius images of the basis vectors of F_{p^f}."""
    cols = []
    for i in range(r.f):
        e = tuple(1 if j == i else 0 for j in range(r.f))
        cols.append(r.frobenius_coords(e, 1))
    return cols


def _mat_apply(cols, vec, p):
    n = len(vec)
    out = [0] * n
    for i, c in enumerate(vec):
        if c:
            col = cols[i]
            for j in range(n):
                out[j] = (out[j] + c * col[j]) % p
    return tuple(out)


def _kernel_basis(rows, p, n):
    """Basis of the kernel of the matrix with the given rows (acting on F_p^n)."""
    # bring rows to echelon form, track pivots, read off free-variable basis
    ech = []
    pivots = []
    for row in rows:
        row = list(row)
        for pc, er in zip(pivots, ech):
            c = row[pc]
            if c:
                for i in range(n):
                    row[i] = (row[i] - c * er[i]) % p
        nz = next((i for i, x in enumerate(row) if x), None)
        if nz is None:
            continue
        inv = pow(row[nz], -1, p)
        row = [(x * inv) % p for x in row]
        # back-substitute into previous rows
        for k in range(len(ech)):
            c = ech[k][nz]
            if c:
                ech[k] = [(ech[k][i] - c * row[i]) % p for i in range(n)]
        ech.append(row)
        pivots.append(nz)
    free = [i for i in range(n) if i not in pivots]
    basis = []
    for fv in free:
        vec = [0] * n
        vec[fv] = 1
        for pc, er in zip(pivots, ech):
            vec[pc] = (-er[fv]) % p
        basis.append(tuple(vec))
    return basis


def subfield_root(big, sub):
    """Canonical residue root of sub.modulus inside F_{p^F} (F = big.f).

    Deterministic: among the sub.f roots the lexicographically smallest
    coordinate tuple is returned, independent of the search path.
    """
    p = big.p
    g = sub.f
    F = big.f
    assert F % g == 0
    frob_cols = frobenius_matrix(big)
    # matrix of Frob^g - id, as rows for kernel computation
    rows = []
    for i in range(F):
        e = tuple(1 if j == i else 0 for j in range(F))
        img = e
        for _ in range(g):
            img = _mat_apply(frob_cols, img, p)
        rows.append(tuple((img[j] - e[j]) % p for j in range(F)))
    # rows currently = columns of (Frob^g - id); transpose for row-space form
    mat_rows = [tuple(rows[i][j] for i in range(F)) for j in range(F)]
    kernel = _kernel_basis(mat_rows, p, F)
    if len(kernel) != g:
        raise CmproxError("subfield dimension mismatch")  # pragma: no cover
    # find a generator: sweep small F_p-combinations of the kernel basis
    gen = None
    for idx in range(1, p ** g):
        coefs = []
        t = idx
        for _ in range(g):
            coefs.append(t % p)
            t //= p
        cand = tuple(sum(c * kb[j] for c, kb in zip(coefs, kernel)) % p
                     for j in range(F))
        mp = minimal_polynomial(big, cand)
        if len(mp) - 1 == g:
            gen = cand
            gen_minpoly = mp
            break
    if gen is None:
        raise CmproxError("no subfield generator found")  # pragma: no cover
    # abstract copy of F_{p^g} with the generator's minimal polynomial
    from .padic import UnramifiedRing
    abstract = UnramifiedRing(p, g, modulus=gen_minpoly)
    target = from_int_coeffs(abstract, list(sub.modulus))
    roots = roots_in_field(abstract, target)
    if len(roots) != g:
        raise CmproxError("canonical modulus did not split in subfield")
    # map back: T -> gen
    images = []
    for root in roots:
        acc = tuple([0] * F)
        pw = tuple([1] + [0] * (F - 1))
        for i, c in enumerate(root):
            if i:
                pw = big.mul(pw, gen, p)
            if c:
                acc = big.add(acc, big.scalar_mul(c, pw, p), p)
        images.append(acc)
    return min(images)
