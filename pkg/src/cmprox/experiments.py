"""Experiment runners reproducing the package's end-to-end claims.

Each runner returns an ExperimentReport whose cases carry exact values
(integers, fractions rendered as "a/b") so that every verdict can be
re-derived from the report alone.  Reports serialize to canonical JSON:
sorted keys, fixed separators, and a timing slot pinned to null, so two
runs with the same configuration and seed are byte-identical.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .classpoly import hilbert_class_poly, singular_moduli_at
from .errors import CmproxError, PrecisionExhausted, ResourceLimit
from .galois import construct_conjugator, log_order_predicate, random_gl2
from .modular import OrdinaryModulus, modular_poly, psi, rigidity_threshold_check
from .padic import PadicNumber, int_valuation, padic_log, ring
from .quadratic import (class_group, ideal_classes_of_norm,
                        is_fundamental_discriminant, kronecker,
                        representation_count)
from .quaternion import construct_phi, gram_matrix
from .qseries import j_coefficients, weight12_identity_defect
from .sieve import (SieveConfig, count_N, euler_product_c,
                    minimal_admissible_x, reference_lower_bound, rho,
                    rho_brute, unit_pair_count)

__all__ = [
    "Case",
    "ExperimentReport",
    "gross_zagier_aggregate",
    "run_prop_approximate",
    "run_warmup_2adic",
    "run_rigidity_scan",
    "run_sieve",
    "run_selftest",
]


# ----------------------------------------------------------------------
# Report plumbing
# ----------------------------------------------------------------------

def _jsonable(v):
    """Exact, deterministic JSON rendering of report values."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or isinstance(v, int) or v is None:
        return v
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return v
    if isinstance(v, str):
        return v
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    raise TypeError(f"value of type {type(v)!r} is not report-safe: {v!r}")


@dataclass
class Case:
    id: str
    inputs: dict
    values: dict
    verdict: str              # "PASS" | "FAIL" | "SKIP"
    notes: str = ""

    def to_dict(self):
        return {
            "id": self.id,
            "inputs": _jsonable(self.inputs),
            "values": _jsonable(self.values),
            "verdict": self.verdict,
            "notes": self.notes,
        }


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    cases: list = field(default_factory=list)

    @property
    def summary(self):
        return {
            "pass": sum(1 for c in self.cases if c.verdict == "PASS"),
            "fail": sum(1 for c in self.cases if c.verdict == "FAIL"),
            "skipped": sum(1 for c in self.cases if c.verdict == "SKIP"),
        }

    @property
    def has_failures(self) -> bool:
        return self.summary["fail"] > 0

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "config": _jsonable(self.config),
            "cases": [c.to_dict() for c in self.cases],
            "summary": self.summary,
            "timing_ms": None,   # pinned for byte-determinism
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ----------------------------------------------------------------------
# Proposition-style pipeline: deep p-adic roots of class polynomials
# ----------------------------------------------------------------------

def _monitor_le(m1, m2, p) -> bool:
    """Compare d1 * p^(-2 v1) <= d2 * p^(-2 v2) exactly.

    The valuations are rationals, so both sides are raised to the lcm of
    the denominators, turning the comparison into big-integer arithmetic.
    """
    d1, v1 = m1
    d2, v2 = m2
    t1, t2 = Fraction(2 * v1), Fraction(2 * v2)
    L = math.lcm(t1.denominator, t2.denominator)
    # d1^L p^(-t1 L) <= d2^L p^(-t2 L)
    e1, e2 = int(t1 * L), int(t2 * L)
    return d1 ** L * p ** e2 <= d2 ** L * p ** e1


def run_prop_approximate(p: int, n_max: int, precision: int = 24,
                         cache_dir=None) -> ExperimentReport:
    """Deep p-adic roots of H_d for d = -(3x^2 + 4 p^(2n+1)).

    For each n the minimal admissible x gives a square-free d with
    -d = 1 mod 4, hence a fundamental discriminant; the Newton polygon
    of H_d at p must show a root of valuation >= n + 1.  The product
    (max root absolute value) * sqrt(|d|) is monitored across n (its
    square is exact).
    """
    if p % 2 == 0 or p % 3 != 2 or not sympy.isprime(p):
        raise ValueError("p must be an odd prime congruent to 2 mod 3")
    rep = ExperimentReport("prop-approximate", {"p": p, "n_max": n_max})
    running = None   # (|d|, valuation) attaining the monitor maximum
    for n in range(1, n_max + 1):
        case_id = f"n={n}"
        try:
            ax = minimal_admissible_x(SieveConfig(p, n))
            d = -ax.value
            assert is_fundamental_discriminant(d), d
            rec = singular_moduli_at(d, p, precision=precision,
                                     cache_dir=cache_dir)
            mx = rec.max_valuation()
            ok = mx is not None and mx >= n + 1
            monitor = (-d, mx)
            if running is None or not _monitor_le(monitor, running, p):
                running = monitor
            assert _monitor_le(monitor, running, p)
            rep.cases.append(Case(
                id=case_id,
                inputs={"n": n, "x": ax.x},
                values={
                    "d": d,
                    "factorization": list(ax.factorization),
                    "class_number": hilbert_class_poly(
                        d, cache_dir=cache_dir).degree,
                    "root_valuations": list(rec.valuations),
                    "required": n + 1,
                    "max_valuation": mx,
                    "monitor_sq": {"abs_d": -d, "valuation": mx},
                    "running_max_sq": {"abs_d": running[0],
                                       "valuation": running[1]},
                },
                verdict=_verdict(ok),
            ))
        except (ResourceLimit, PrecisionExhausted) as ex:
            rep.cases.append(Case(
                id=case_id, inputs={"n": n}, values={},
                verdict="SKIP", notes=f"{type(ex).__name__}: {ex}"))
    return rep


# ----------------------------------------------------------------------
# 2-adic warm-up with the ideal-count aggregate
# ----------------------------------------------------------------------

def gross_zagier_aggregate(ell: int) -> Fraction:
    """(3/2) sum_{A, k >= 1, x in Z} 2^omega(gcd(2,x)) r_{A^2}((3l-x^2)/2^(2+k)).

    r_B(m) counts integral ideals of norm m in the class B; the sum is
    finite because the argument must be a positive integer.  Summing
    over all classes A makes the total the exact 2-adic valuation of
    the product of all roots of H_{-l}.
    """
    G = class_group(-ell)
    total = 0
    for A in G.forms:
        A2 = (A * A).reduced()
        k = 1
        while 4 * 2 ** k <= 3 * ell:
            M = 4 * 2 ** k
            for x in range(0, math.isqrt(3 * ell) + 1):
                num = 3 * ell - x * x
                if num < M or num % M:
                    continue
                weight = (2 if x % 2 == 0 else 1) * (1 if x == 0 else 2)
                total += weight * representation_count(A2, num // M)
            k += 1
    return Fraction(3, 2) * total


def run_warmup_2adic(n_list=(1, 3), search_cap: int = 1000,
                     cache_dir=None) -> ExperimentReport:
    """2-adic valuations of roots of H_{-l} for primes l = 3x^2 + 2^(2+n).

    PASS-A: some root valuation >= (3/2)(n+1).  PASS-B: the sum of all
    root valuations equals the ideal-count aggregate exactly.
    """
    rep = ExperimentReport("warmup-2adic", {"n_list": list(n_list),
                                            "search_cap": search_cap})
    for n in n_list:
        if n % 2 == 0:
            raise ValueError("every n must be odd")
        case_id = f"n={n}"
        ell = None
        for x in range(1, search_cap + 1, 2):
            cand = 3 * x * x + 2 ** (2 + n)
            if cand >= 5 and sympy.isprime(cand):
                ell, x_used = cand, x
                break
        if ell is None:
            rep.cases.append(Case(
                id=case_id, inputs={"n": n}, values={}, verdict="SKIP",
                notes="no prime 3x^2 + 2^(2+n) below the search cap"))
            continue
        assert ell % 8 == 3, ell
        rec = singular_moduli_at(-ell, 2, cache_dir=cache_dir)
        assert rec.zero_roots == 0
        vals = rec.valuations
        threshold = Fraction(3, 2) * (n + 1)
        agg = gross_zagier_aggregate(ell)
        pass_a = rec.max_valuation() >= threshold
        pass_b = sum(vals, Fraction(0)) == agg
        rep.cases.append(Case(
            id=case_id,
            inputs={"n": n},
            values={
                "ell": ell, "x": x_used,
                "class_number": len(vals),
                "root_valuations": list(vals),
                "threshold": threshold,
                "valuation_sum": sum(vals, Fraction(0)),
                "aggregate": agg,
            },
            verdict=_verdict(pass_a and pass_b),
            notes="" if pass_a and pass_b else
            f"A={'ok' if pass_a else 'fail'} B={'ok' if pass_b else 'fail'}",
        ))
    return rep


# ----------------------------------------------------------------------
# Rigidity scan: pairwise valuations against the 6 Psi(N)/(p-1) threshold
# ----------------------------------------------------------------------

def _truncate_to_residue(x: PadicNumber) -> PadicNumber:
    """Image with a single significant digit."""
    if x.kind != "num":
        return x
    return PadicNumber.from_coords(x.ring, x.v, x.coords, 1)


def run_rigidity_scan(p: int, d_cap: int, levels=(1, 2), precision: int = 24,
                      f_cap: int = 6, cache_dir=None) -> ExperimentReport:
    """All pairs of distinct explicit ordinary roots, all levels.

    Bulk pairs are settled at residue level: if x1 - x2 (or
    Phi_N(x1, x2)) is already a unit, its valuation 0 passes the
    threshold.  Only residue-level vanishing triggers the full-precision
    check, whose above-threshold outcomes must carry exact certificates.
    """
    if p < 3:
        raise ValueError("p must be an odd prime")
    discs = [d for d in range(-3, -d_cap - 1, -1)
             if is_fundamental_discriminant(d) and kronecker(d, p) == 1]
    rep = ExperimentReport("rigidity-scan", {
        "p": p, "d_cap": d_cap, "levels": list(levels),
        "precision": precision, "f_cap": f_cap})

    labeled = []      # (d, index, root)
    no_roots = []
    for d in discs:
        rec = singular_moduli_at(d, p, precision=precision, f_max=f_cap,
                                 cache_dir=cache_dir)
        if not rec.roots:
            no_roots.append(d)
        labeled.extend((d, i, r) for i, r in enumerate(rec.roots))
    rep.cases.append(Case(
        id="inventory",
        inputs={"discriminants": len(discs)},
        values={"roots": len(labeled),
                "without_explicit_roots": no_roots},
        verdict="PASS",
        notes="discriminants whose roots exceed the residue-degree cap "
              "contribute no pairs"))

    residue_cache = {}

    def residue_in(idx, F, big):
        key = (idx, F)
        if key not in residue_cache:
            residue_cache[key] = _truncate_to_residue(
                labeled[idx][2]).embed_into(F, big)
        return residue_cache[key]

    for N in levels:
        threshold = Fraction(6 * psi(N), p - 1)
        phi = modular_poly(N) if N > 1 else None
        checked = 0
        unit_pairs = 0
        deep = []            # (d1,i1,d2,i2, order) with order > 0
        certified = []
        skipped = []
        violations = []
        for a in range(len(labeled)):
            d1, i1, x1 = labeled[a]
            for b in range(a + 1, len(labeled)):
                d2, i2, x2 = labeled[b]
                checked += 1
                F = math.lcm(x1.ring.f, x2.ring.f)
                big = ring(p, F)
                r1 = residue_in(a, F, big)
                r2 = residue_in(b, F, big)
                probe = (r1 - r2) if N == 1 else phi(r1, r2)
                if probe.kind == "num" and probe.ord() == 0:
                    unit_pairs += 1
                    continue
                # residue-level vanishing: run the full-precision check
                try:
                    out = rigidity_threshold_check(
                        OrdinaryModulus(d1, x1), OrdinaryModulus(d2, x2), N, p)
                except PrecisionExhausted as ex:
                    skipped.append([d1, i1, d2, i2, str(ex)])
                    continue
                if out.certified_zero:
                    certified.append([d1, i1, d2, i2])
                elif not out.passed:
                    violations.append([d1, i1, d2, i2, out.order])
                else:
                    deep.append([d1, i1, d2, i2, out.order])
        max_order = max((o for *_, o in deep), default=0)
        rep.cases.append(Case(
            id=f"N={N}",
            inputs={"N": N, "threshold": threshold},
            values={
                "pairs_checked": checked,
                "unit_pairs": unit_pairs,
                "positive_order_pairs": sorted(deep),
                "max_order": max_order,
                "certified_zero_pairs": sorted(certified),
                "skipped_pairs": sorted(skipped),
                "uncertified_violations": sorted(violations),
            },
            verdict=_verdict(not violations and not skipped),
            notes="" if not skipped else
            "skipped pairs need a higher working precision",
        ))
    return rep


# ----------------------------------------------------------------------
# Sieve experiment
# ----------------------------------------------------------------------

def run_sieve(p: int, n: int, y: int | None = None,
              L: int = 10 ** 5) -> ExperimentReport:
    cfg = SieveConfig(p, n) if y is None else SieveConfig(p, n, y=y)
    y = cfg.y
    rep = ExperimentReport("sieve", {"p": p, "n": n, "y": y, "L": L})

    brute = count_N(y, cfg, "brute")
    mobius = count_N(y, cfg, "mobius")
    rep.cases.append(Case(
        id="dual-count",
        inputs={"y": y},
        values={"brute": brute, "mobius": mobius},
        verdict=_verdict(brute == mobius)))

    iv = euler_product_c(cfg, L)
    ref = reference_lower_bound(L)
    rep.cases.append(Case(
        id="euler-product",
        inputs={"L": L},
        values={"low": iv.low, "high": iv.high,
                "reference_low": ref.low, "reference_high": ref.high},
        verdict=_verdict(iv.low > Fraction(1, 7)),
        notes="above the analytic floor" if iv.low >= ref.high else
        "below the analytic floor (informational)"))

    ax = minimal_admissible_x(cfg)
    rep.cases.append(Case(
        id="minimal-x",
        inputs={},
        values={"x": ax.x, "value": ax.value,
                "factorization": list(ax.factorization)},
        verdict=_verdict(ax.x % 2 == 1 and ax.value % 3 != 0)))

    pairs = unit_pair_count(y, ax.value, cfg)
    rep.cases.append(Case(
        id="unit-pairs",
        inputs={"k": ax.value, "y": y},
        values={"count": pairs},
        verdict=_verdict(pairs >= 1)))
    return rep


# ----------------------------------------------------------------------
# Self-test: every module's core invariants at reduced iteration counts
# ----------------------------------------------------------------------

def run_selftest(seed: int = 42, precision: int = 24,
                 cache_dir=None) -> ExperimentReport:
    rng = random.Random(seed)
    rep = ExperimentReport("selftest", {"seed": seed, "precision": precision})

    def case(case_id, fn, **inputs):
        try:
            values = fn()
            rep.cases.append(Case(case_id, inputs, values, "PASS"))
        except (CmproxError, AssertionError, ArithmeticError) as ex:
            rep.cases.append(Case(case_id, inputs, {}, "FAIL",
                                  notes=f"{type(ex).__name__}: {ex}"))

    def padic_case():
        r = ring(5, 2)
        xs = [PadicNumber.from_int(rng.randrange(1, 5 ** 8), 5, 2, 16)
              for _ in range(6)]
        for xx in xs:
            for yy in xs:
                assert ((xx + yy) - yy).agrees_with(xx)
                assert (xx * yy).agrees_with(yy * xx)
        g1 = 1 + 5 * xs[0]
        g2 = 1 + 5 * xs[1]
        lhs = padic_log(g1 * g2)
        rhs = padic_log(g1) + padic_log(g2)
        assert lhs.agrees_with(rhs)
        return {"ring": f"Z_5^(2), degree {r.f}", "samples": len(xs)}

    def roots_case():
        from .polyroots import PadicPolynomial, padic_roots

        def lift(coeffs):
            return PadicPolynomial(tuple(
                PadicNumber.from_int(c, 5, 1, 14) for c in coeffs))

        cubic = lift((-6, 11, -6, 1))            # (X-1)(X-2)(X-3)
        roots = padic_roots(cubic, 1, precision=12)
        assert len(roots) == 3
        for r in roots:
            assert cubic(r).is_zero() or cubic(r).is_exhausted()
        quad = lift((-2, 0, 1))                  # X^2 - 2, inert at 5
        rr = padic_roots(quad, 2, precision=12)
        assert len(rr) == 2 and all(r.f == 2 for r in rr)
        return {"cubic_roots": len(roots), "quadratic_roots": len(rr)}

    def quadratic_case():
        G = class_group(-503)
        assert G.h == 21
        for _ in range(20):
            f1 = rng.choice(G.forms)
            f2 = rng.choice(G.forms)
            assert (f1 * f2).reduced() == (f2 * f1).reduced()
        for m in range(1, 21):
            lhs = sum(representation_count(A, m) for A in G.forms)
            assert lhs == len(ideal_classes_of_norm(-503, m)) + sum(
                len(ideal_classes_of_norm(-503, m // (s * s)))
                for s in range(2, math.isqrt(m) + 1) if m % (s * s) == 0)
        return {"h(-503)": G.h}

    def qseries_case():
        assert not any(weight12_identity_defect(48))
        c = j_coefficients(3)
        assert c[0] == 1 and c[1] == 744 and c[2] == 196884
        return {"terms": 3}

    def classpoly_case():
        hp = hilbert_class_poly(-23, cache_dir=cache_dir)
        assert hp.degree == class_group(-23).h == 3
        h16 = hilbert_class_poly(-16, cache_dir=cache_dir)
        assert h16.degree == 1
        j2 = -h16.coeffs[0]          # the singular modulus for -16
        phi2 = modular_poly(2)
        assert phi2(1728, j2) == 0   # 2-isogeny between CM points
        return {"deg_H_23": hp.degree, "j_16": j2}

    def tables_case():
        out = {}
        for N in (2, 3, 5, 7):
            phi = modular_poly(N)
            out[f"phi_{N}_terms"] = len(phi.coeffs)
        const2 = [c for i, j, c in modular_poly(2).coeffs if i == j == 0]
        assert const2 == [-157464000000000]
        return out

    def galois_case():
        for p in (2, 3, 5):
            for _ in range(40):
                gam = 1 + p * rng.randrange(1, p ** 5)
                log_order_predicate((Fraction(gam), p), rng.randrange(1, 25))
            for _ in range(15):
                mats = [random_gl2(rng, p)
                        for _ in range(rng.randrange(1, 4))]
                D = rng.randrange(1, 13)
                v = int_valuation(2 * D, p)
                construct_conjugator(mats, max(1, 2 * v) + rng.randrange(0, 3), D)
        return {"primes": [2, 3, 5]}

    def quaternion_case():
        for q in (5, 11):
            _, det = gram_matrix(q)
            assert det == -q * q
        for _ in range(25):
            n = rng.randrange(0, 4)
            x = rng.randrange(-49, 50) * 2 + 1
            phi, cert = construct_phi(n, x, 5)
            assert cert.ok and phi.reduced_trace == 1
        return {"gram_primes": [5, 11]}

    def sieve_case():
        cfg = SieveConfig(5, 1)
        assert count_N(10 ** 4, cfg, "brute") == count_N(10 ** 4, cfg, "mobius")
        for m in range(1, 301):
            assert rho(m, cfg) == rho_brute(m, cfg)
        iv = euler_product_c(cfg, 2000)
        assert iv.low > Fraction(1, 7)
        return {"N(10^4)": count_N(10 ** 4, cfg, "brute"),
                "c_low": iv.low, "c_high": iv.high}

    def distance_case():
        from .modular import (IdealPresentation, MultiPoly, distance,
                              check_union_product_distances)
        c1 = rng.randrange(5 ** 6)
        c2 = rng.randrange(5 ** 6)
        x = (PadicNumber.from_int(c1, 5, 1, 12),
             PadicNumber.from_int(c2, 5, 1, 12))
        X0 = MultiPoly.variable(2, 0)
        X1 = MultiPoly.variable(2, 1)
        here = IdealPresentation(2, 5, (X0 - MultiPoly.constant(2, c1),
                                        X1 - MultiPoly.constant(2, c2)))
        assert distance(x, here).is_zero()
        nearby = IdealPresentation(2, 5, (X0 - MultiPoly.constant(2, c1 + 5),
                                          X1 - MultiPoly.constant(2, c2)))
        out = check_union_product_distances(x, here, nearby, "union")
        assert out.holds
        out2 = check_union_product_distances(x, here, nearby, "product", y=x)
        assert out2.holds
        return {"coords": 2}

    case("padic-arithmetic", padic_case)
    case("padic-roots", roots_case)
    case("class-group", quadratic_case)
    case("q-series", qseries_case)
    case("modular-tables", tables_case)
    case("class-polynomial", classpoly_case)
    case("conjugator", galois_case)
    case("quaternion-order", quaternion_case)
    case("sieve", sieve_case)
    case("distance", distance_case)
    return rep
