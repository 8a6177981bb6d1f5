"""Acceptance criteria 1-12.

Every comparison is exact (tolerance 0 on rationals and polynomials).
Runtime budgets are pinned in BUDGET (seconds).  Each test prints one
PASS/FAIL line.
"""

import random
import time
from fractions import Fraction

import pytest

from tropvertex import ring
from tropvertex.dtcore import build_lhs, coulomb_partition, omega_table, series_coefficients
from tropvertex.gwbridge import commutator_word, compare_refined, refined_word, verify_gw_identity
from tropvertex.joycesong import dt_js_r1, dt_js_r2
from tropvertex.liealg import LieElement, bracket
from tropvertex.numbertheory import binom_congruences, check_mod4, check_mod9, euler_coeff
from tropvertex.series import Cap, GradedSeries, euler_product, macmahon, series_exp, series_log
from tropvertex.vertex import acts_equal, factorize, make_T, recompose, symplectic_defect

TOLERANCE = 0
BUDGET = {1: 60, 2: 1, 4: 300, 5: 300, 8: 10, 10: 300, 12: 120}
CHI = ring.chi()


def report(capsys, n, title, ok, detail=""):
    with capsys.disabled():
        print(f"\nAC{n:>2} {'PASS' if ok else 'FAIL'} {title}{': ' + detail if detail else ''}")
    assert ok, detail


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_ac01_rank2_golden(capsys):
    table, dt = timed(lambda: omega_table(1, Cap.box(8, 3)))
    got = [table.omega[(a, 2)] for a in range(2, 8)]
    want = [-1, -6, -21, -61, -165, -426]
    ok = got == want and dt < BUDGET[1]
    report(capsys, 1, "rank-2 golden series", ok, f"{[str(v) for v in got]} in {dt:.2f}s")


def test_ac02_coulomb(capsys):
    s, dt = timed(lambda: coulomb_partition(2, 1, 7))
    got = series_coefficients(s)
    ok = got == [1, -2, 7, -18, 47, -110, 258, -568] and dt < BUDGET[2]
    report(capsys, 2, "Coulomb series r=2", ok, f"{[str(v) for v in got]} in {dt:.3f}s")


def test_ac03_appendix(capsys):
    t = omega_table(CHI, Cap.box(3, 2))
    ok = t.omega[(2, 2)] == -CHI and t.dtbar[(2, 2)] == CHI * Fraction(-5, 4)
    report(capsys, 3, "Omega(2,2) = -chi, DT(2,2) = -5chi/4", ok, f"{t.omega[(2, 2)]}, {t.dtbar[(2, 2)]}")


def test_ac04_three_paths(capsys):
    cap = Cap.box(6, 3)

    def run():
        return [omega_table(CHI, cap, m).omega for m in ("factorization", "liepath", "closedform")]

    (f, l, c), dt = timed(run)
    bad = [e for e in f if not (f[e] == l[e] == c[e])]
    ok = not bad and dt < BUDGET[4]
    report(capsys, 4, "three-path equality r<=3 a<=6 symbolic", ok, f"mismatches {bad[:3]} in {dt:.2f}s")


def test_ac05_joyce_song(capsys):
    def run():
        t = omega_table(CHI, Cap.box(8, 2))
        r1 = [a for a in range(1, 9) if dt_js_r1(a, CHI) != t.omega[(a, 1)]]
        r2 = [(a, dt_js_r2(a, CHI), t.dtbar[(a, 2)]) for a in range(1, 7)]
        return r1, [x for x in r2 if x[1] != x[2]]

    (bad1, bad2), dt = timed(run)
    ok = not bad1 and not bad2 and dt < BUDGET[5]
    detail = f"rank1 mismatches {bad1}; rank2 mismatches at a={[x[0] for x in bad2]}"
    if bad2:
        a, got, want = bad2[0]
        detail += f" (a={a}: {got} vs {want})"
    report(capsys, 5, "Joyce-Song = KS (rank 1 a<=8, rank 2 a<=6)", ok, detail)


def test_ac06_rank1_generating_function(capsys):
    t = omega_table(CHI, Cap.box(10, 1))
    m = macmahon("minus", CHI, Cap.box(10, 0))
    bad = [a for a in range(1, 11) if t.omega[(a, 1)] != m.coeff(a, 0)]
    report(capsys, 6, "sum Omega(a,1) t^a = M(-t)^chi, a<=10", not bad, f"mismatches {bad}")


def test_ac07_integrality(capsys):
    bad = []
    for c in (-200, -6, 1, 2, 3):
        t = omega_table(c, Cap.box(8, 3))
        bad += [(c, e) for e, v in t.omega.items() if Fraction(v).denominator != 1]
    report(capsys, 7, "Omega integral, chi in {-200,-6,1,2,3}, a<=8, r<=3", not bad, f"non-integral {bad[:3]}")


def test_ac08_congruences(capsys):
    def run():
        bad = []
        for c in (1, 2, 3):
            bad += [("mod4", a, c) for a in range(2, 13, 2) if not check_mod4(a, c)["pass"]]
            bad += [("mod9", a, c) for a in range(3, 13, 3) if not check_mod9(a, c)["pass"]]
        recs = binom_congruences(4, 4, 12)
        bad += [r for r in recs if not r["pass"]]
        return bad, len(recs)

    (bad, n), dt = timed(run)
    ok = not bad and n > 0 and dt < BUDGET[8]
    report(capsys, 8, "mod 4 / mod 9 lemmas and binomial congruences", ok, f"{n} binomial records, {dt:.2f}s")


def test_ac09_euler_product(capsys):
    rng = random.Random(9)
    cap = Cap.box(10, 0)
    bad = 0
    for _ in range(50):
        c = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(10)]
        s = euler_product({n + 1: c[n] for n in range(10)}, cap)
        bad += sum(1 for a in range(11) if euler_coeff(c, a) != s.coeff(a, 0))
    report(capsys, 9, "Euler-product coefficients, 50 random sequences", bad == 0, f"{bad} mismatches")


def test_ac10_gw_identity(capsys):
    def run():
        bad = []
        for ray in [(1, 1), (2, 1), (1, 2), (3, 1), (3, 2)]:
            for c in (1, 2):
                if not verify_gw_identity(*ray, c, h_max=8 // sum(ray))["pass"]:
                    bad.append((ray, c))
        return bad

    bad, dt = timed(run)
    ok = not bad and dt < BUDGET[10]
    report(capsys, 10, "GW identity on five rays, chi in {1,2}, h(a+r)<=8", ok, f"failures {bad}, {dt:.2f}s")


def test_ac11_refined(capsys):
    res = [compare_refined(1, d1, Cap.box(4, 4)) for d1 in (1, 2, 3)]
    ok = all(r["pass"] for r in res)
    report(capsys, 11, "refined -> specialized = aggregate, chi=1, d1<=3, |P|<=4", ok,
           f"mismatches {[r['mismatches'][:1] for r in res if not r['pass']]}")


def test_ac12_properties(capsys):
    t0 = time.perf_counter()
    rng = random.Random(12)
    failures = []

    def q():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 5))

    cap = Cap.total(5)
    for i in range(100):
        g = GradedSeries(cap, {e: q() for e in cap.exponents[1:] if rng.random() < 0.4})
        if series_log(series_exp(g)) != g:
            failures.append(("exp_log", i))
        f = series_exp(g)
        if series_exp(series_log(f)) != f:
            failures.append(("log_exp", i))

    gens = []
    for c in (CHI, 1):
        gens += build_lhs(c, Cap.box(4, 2))
        gens += commutator_word(c, Cap.box(3, 3))
    gens += refined_word(1, 2, Cap.box(2, 2))
    gens += [make_T((a, r), CHI, Cap.box(3, 3)) for a in range(4) for r in range(4) if (a, r) != (0, 0)]
    failures += [("symplectic", k) for k, gen in enumerate(gens) if not symplectic_defect(gen).is_zero()]

    rays = [(a, r) for a in range(4) for r in range(4) if (a, r) != (0, 0)]
    wcap = Cap.box(3, 3)
    for i in range(100):
        w = [make_T(rng.choice(rays), rng.choice([-2, -1, 1, 2, Fraction(1, 2)]), wcap) for _ in range(rng.randint(1, 5))]
        fact = factorize(w, wcap)
        if not acts_equal(recompose(fact), w, wcap) or factorize(recompose(fact), wcap) != fact:
            failures.append(("factorization", i))

    lcap = Cap.box(6, 6)
    for i in range(100):
        x, y, z = (
            LieElement(lcap, {(a, r): q() for a in range(3) for r in range(3) if (a, r) != (0, 0) and rng.random() < 0.5})
            for _ in range(3)
        )
        if not (bracket(x, y) + bracket(y, x)).is_zero():
            failures.append(("antisymmetry", i))
        if not (bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))).is_zero():
            failures.append(("jacobi", i))
    dt = time.perf_counter() - t0
    ok = not failures and dt < BUDGET[12]
    report(capsys, 12, "property suites", ok, f"{len(failures)} failures {failures[:3]}, {dt:.2f}s")
