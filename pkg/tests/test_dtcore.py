from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropvertex import ring
from tropvertex.dtcore import (
    IncompleteTable,
    InvariantTable,
    build_lhs,
    conjecture_report,
    coulomb_partition,
    degenerate_partition,
    dtbar_closed_r2,
    dtbar_closed_r3,
    mobius_invert,
    omega_closed_r1,
    omega_closed_r2,
    omega_closed_r3,
    omega_table,
    series_coefficients,
)
from tropvertex.liealg import log_lhs_closed
from tropvertex.series import Cap, GradedSeries, macmahon, series_pow
from tropvertex.vertex import apply, images, make_T

CHI = ring.chi()


def test_build_lhs_chi_zero():
    cap = Cap.box(3, 2)
    assert images(build_lhs(0, cap), cap) == images([make_T((0, 1), 1, cap)], cap)


def test_build_lhs_on_x_and_y():
    cap = Cap.box(3, 1)
    x = GradedSeries.x(cap)
    y = GradedSeries.y(cap)
    one_minus_y = GradedSeries(cap, {(0, 0): 1, (0, 1): -1})
    tail, d6 = build_lhs(1, cap)
    assert apply([d6], x) == series_pow(one_minus_y, -1) * x
    assert apply([tail], x) == x
    d = macmahon("plus", 1, cap)
    assert apply([tail], y) == d * y
    # the word acts right to left: x -> (1 - y)^-1 x -> (1 - D y)^-1 x
    assert apply([tail, d6], x) == series_pow(GradedSeries.one(cap) - d * y, -1) * x


def test_boundary_values():
    t = omega_table(CHI, Cap.box(4, 3))
    assert all(t.omega[(a, 0)] == -CHI for a in range(1, 5))
    assert t.omega[(0, 1)] == 1
    assert t.omega[(0, 2)] == 0 and t.omega[(0, 3)] == 0
    assert t.dtbar[(0, 2)] == Fraction(1, 4)
    assert t.dtbar[(0, 3)] == Fraction(1, 9)
    for r in (2, 3):
        for a in range(1, r):
            assert t.dtbar[(a, r)] == 0


def test_golden_rank2():
    t = omega_table(1, Cap.box(7, 2))
    assert [t.omega[(a, 2)] for a in range(2, 8)] == [-1, -6, -21, -61, -165, -426]


def test_mobius_examples():
    t = omega_table(CHI, Cap.box(3, 2))
    assert t.dtbar[(2, 1)] == t.omega[(2, 1)]
    assert t.omega[(2, 2)] == -CHI
    assert t.dtbar[(2, 2)] == CHI * Fraction(-5, 4)
    back = mobius_invert(InvariantTable(CHI, t.cap, "x", {}, dict(t.dtbar)), "dt_to_omega")
    assert back.omega == t.omega


def test_mobius_incomplete():
    t = InvariantTable(1, Cap.box(2, 2), "x", {(2, 2): Fraction(1)})
    with pytest.raises(IncompleteTable):
        mobius_invert(t, "omega_to_dt")


def test_table_json_round_trip():
    t = omega_table(CHI, Cap.box(3, 2))
    assert InvariantTable.from_json(t.to_json()) == t


def test_closed_r1():
    assert omega_closed_r1(1, CHI) == -CHI
    assert omega_closed_r1(2, 1) == 3
    cap = Cap.box(10, 0)
    m = macmahon("minus", CHI, cap)
    assert [omega_closed_r1(a, CHI) for a in range(1, 11)] == [m.coeff(a, 0) for a in range(1, 11)]


def test_closed_r2():
    assert omega_closed_r2(2, 1) == -1
    assert omega_closed_r2(3, 1) == -6
    assert omega_closed_r2(2, CHI) == -CHI
    assert dtbar_closed_r2(2, CHI) == CHI * Fraction(-5, 4)


def test_closed_r2_excluding_zero_is_wrong():
    # the pair sum must include a' = 0 with Omega(0,1) = 1
    assert omega_closed_r2(3, 1, include_zero=False) != -6


def test_closed_r3():
    t = omega_table(CHI, Cap.box(6, 3))
    for a in range(1, 7):
        assert omega_closed_r3(a, CHI) == t.omega[(a, 3)]
        assert dtbar_closed_r3(a, CHI) == t.dtbar[(a, 3)]
    assert omega_closed_r3(3, 1) == -1


def test_closed_r3_printed_weight_not_integral():
    assert Fraction(omega_closed_r3(3, 1, variant="printed")).denominator != 1


def test_three_paths():
    cap = Cap.box(5, 3)
    tabs = [omega_table(CHI, cap, m) for m in ("factorization", "liepath", "closedform")]
    assert tabs[0].omega == tabs[1].omega == tabs[2].omega


def test_orders_disagree():
    cap = Cap.box(4, 2)
    assert omega_table(1, cap, order="asc").omega != omega_table(1, cap).omega


def test_series():
    assert series_coefficients(coulomb_partition(2, 1, 7)) == [1, -2, 7, -18, 47, -110, 258, -568]
    assert series_coefficients(coulomb_partition(1, 0, 3)) == [1, 0, 0, 0]
    assert series_coefficients(degenerate_partition(1, 0, 3)) == [1, 0, 0, 0]
    for r in (1, 2, 3):
        d = degenerate_partition(r, CHI, 5).scale(r * r)
        assert d == coulomb_partition(r, CHI, 5, sign="degenerate")
    assert coulomb_partition(3, CHI, 5) == coulomb_partition(3, CHI, 5, sign="degenerate")


def test_degenerate_matches_log_lhs():
    cap = Cap.box(5, 3)
    lhs = log_lhs_closed(CHI, cap)
    for r in (1, 2, 3):
        d = degenerate_partition(r, CHI, 5)
        for a in range(1, 6):
            assert d.coeff(a, 0) == -lhs.coeff(a, r)


def test_conjectures_informational():
    rep = conjecture_report(1, Cap.box(3, 3))
    diag = {x["a"]: x for x in rep if x["check"] == "diagonal"}
    assert diag[1]["pass"] and diag[2]["pass"]
    sym = [x for x in rep if x["check"] == "symmetry" and x["a"] == 3]
    assert sym and sym[0]["lhs"] == sym[0]["rhs"] == -6


@pytest.mark.parametrize("chi", [-200, -6, 1, 2, 3])
def test_integrality(chi):
    t = omega_table(chi, Cap.box(8, 3))
    assert all(Fraction(v).denominator == 1 for v in t.omega.values())


@given(st.integers(-20, 20))
def test_symbolic_specializes(c):
    sym = omega_table(CHI, Cap.box(4, 2))
    num = omega_table(c, Cap.box(4, 2))
    for k, v in sym.omega.items():
        assert ring.substitute(v, {"chi": c}) == num.omega[k]
