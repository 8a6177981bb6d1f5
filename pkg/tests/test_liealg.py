from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropvertex import ring
from tropvertex.dtcore import omega_closed_r1, omega_factorization
from tropvertex.liealg import (
    LieElement,
    NotNilpotent,
    ad_power,
    ad_power_closed,
    bch_conjugate,
    bch_multiply,
    bracket,
    log_lhs_closed,
    operator_A,
    operator_B,
    pairing,
    solve_omega_liepath,
)
from tropvertex.series import Cap, CapMismatch

CAP = Cap.box(4, 3)


def e(a, r, cap=CAP, R=None, c=1):
    return LieElement.basis(a, r, cap, R, c)


def test_pairing():
    assert pairing((1, 0), (0, 1)) == 1
    assert pairing((1, 1), (2, 1)) == -1


def test_bracket_examples():
    assert bracket(e(1, 0), e(1, 0)).is_zero()
    assert bracket(e(1, 0), e(0, 1)) == e(1, 1, c=-1)


def test_bracket_cap_mismatch():
    with pytest.raises(CapMismatch):
        bracket(e(1, 0), e(0, 1, Cap.box(2, 2)))


def test_quotient_drops_high_r():
    u = e(1, 1, R=1)
    v = e(0, 1, R=1)
    assert bracket(u, v).is_zero()


def test_ad_power_closed_against_brackets():
    cap = Cap.box(6, 4)
    c = ring.chi()
    A, B = operator_A(c, cap), operator_B(cap)
    assert ad_power_closed(1, c, cap).coeff(1, 1) == c
    for k in range(1, 5):
        closed = ad_power_closed(k, c, cap)
        assert closed == ad_power(A, B, k)
        assert all(closed.coeff(0, j) == 0 for j in range(1, 5))


def test_log_lhs_boundary():
    cap = Cap.box(4, 3)
    lhs = log_lhs_closed(ring.chi(), cap)
    assert lhs.coeff(0, 1) == -1
    assert lhs.coeff(0, 2) == Fraction(-1, 4)
    assert all(lhs.coeff(a, 0) == 0 for a in range(1, 5))


def test_bch_conjugate():
    cap = Cap.box(6, 3)
    c = ring.chi()
    A, B = operator_A(c, cap, 3), operator_B(cap, 3)
    assert bch_conjugate(LieElement.zero(cap, 3), B) == B
    assert bch_conjugate(A, LieElement.zero(cap, 3)).is_zero()
    assert bch_conjugate(A, B) == log_lhs_closed(c, cap, 3)


def test_bch_multiply_examples():
    cap = Cap.box(4, 2)
    x, y = e(1, 1, cap, 2), e(2, 1, cap, 2)
    assert bch_multiply(x, y) == x + y + e(3, 2, cap, 2, Fraction(1, 2))
    u = e(1, 1, cap, 2, 3) + e(2, 2, cap, 2, 5)
    assert bch_multiply(u, -u).is_zero()
    same_ray = e(1, 1, cap, 2, 7)
    assert bch_multiply(u, same_ray) == u + same_ray


def test_bch_not_nilpotent_guard():
    cap = Cap.box(20, 20)
    with pytest.raises(NotNilpotent):
        bch_multiply(e(1, 0, cap), e(0, 1, cap))


def test_liepath_examples():
    c = ring.chi()
    r1 = solve_omega_liepath(c, 1, 5)
    assert all(r1[(a, 1)] == omega_closed_r1(a, c) for a in range(1, 6))
    assert solve_omega_liepath(1, 2, 3)[(2, 2)] == -1
    assert solve_omega_liepath(c, 2, 3)[(2, 2)] == -c


def test_liepath_matches_factorization():
    c = ring.chi()
    lie = solve_omega_liepath(c, 3, 5)
    fact = omega_factorization(c, Cap.box(5, 3))
    for (a, r), w in lie.items():
        assert fact[(a, r)] == w


coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)
LCAP = Cap.box(5, 5)


@st.composite
def elements(draw):
    terms = {(a, r): draw(coef) for a in range(3) for r in range(3) if (a, r) != (0, 0) and draw(st.booleans())}
    return LieElement(LCAP, terms)


@given(elements(), elements(), elements())
def test_antisymmetry_and_jacobi(x, y, z):
    assert (bracket(x, y) + bracket(y, x)).is_zero()
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert jac.is_zero()


@given(elements(), elements())
def test_bracket_bilinear(x, y):
    assert bracket(x + y, y) == bracket(x, y)
