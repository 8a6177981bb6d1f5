from fractions import Fraction
from math import factorial

import pytest

from tropvertex import ring
from tropvertex.combinat import compositions, pair_sum, pair_sum_bruteforce, partition_weight_sum
from tropvertex.dtcore import omega_table
from tropvertex.joycesong import (
    decomposition_classes,
    dt_js_r1,
    dt_js_general,
    dt_js_r1_rearranged,
    dt_js_r2,
    dt_js_r2_residual,
    dt_minus,
    helper_identity,
    rank3_tree_shapes,
    s_symbol_r1,
    see_saw_S,
    tree_factor_r1,
    tree_sum,
    tree_sum_bruteforce,
    tree_sum_r2_closed,
    tree_sum_r2_enum,
    u_symbol_r1,
    u_symbol,
    u_symbol_r2,
    unique_ordering_place,
)
from tropvertex.series import Cap

CHI = ring.chi()


def test_s_symbol():
    assert s_symbol_r1((1,), 1) == -1
    assert s_symbol_r1((1, 1), 3) == 0
    assert s_symbol_r1((1, 1, 1), 2) == 1


def test_u_symbol_examples():
    assert u_symbol_r1((1,), 1) == -1
    assert u_symbol_r1((1, 1), 1) == Fraction(1, 2)


@pytest.mark.parametrize("n", range(2, 9))
def test_u_symbol_two_ways_and_alternating_sum(n):
    p = (1,) * (n - 1)
    for i in range(1, n + 1):
        assert u_symbol_r1(p, i) == u_symbol_r1(p, i, method="contraction")
    alt = sum(((-1) ** i * u_symbol_r1(p, i) for i in range(1, n + 1)), Fraction(0))
    assert alt == Fraction((-1) ** n * 2 ** (n - 1), factorial(n - 1))


def test_helper_identity():
    assert helper_identity(1) == (-1, -1)
    assert helper_identity(2)[0] == Fraction(1, 2)
    assert helper_identity(5)[0] == Fraction(-1, 120)
    for s in range(1, 8):
        lhs, rhs = helper_identity(s)
        assert lhs == rhs


def test_tree_factor_r1():
    assert tree_factor_r1((1,), 1) == 1
    assert tree_factor_r1((2, 1), 1) == -2


def test_tree_factor_r1_is_the_only_tree():
    for p in [(1,), (2, 1), (1, 1, 2)]:
        for i in range(1, len(p) + 2):
            cls = decomposition_classes(p, {i: 1})
            assert tree_sum_bruteforce(cls) == tree_factor_r1(p, i)


def test_dt_minus():
    assert dt_minus((1,), 1) == -1
    assert abs(dt_minus((4,), 1)) == Fraction(21, 16)
    assert abs(dt_minus((2, 3), 1)) == Fraction(25, 18)


def test_rank1_assembly():
    assert dt_js_r1(1, CHI) == -CHI
    assert dt_js_r1(2, 1) == 3
    t = omega_table(CHI, Cap.box(8, 1))
    for a in range(1, 9):
        assert dt_js_r1(a, CHI) == t.omega[(a, 1)]
        assert dt_js_r1_rearranged(a, CHI) == t.omega[(a, 1)]


def test_rearrangement_identity():
    for a in range(1, 9):
        for k in range(1, 5):
            assert partition_weight_sum(a, k) == pair_sum(a, k) == pair_sum_bruteforce(a, k)


def test_tree_sum_r2_vanishes_far_apart():
    p = (1, 2, 1)
    assert tree_sum_r2_enum(p, 1, 4) == 0
    assert tree_sum_r2_closed(p, 1, 4) == 0


def test_tree_sum_r2_closed_example():
    assert tree_sum_r2_closed((1, 1), 1, 2) == -4


def test_tree_sum_r2_enum_matches_prufer():
    for p in [(1,), (1, 1), (2, 1), (1, 2, 1)]:
        n = len(p) + 2
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                cls = decomposition_classes(p, {i: 1, j: 1})
                assert tree_sum_r2_enum(p, i, j) == tree_sum_bruteforce(cls)


def test_tree_sum_r2_enum_equals_closed():
    for a in range(1, 6):
        for p in compositions(a):
            n = len(p) + 2
            for i in range(1, n):
                for j in range(i + 1, n + 1):
                    assert tree_sum_r2_enum(p, i, j) == tree_sum_r2_closed(p, i, j)


def test_printed_tree_form_differs_for_odd_a():
    # the literal closed form is off by (-1)^a; per-edge signs disagree too
    assert tree_sum_r2_closed((2, 1), 1, 2) == -12
    assert tree_sum_r2_closed((2, 1), 1, 2, "printed") == 12
    assert tree_sum_r2_enum((2, 1), 1, 2, "edges") == 4


def test_tree_sum_matrix_tree_matches_bruteforce():
    for p in [(1,), (1, 1), (2, 1), (1, 2, 1)]:
        n = len(p) + 2
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                cls = decomposition_classes(p, {i: 1, j: 1})
                for conv in ("pairs", "edges"):
                    assert tree_sum(cls, conv) == tree_sum_bruteforce(cls, conv)


def test_u_symbol_r2_cases():
    # j = i + 1, head > tail
    assert u_symbol_r2((3, 1), 2, 3) == Fraction(-1, 2)
    # j = i + 1, head == tail: the second-order term cancels the first
    assert u_symbol_r2((1, 1), 2, 3, second_order=False) == Fraction(-1, 2)
    assert u_symbol_r2((1, 1), 2, 3) == 0
    # j = i + 2: the second-order term halves the first-order value
    assert u_symbol_r2((1, 1), 1, 3, second_order=False) == 1
    assert u_symbol_r2((1, 1), 1, 3) == Fraction(1, 2)
    assert u_symbol_r2((2, 1, 1), 1, 4) == 0


def test_u_symbol_r2_printed_variant():
    assert u_symbol_r2((1, 1), 1, 3, variant="printed") == Fraction(3, 4)
    assert u_symbol_r2((1, 1), 1, 3, second_order=False, variant="printed") == Fraction(1, 2)


def test_u_symbol_r2_matches_general_engine():
    for a in range(1, 6):
        for p in compositions(a):
            n = len(p) + 2
            for i in range(1, n):
                for j in (i + 1, i + 2):
                    if j > n:
                        continue
                    cls = decomposition_classes(p, {i: 1, j: 1})
                    assert u_symbol_r2(p, i, j) == u_symbol(cls), (p, i, j)


def test_u_symbol_r1_matches_general_engine():
    for a in range(1, 6):
        for p in compositions(a):
            for i in range(1, len(p) + 2):
                cls = decomposition_classes(p, {i: 1})
                assert u_symbol_r1(p, i) == u_symbol(cls)


def test_see_saw_single_and_pair():
    assert see_saw_S([(1, 0)]) == 1
    # gamma then mu: rising before the wall, falling after, type (a)
    assert see_saw_S([(0, 1), (1, 0)]) == -1
    # mu then gamma: falling before, rising after, type (b)
    assert see_saw_S([(1, 0), (0, 1)]) == 1


def test_unique_ordering_place():
    for a in range(1, 8):
        for p in compositions(a):
            assert len(unique_ordering_place(p)) == 1


def test_rank3_shapes():
    seen = set()
    for p in [(1,), (1, 1), (2, 1), (1, 1, 1)]:
        n = len(p) + 3
        for places in [(1, 2, 3), (1, 2, 4), (1, 3, 4)]:
            if places[-1] > n:
                continue
            for rec in rank3_tree_shapes(p, places):
                seen.add(rec["shape"])
                assert rec["shape"] in ("one_cap", "two_cap")
    assert seen == {"one_cap", "two_cap"}


def test_rank2_assembly_golden():
    assert dt_js_r2(2, 1) == Fraction(-5, 4)


def test_rank2_assembly_matches_ks():
    t = omega_table(CHI, Cap.box(5, 2))
    for a in range(1, 6):
        assert dt_js_r2(a, CHI) == t.dtbar[(a, 2)]
        assert dt_js_r2(a, CHI, tree_method="enum") == t.dtbar[(a, 2)]
        assert dt_js_r2(a, CHI, method="general") == t.dtbar[(a, 2)]


def test_rank2_printed_ingredients_fail():
    assert dt_js_r2(2, 1, variant="printed") != Fraction(-5, 4)


def test_residual_rank2_integer_chi():
    assert [dt_js_r2_residual(a, 1) for a in range(1, 4)] == [Fraction(-1, 2), -3, Fraction(-21, 2)]


def test_general_engine_rank3():
    t = omega_table(CHI, Cap.box(4, 3))
    for a in range(1, 5):
        assert dt_js_general(a, 3, CHI) == t.dtbar[(a, 3)]
