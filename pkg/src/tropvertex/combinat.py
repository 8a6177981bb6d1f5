"""Partition and composition enumeration shared by the closed forms."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, List, Tuple


def compositions(a: int, k: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Ordered partitions of ``a``; only those of length ``k`` when given."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if k is not None and k < 0:
        raise ValueError("k must be nonnegative")
    if a == 0:
        if k in (None, 0):
            yield ()
        return
    if k == 0:
        return

    def rec(rest: int, left):
        if left == 1 or (left is None and rest == 0):
            if left == 1:
                yield (rest,)
            else:
                yield ()
            return
        hi = rest if left is None else rest - (left - 1)
        for first in range(1, hi + 1):
            for tail in rec(rest - first, None if left is None else left - 1):
                yield (first,) + tail

    yield from rec(a, k)


def count_compositions(a: int, k: int) -> int:
    return comb(a - 1, k - 1) if a >= 1 and k >= 1 else int(a == 0 and k == 0)


def partitions_unordered(a: int, max_part: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``a`` as non-increasing tuples."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    if max_part is None:
        max_part = a
    if a == 0:
        yield ()
        return
    for first in range(min(a, max_part), 0, -1):
        for rest in partitions_unordered(a - first, first):
            yield (first,) + rest


def multiplicities(parts) -> dict:
    out: dict = {}
    for p in parts:
        out[p] = out.get(p, 0) + 1
    return out


def composition_pairs(a: int, k: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Pairs (n, i) of length-k positive vectors with sum n_l i_l = a."""
    if k == 0:
        if a == 0:
            yield (), ()
        return
    for first_prod in range(1, a - (k - 1) + 1):
        for n1 in divisors(first_prod):
            i1 = first_prod // n1
            for ns, is_ in composition_pairs(a - first_prod, k - 1):
                yield (n1,) + ns, (i1,) + is_


@lru_cache(maxsize=None)
def divisors(n: int) -> Tuple[int, ...]:
    if n < 1:
        raise ValueError("divisors of a positive integer only")
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def divisor_square_sum(p: int) -> Fraction:
    """J(p) = sum over m | p of 1/m^2."""
    return sum((Fraction(1, m * m) for m in divisors(p)), Fraction(0))


@lru_cache(maxsize=None)
def pair_sum(a: int, k: int) -> Fraction:
    """S_k(a) = sum over (n, i) of length k with n.i = a of prod n / prod i.

    Computed by convolution: S_1(b) = sum_{d | b} d / (b / d) and S_k is the
    k-fold convolution of S_1.
    """
    if k < 0 or a < 0:
        raise ValueError("negative index")
    if k == 0:
        return Fraction(int(a == 0))
    if k == 1:
        if a == 0:
            return Fraction(0)
        return sum((Fraction(d * d, a) for d in divisors(a)), Fraction(0))
    return sum((pair_sum(b, 1) * pair_sum(a - b, k - 1) for b in range(1, a - k + 2)), Fraction(0))


def pair_sum_bruteforce(a: int, k: int) -> Fraction:
    total = Fraction(0)
    for n, i in composition_pairs(a, k):
        num = 1
        den = 1
        for x in n:
            num *= x
        for x in i:
            den *= x
        total += Fraction(num, den)
    return total


def partition_weight_sum(a: int, k: int) -> Fraction:
    """sum over ordered p of a, len k, of prod p_l J(p_l)."""
    total = Fraction(0)
    for p in compositions(a, k):
        w = Fraction(1)
        for x in p:
            w *= x * divisor_square_sum(x)
        total += w
    return total


def fact(n: int) -> int:
    return factorial(n)
