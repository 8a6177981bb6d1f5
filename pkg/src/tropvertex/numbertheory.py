"""Euler products, Moebius function and the mod 4 / mod 9 congruences."""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Sequence

from .combinat import multiplicities, partitions_unordered


class IndexOutOfRange(IndexError):
    pass


def mobius(m: int) -> int:
    if m < 1:
        raise ValueError("mobius is defined for m >= 1")
    result = 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def rising_binomial(c, m: int):
    """C(c - 1 + m, m) for any ring value c (a multiset coefficient)."""
    acc = 1
    for k in range(m):
        acc = acc * (c + k)
    return acc * Fraction(1, factorial(m))


def _check_range(c: Sequence, a: int):
    if a < 0:
        raise ValueError("a must be nonnegative")
    if a > len(c):
        raise IndexOutOfRange(f"need exponents c_1..c_{a}, got {len(c)}")


def euler_coeff(c: Sequence, a: int):
    """[t^a] prod_n (1 - t^n)^{-c_n}; ``c[0]`` is c_1.

    Sum over partitions lambda of a of prod_i C(c_i - 1 + m_i, m_i), where
    m_i is the multiplicity of i in lambda.
    """
    _check_range(c, a)
    total = Fraction(0)
    for lam in partitions_unordered(a):
        term = Fraction(1)
        for part, mult in multiplicities(lam).items():
            term = term * rising_binomial(c[part - 1], mult)
        total = total + term
    return total


def euler_coeff_conjugate(c: Sequence, a: int):
    """The same coefficient in conjugate coordinates: p nonincreasing, the
    binomial index is p_i - p_{i+1} with exponent c_i."""
    _check_range(c, a)
    total = Fraction(0)
    for p in partitions_unordered(a):
        term = Fraction(1)
        padded = list(p) + [0]
        for i in range(len(p)):
            d = padded[i] - padded[i + 1]
            if d:
                term = term * rising_binomial(c[i], d)
        total = total + term
    return total


def macmahon_coeff(a: int, power=1, sign: int = 1) -> Fraction:
    """[t^a] M(sign * t)^power."""
    c = [n * power for n in range(1, a + 1)]
    v = euler_coeff(c, a)
    return -v if (sign < 0 and a % 2) else v


def _as_int(v) -> int:
    v = Fraction(v)
    if v.denominator != 1:
        raise ValueError(f"{v} is not an integer")
    return v.numerator


def check_mod4(a: int, chi: int) -> dict:
    """[t^a] M(t)^{2 chi} == (-1)^{a/2} [t^{a/2}] M(t)^chi  (mod 4)."""
    if a % 2:
        raise ValueError("a must be even")
    lhs = _as_int(macmahon_coeff(a, 2 * chi))
    rhs = _as_int(macmahon_coeff(a // 2, chi)) * (-1 if (a // 2) % 2 else 1)
    return {"a": a, "chi": chi, "modulus": 4, "lhs": lhs, "rhs": rhs,
            "lhs_mod": lhs % 4, "rhs_mod": rhs % 4, "pass": (lhs - rhs) % 4 == 0}


def check_mod9(a: int, chi: int) -> dict:
    """[t^a] M(-t)^{3 chi} == [t^{a/3}] M(-t)^chi  (mod 9)."""
    if a % 3:
        raise ValueError("a must be divisible by 3")
    lhs = _as_int(macmahon_coeff(a, 3 * chi, sign=-1))
    rhs = _as_int(macmahon_coeff(a // 3, chi, sign=-1))
    return {"a": a, "chi": chi, "modulus": 9, "lhs": lhs, "rhs": rhs,
            "lhs_mod": lhs % 9, "rhs_mod": rhs % 9, "pass": (lhs - rhs) % 9 == 0}


def _b(top_base: int, xi: int) -> int:
    # C(top_base - 1 + xi, xi)
    return comb(top_base - 1 + xi, xi)


def binom_congruences(i_max: int = 4, chi_max: int = 4, xi_max: int = 12) -> List[dict]:
    """Sweep the binomial congruences behind the two lemmas.

    Each record names the congruence, the point (i, chi, xi) and the verdict.
    Points where a branch does not apply (including xi = 0) are skipped.
    """
    out = []

    def rec(name, i, chi, xi, ok):
        out.append({"name": name, "i": i, "chi": chi, "xi": xi, "pass": bool(ok)})

    for i in range(1, i_max + 1):
        for chi in range(1, chi_max + 1):
            for xi in range(1, xi_max + 1):
                b2 = _b(2 * i * chi, xi)
                b3 = _b(3 * i * chi, xi)
                if xi % 2:
                    rec("mod2_odd", i, chi, xi, b2 % 2 == 0)
                    if i % 2 == 0:
                        rec("mod4_odd_even_i", i, chi, xi, b2 % 4 == 0)
                else:
                    half = _b(i * chi, xi // 2) * (-1 if (xi // 2) % 2 else 1)
                    rec("mod4_rescale", i, chi, xi, (b2 - half) % 4 == 0)
                if xi % 3:
                    rec("mod3_nondiv", i, chi, xi, b3 % 3 == 0)
                    if i % 3 == 0:
                        rec("mod9_nondiv_3i", i, chi, xi, b3 % 9 == 0)
                else:
                    third = _b(i * chi, xi // 3) * (-1 if (xi // 3) % 2 else 1)
                    lhs = b3 * (-1 if xi % 2 else 1)
                    rec("mod9_rescale", i, chi, xi, (lhs - third) % 9 == 0)
    return out


def mod4_reduction(a: int, chi: int) -> dict:
    """End-to-end rank-2 integrality chain at even a.

    Omega(a,2) = (X - Omega(a/2,1)) / 4 + (an even pair sum) / 2 with
    X = [t^a] M(t)^{2 chi}; so Omega(a,2) is integral iff X == Omega(a/2,1)
    mod 4 (given the pair sum is even).
    """
    from .dtcore import omega_closed_r1, omega_closed_r2, _pair_bracket_r2

    if a % 2 or a < 2:
        raise ValueError("a must be even and positive")
    x = _as_int(macmahon_coeff(a, 2 * chi))
    o_half = _as_int(omega_closed_r1(a // 2, chi))
    pair = Fraction(_pair_bracket_r2(a, chi)) * 2
    omega = Fraction(omega_closed_r2(a, chi))
    return {
        "a": a,
        "chi": chi,
        "congruence": (x - o_half) % 4 == 0,
        "pair_sum_even": pair.denominator == 1 and pair.numerator % 2 == 0,
        "omega_integral": omega.denominator == 1,
        "omega": omega,
    }
