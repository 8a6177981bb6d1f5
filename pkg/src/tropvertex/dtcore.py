"""D0-D6 invariants from the wall-crossing identity in the tropical vertex group.

The left-hand side is the D0 tail on ray (1,0) followed by T_{0,1}; its
slope-ordered factorization yields Omega(a, r) for every class in the cap.
Closed forms for r <= 3, the degenerate and Coulomb partition functions and
the constancy/symmetry report live here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd
from typing import Dict, List, Mapping, Optional, Tuple

from . import ring
from .combinat import pair_sum
from .numbertheory import mobius
from .ring import is_zero
from .series import Cap, GradedSeries, macmahon, series_pow
from .vertex import (
    VertexGenerator,
    VertexWord,
    factorize,
    make_T,
    quadratic_sign,
    ray_function_to_BPS,
)

Cls = Tuple[int, int]
METHODS = ("factorization", "liepath", "closedform", "joycesong")


class IncompleteTable(KeyError):
    pass


@dataclass
class InvariantTable:
    chi: object
    cap: Cap
    method: str
    omega: Dict[Cls, object] = field(default_factory=dict)
    dtbar: Dict[Cls, object] = field(default_factory=dict)

    def classes(self) -> List[Cls]:
        keys = set(self.omega) | set(self.dtbar)
        return sorted(keys, key=lambda e: (e[1], e[0]))

    def to_json(self) -> dict:
        return {
            "chi": ring.ring_to_json(ring.to_ring(self.chi)),
            "cap": self.cap.to_json(),
            "method": self.method,
            "entries": [
                {
                    "a": a,
                    "r": r,
                    "omega": ring.ring_to_json(self.omega[(a, r)]) if (a, r) in self.omega else None,
                    "dtbar": ring.ring_to_json(self.dtbar[(a, r)]) if (a, r) in self.dtbar else None,
                }
                for (a, r) in self.classes()
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "InvariantTable":
        t = cls(ring.ring_from_json(obj["chi"]), Cap.from_json(obj["cap"]), obj["method"])
        for e in obj["entries"]:
            if e["omega"] is not None:
                t.omega[(e["a"], e["r"])] = ring.ring_from_json(e["omega"])
            if e["dtbar"] is not None:
                t.dtbar[(e["a"], e["r"])] = ring.ring_from_json(e["dtbar"])
        return t

    def __eq__(self, other):
        if not isinstance(other, InvariantTable):
            return NotImplemented
        return (
            ring.to_ring(self.chi) == ring.to_ring(other.chi)
            and self.cap == other.cap
            and self.omega == other.omega
            and self.dtbar == other.dtbar
        )


# -- the left-hand side ---------------------------------------------------------


def d0_tail(chi, cap: Cap) -> GradedSeries:
    """Ray function of prod_{a <= a_max} T^{-chi}_{a,0} merged on ray (1,0).

    T^{-chi}_{a,0} = theta_{(a,0), (1-x^a)^{-chi}} acts like
    theta_{(1,0), (1-x^a)^{-a chi}}, so the merged function is M(x)^chi.
    """
    return macmahon("plus", chi, cap)


def build_lhs(chi, cap: Cap) -> VertexWord:
    tail = VertexGenerator((1, 0), d0_tail(chi, cap))
    return [tail, make_T((0, 1), 1, cap)]


def _complete(omega: Dict[Cls, object], cap: Cap) -> Dict[Cls, object]:
    return {e: ring.constant_value(omega.get(e, Fraction(0))) for e in cap.exponents if e != (0, 0)}


def omega_factorization(chi, cap: Cap, order: str = "desc") -> Dict[Cls, object]:
    fact = factorize(build_lhs(chi, cap), cap, order)
    omega: Dict[Cls, object] = {}
    for ray, f in fact.rays.items():
        for m, w in ray_function_to_BPS(ray, f):
            omega[(m * ray[0], m * ray[1])] = w
    return _complete(omega, cap)


def omega_table(chi, cap: Cap, method: str = "factorization", order: str = "desc", **opts) -> InvariantTable:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "factorization":
        omega = omega_factorization(chi, cap, order)
    elif method == "liepath":
        from .liealg import solve_omega_liepath

        if cap.max_r > 3:
            raise ValueError("the Lie path covers r <= 3 only")
        lie = solve_omega_liepath(chi, cap.max_r, cap.max_a, order)
        omega = _boundary_values(chi, cap)
        omega.update({e: w for e, w in lie.items() if cap.contains(*e)})
        omega = _complete(omega, cap)
    elif method == "closedform":
        if cap.max_r > 3:
            raise ValueError("closed forms exist for r <= 3 only")
        omega = _boundary_values(chi, cap)
        fns = {1: omega_closed_r1, 2: omega_closed_r2, 3: lambda a, c: omega_closed_r3(a, c, **opts)}
        for (a, r) in cap.exponents:
            if a >= 1 and r >= 1:
                omega[(a, r)] = fns[r](a, chi)
        omega = _complete(omega, cap)
    else:
        from .joycesong import joycesong_table

        return joycesong_table(chi, cap)
    table = InvariantTable(chi, cap, method, omega)
    table.dtbar = mobius_invert(table, "omega_to_dt").dtbar
    return table


def _boundary_values(chi, cap: Cap) -> Dict[Cls, object]:
    out: Dict[Cls, object] = {}
    for (a, r) in cap.exponents:
        if r == 0 and a >= 1:
            out[(a, 0)] = -ring.to_ring(chi)
        elif a == 0 and r >= 1:
            out[(0, r)] = Fraction(int(r == 1))
    return out


def mobius_invert(table: InvariantTable, direction: str) -> InvariantTable:
    """DT-bar(c) = sum_{m | gcd} Omega(c/m)/m^2 and its Moebius inverse."""
    if direction == "omega_to_dt":
        src = table.omega
    elif direction == "dt_to_omega":
        src = table.dtbar
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out: Dict[Cls, object] = {}
    for (a, r) in src:
        g = gcd(a, r)
        acc = Fraction(0)
        for m in range(1, g + 1):
            if g % m:
                continue
            key = (a // m, r // m)
            if key not in src:
                raise IncompleteTable(f"class {key} missing for inversion at {(a, r)}")
            w = Fraction(1, m * m) if direction == "omega_to_dt" else Fraction(mobius(m), m * m)
            if w:
                acc = acc + src[key] * w
        out[(a, r)] = ring.constant_value(acc)
    res = InvariantTable(table.chi, table.cap, table.method, dict(table.omega), dict(table.dtbar))
    if direction == "omega_to_dt":
        res.dtbar = out
    else:
        res.omega = out
    return res


# -- closed forms ---------------------------------------------------------------


def _k_sum(a: int, chi, scale: int):
    """sum_k scale^{k-2} chi^k / k! S_k(a)."""
    chi = ring.to_ring(chi)
    total = Fraction(0)
    for k in range(1, a + 1):
        s = pair_sum(a, k)
        if s:
            total = total + chi ** k * (Fraction(scale) ** (k - 2) * s / factorial(k))
    return ring.constant_value(total)


def omega_closed_r1(a: int, chi):
    if a < 1:
        raise ValueError("a must be positive")
    v = _k_sum(a, chi, 1)
    return -v if a % 2 else v


def _omega1(a: int, chi):
    # Omega(0,1) = 1 enters the bracket sums as the T_{0,1} factor
    return Fraction(1) if a == 0 else omega_closed_r1(a, chi)


def _pair_bracket_r2(a: int, chi, include_zero: bool = True):
    total = Fraction(0)
    lo = 0 if include_zero else 1
    for a1 in range(lo, a + 1):
        a2 = a - a1
        if a1 < a2:
            total = total + _omega1(a1, chi) * _omega1(a2, chi) * (a1 - a2)
    return total * Fraction(-1 if a % 2 else 1, 2)


def omega_closed_r2(a: int, chi, include_zero: bool = True):
    """Rank-2 identity.  ``include_zero`` lets the pair sum run over a' = 0,
    which carries the T_{0,1} factor; without it the values are wrong."""
    if a < 1:
        raise ValueError("a must be positive")
    v = _k_sum(a, chi, 2) + _pair_bracket_r2(a, chi, include_zero)
    if a % 2 == 0:
        v = v - _omega1(a // 2, chi) * Fraction(1, 4)
    return ring.constant_value(v)


def dtbar_closed_r2(a: int, chi, include_zero: bool = True):
    if a < 1:
        raise ValueError("a must be positive")
    return ring.constant_value(_k_sum(a, chi, 2) + _pair_bracket_r2(a, chi, include_zero))


def _omega2(a: int, chi):
    return Fraction(0) if a == 0 else omega_closed_r2(a, chi)


def omega_closed_r3(a: int, chi, variant: str = "corrected"):
    """Rank-3 identity, summing over a_1 >= 0 with Omega(0,1) = 1.

    ``variant="printed"`` uses weight 1/4 on the two triple-bracket sums over
    a_1 < a_2 < a_3; the correct third-order BCH weight for three distinct
    ordered factors is 1/6, which is the default.
    """
    if a < 1:
        raise ValueError("a must be positive")
    if variant not in ("corrected", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    w3 = Fraction(1, 6) if variant == "corrected" else Fraction(1, 4)
    o1 = lambda b: _omega1(b, chi)
    o2 = lambda b: _omega2(b, chi)
    q = Fraction(1, 4)
    total = ring.to_ring(_k_sum(a, chi, 3))
    if a % 2:
        total = -total
    for a1 in range(0, a + 1):
        for a2 in range(a1 + 1, a + 1):
            if 2 * a1 + a2 == a:
                total = total + o1(a1) * o1(a2) * (q * (a1 - a2))
                total = total - o1(a1) ** 2 * o1(a2) * Fraction((a1 - a2) ** 2, 12)
            if a1 + 2 * a2 == a:
                total = total + o1(a1) * o1(a2) * (q * (a1 - a2))
                total = total - o1(a1) * o1(a2) ** 2 * Fraction((a1 - a2) ** 2, 12)
            a3 = a - a1 - a2
            if a3 > a2:
                prod = o1(a1) * o1(a2) * o1(a3)
                coef = (a1 - a2) * (a1 + a2 - 2 * a3) + (a2 - a3) * (2 * a1 - a2 - a3)
                total = total - prod * (w3 * coef)
    for a1 in range(0, a + 1):
        a2 = a - a1
        if a1 < 2 * a2:
            sign = -1 if a1 % 2 else 1
            total = total + o2(a1) * o1(a2) * Fraction(sign * (a1 - 2 * a2), 2)
        if 2 * a1 < a2:
            sign = -1 if a2 % 2 else 1
            total = total + o1(a1) * o2(a2) * Fraction(sign * (2 * a1 - a2), 2)
    if a % 3 == 0:
        total = total - o1(a // 3) * Fraction(1, 9)
    return ring.constant_value(total)


def dtbar_closed_r3(a: int, chi, variant: str = "corrected"):
    v = omega_closed_r3(a, chi, variant)
    if a % 3 == 0:
        v = v + _omega1(a // 3, chi) * Fraction(1, 9)
    return ring.constant_value(v)


# -- partition functions ----------------------------------------------------------


def degenerate_partition(r: int, chi, n: int) -> GradedSeries:
    """(1/r^2) M((-1)^r t)^{r chi} up to t^n (t is the series variable x)."""
    if r < 1:
        raise ValueError("r must be positive")
    cap = Cap.box(n, 0)
    m = macmahon("plus" if r % 2 == 0 else "minus", ring.to_ring(chi) * r, cap)
    return m.scale(Fraction(1, r * r))


def coulomb_partition(r: int, chi, n: int, sign: str = "minus") -> GradedSeries:
    """Integral Coulomb-phase series.

    ``sign="minus"`` gives M(-t)^{r chi}, which reproduces the reference
    r = 2 coefficients; ``sign="degenerate"`` gives r^2 times the degenerate
    series.  The two agree for odd r.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if sign == "minus":
        return macmahon("minus", ring.to_ring(chi) * r, Cap.box(n, 0))
    if sign == "degenerate":
        return degenerate_partition(r, chi, n).scale(r * r)
    raise ValueError(f"unknown sign convention {sign!r}")


def series_coefficients(s: GradedSeries) -> List[object]:
    return [s.coeff(a, 0) for a in range(s.cap.max_a + 1)]


# -- conjectures --------------------------------------------------------------------


def conjecture_report(chi, cap: Cap, table: Optional[InvariantTable] = None) -> List[dict]:
    """Check Omega(a, a-i) = Omega(a, i) and Omega(a, a) = -chi where the cap allows.

    Informational only; nothing here raises on a failed check.
    """
    if table is None:
        table = omega_table(chi, cap)
    chi_r = ring.to_ring(chi)
    out = []
    for a in range(1, cap.max_a + 1):
        if cap.contains(a, a):
            v = table.omega[(a, a)]
            out.append({"check": "diagonal", "a": a, "r": a, "lhs": v, "rhs": -chi_r, "pass": v == -chi_r})
        for i in range(1, a):
            if cap.contains(a, i) and cap.contains(a, a - i) and i < a - i:
                u, v = table.omega[(a, a - i)], table.omega[(a, i)]
                out.append({"check": "symmetry", "a": a, "r": i, "lhs": u, "rhs": v, "pass": u == v})
    return out
