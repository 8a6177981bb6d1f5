"""Truncated bivariate power series in x, y graded by exponent pairs (a, r).

A :class:`GradedSeries` keeps only the exponents inside its :class:`Cap`; every
operation projects onto the cap immediately.  Coefficients are ring values
from :mod:`tropvertex.ring`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from . import ring
from .ring import constant_value, is_zero, ring_from_json, ring_to_json

Exp = Tuple[int, int]


class SeriesError(ValueError):
    pass


class CapMismatch(SeriesError):
    pass


class NotInvertible(SeriesError):
    pass


class BadConstantTerm(SeriesError):
    pass


class OutOfCap(SeriesError):
    pass


@dataclass(frozen=True)
class Cap:
    """Downward-closed truncation region.

    ``Cap.box(a_max, r_max)`` keeps a <= a_max and r <= r_max;
    ``Cap.total(n_max)`` keeps a + r <= n_max.
    """

    kind: str
    a_max: int = 0
    r_max: int = 0
    n_max: int = 0

    def __post_init__(self):
        if self.kind not in ("box", "total"):
            raise ValueError(f"unknown cap kind {self.kind!r}")
        if min(self.a_max, self.r_max, self.n_max) < 0:
            raise ValueError("cap bounds must be nonnegative")

    @classmethod
    def box(cls, a_max: int, r_max: int) -> "Cap":
        return cls("box", a_max=a_max, r_max=r_max)

    @classmethod
    def total(cls, n_max: int) -> "Cap":
        return cls("total", n_max=n_max)

    def contains(self, a: int, r: int) -> bool:
        if a < 0 or r < 0:
            return False
        if self.kind == "box":
            return a <= self.a_max and r <= self.r_max
        return a + r <= self.n_max

    @property
    def max_a(self) -> int:
        return self.a_max if self.kind == "box" else self.n_max

    @property
    def max_r(self) -> int:
        return self.r_max if self.kind == "box" else self.n_max

    @property
    def max_degree(self) -> int:
        return self.a_max + self.r_max if self.kind == "box" else self.n_max

    @cached_property
    def exponents(self) -> Tuple[Exp, ...]:
        """All kept exponents, sorted by (a + r, a)."""
        out = [
            (a, r)
            for a in range(self.max_a + 1)
            for r in range(self.max_r + 1)
            if self.contains(a, r)
        ]
        out.sort(key=lambda e: (e[0] + e[1], e[0]))
        return tuple(out)

    def to_json(self) -> dict:
        if self.kind == "box":
            return {"kind": "box", "a_max": self.a_max, "r_max": self.r_max}
        return {"kind": "total", "n_max": self.n_max}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Cap":
        if obj["kind"] == "box":
            return cls.box(obj["a_max"], obj["r_max"])
        return cls.total(obj["n_max"])

    def __str__(self):
        if self.kind == "box":
            return f"Box{{{self.a_max},{self.r_max}}}"
        return f"Total{{{self.n_max}}}"


def _deg(e: Exp) -> int:
    return e[0] + e[1]


class GradedSeries:
    """Truncated power series sum c[a, r] x^a y^r.  Treated as immutable."""

    __slots__ = ("cap", "_terms")

    def __init__(self, cap: Cap, terms: Mapping[Exp, object] | None = None):
        self.cap = cap
        clean: Dict[Exp, object] = {}
        if terms:
            for (a, r), c in terms.items():
                if not cap.contains(a, r):
                    continue
                c = ring.to_ring(c)
                if not is_zero(c):
                    clean[(a, r)] = c
        self._terms = clean

    @classmethod
    def _raw(cls, cap: Cap, terms: Dict[Exp, object]) -> "GradedSeries":
        s = cls.__new__(cls)
        s.cap = cap
        s._terms = terms
        return s

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, cap: Cap) -> "GradedSeries":
        return cls._raw(cap, {})

    @classmethod
    def one(cls, cap: Cap) -> "GradedSeries":
        return cls.constant(1, cap)

    @classmethod
    def constant(cls, c, cap: Cap) -> "GradedSeries":
        return cls(cap, {(0, 0): c})

    @classmethod
    def monomial(cls, a: int, r: int, cap: Cap, c=1) -> "GradedSeries":
        return cls(cap, {(a, r): c})

    @classmethod
    def x(cls, cap: Cap) -> "GradedSeries":
        return cls.monomial(1, 0, cap)

    @classmethod
    def y(cls, cap: Cap) -> "GradedSeries":
        return cls.monomial(0, 1, cap)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[Exp, object]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> List[Exp]:
        return sorted(self._terms, key=lambda e: (_deg(e), e[0]))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self):
        return self._terms.get((0, 0), Fraction(0))

    def coeff(self, a: int, r: int):
        if not self.cap.contains(a, r):
            raise OutOfCap(f"({a},{r}) outside {self.cap}")
        return self._terms.get((a, r), Fraction(0))

    def __getitem__(self, e: Exp):
        return self.coeff(*e)

    def min_degree(self) -> int:
        """Lowest total degree in the support (-1 for the zero series)."""
        return min((_deg(e) for e in self._terms), default=-1)

    def with_cap(self, cap: Cap) -> "GradedSeries":
        return GradedSeries._raw(
            cap, {e: c for e, c in self._terms.items() if cap.contains(*e)}
        )

    def truncate_degree(self, n: int) -> "GradedSeries":
        """Drop terms of total degree above ``n`` (cap unchanged)."""
        return GradedSeries._raw(self.cap, {e: c for e, c in self._terms.items() if _deg(e) <= n})

    def map_coeffs(self, fn) -> "GradedSeries":
        return GradedSeries(self.cap, {e: fn(c) for e, c in self._terms.items()})

    def specialize(self, bindings: Mapping[str, object]) -> "GradedSeries":
        return self.map_coeffs(lambda c: ring.substitute(c, bindings))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "GradedSeries"):
        if not isinstance(other, GradedSeries):
            raise TypeError(f"expected GradedSeries, got {type(other).__name__}")
        if other.cap != self.cap:
            raise CapMismatch(f"{self.cap} vs {other.cap}")

    def __add__(self, other):
        if not isinstance(other, GradedSeries):
            return self + GradedSeries.constant(other, self.cap)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if is_zero(v):
                    del out[e]
                else:
                    out[e] = v
        return GradedSeries._raw(self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries._raw(self.cap, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GradedSeries":
        if is_zero(c):
            return GradedSeries.zero(self.cap)
        out = {}
        for e, v in self._terms.items():
            w = v * c
            if not is_zero(w):
                out[e] = w
        return GradedSeries._raw(self.cap, out)

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return self.scale(ring.to_ring(other))
        self._check(other)
        cap = self.cap
        a_terms, b_terms = self._terms, other._terms
        if len(a_terms) < len(b_terms):
            a_terms, b_terms = b_terms, a_terms
        out: Dict[Exp, object] = {}
        contains = cap.contains
        b_items = list(b_terms.items())
        for (a1, r1), c1 in a_terms.items():
            for (a2, r2), c2 in b_items:
                a, r = a1 + a2, r1 + r2
                if not contains(a, r):
                    continue
                v = out.get((a, r))
                out[(a, r)] = c1 * c2 if v is None else v + c1 * c2
        return GradedSeries._raw(cap, {e: c for e, c in out.items() if not is_zero(c)})

    def __rmul__(self, other):
        return self.scale(ring.to_ring(other))

    def shift(self, da: int, dr: int) -> "GradedSeries":
        """Multiply by x^da y^dr (negative shifts drop the terms that leave the cone)."""
        out = {}
        for (a, r), c in self._terms.items():
            if self.cap.contains(a + da, r + dr):
                out[(a + da, r + dr)] = c
        return GradedSeries._raw(self.cap, out)

    def __eq__(self, other):
        if isinstance(other, GradedSeries):
            return self.cap == other.cap and self._terms == other._terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"GradedSeries({self.cap}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (a, r) in self.support():
            c = ring.ring_str(self._terms[(a, r)])
            mono = "".join(
                s for s in (
                    "" if a == 0 else ("x" if a == 1 else f"x^{a}"),
                    "" if r == 0 else ("y" if r == 1 else f"y^{r}"),
                )
            )
            if not mono:
                parts.append(c)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {
            "cap": self.cap.to_json(),
            "terms": [
                {"a": a, "r": r, "coeff": ring_to_json(self._terms[(a, r)])}
                for (a, r) in self.support()
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedSeries":
        cap = Cap.from_json(obj["cap"])
        return cls(cap, {(t["a"], t["r"]): ring_from_json(t["coeff"]) for t in obj["terms"]})


# -- transcendental operations ---------------------------------------------


def _below(e: Exp, support: Iterable[Tuple[Exp, object]]):
    a, r = e
    for (b, s), c in support:
        if b <= a and s <= r and (b or s):
            yield (b, s), c


def series_invert(f: GradedSeries) -> GradedSeries:
    """Multiplicative inverse up to the cap."""
    c0 = f.constant_term()
    if not ring.is_invertible(c0):
        raise NotInvertible(f"constant term {ring.ring_str(c0)} is not invertible")
    inv0 = ring.inverse(c0)
    nonconst = [(e, c) for e, c in f.items() if e != (0, 0)]
    out: Dict[Exp, object] = {(0, 0): inv0}
    for e in f.cap.exponents[1:]:
        acc = 0
        for (b, s), c in _below(e, nonconst):
            g = out.get((e[0] - b, e[1] - s))
            if g is not None:
                acc = acc + c * g
        if not is_zero(acc):
            v = constant_value(-acc * inv0)
            if not is_zero(v):
                out[e] = v
    return GradedSeries._raw(f.cap, out)


def series_log(f: GradedSeries) -> GradedSeries:
    """log f for f with constant term 1, via D(log f) = Df / f with D the degree operator."""
    if f.constant_term() != 1:
        raise BadConstantTerm("log needs constant term 1")
    nonconst = [(e, c) for e, c in f.items() if e != (0, 0)]
    # g = log f satisfies  n g_n = n f_n - sum_{0<|b|<n} |b| g_b f_{n-b}
    out: Dict[Exp, object] = {}
    for e in f.cap.exponents[1:]:
        n = _deg(e)
        acc = f._terms.get(e, 0) * n
        for (b, s), c in _below(e, nonconst):
            if (b, s) == e:
                continue
            g = out.get((e[0] - b, e[1] - s))
            if g is not None:
                acc = acc - g * (c * (n - b - s))
        if not is_zero(acc):
            v = constant_value(acc * Fraction(1, n))
            if not is_zero(v):
                out[e] = v
    return GradedSeries._raw(f.cap, out)


def series_exp(g: GradedSeries) -> GradedSeries:
    """exp g for g with zero constant term."""
    if not is_zero(g.constant_term()):
        raise BadConstantTerm("exp needs constant term 0")
    gt = list(g.items())
    out: Dict[Exp, object] = {(0, 0): Fraction(1)}
    # D f = f D g  =>  n f_n = sum_b |b| g_b f_{n-b}
    for e in g.cap.exponents[1:]:
        n = _deg(e)
        acc = 0
        for (b, s), c in _below(e, gt):
            h = out.get((e[0] - b, e[1] - s))
            if h is not None:
                acc = acc + c * h * (b + s)
        if not is_zero(acc):
            v = constant_value(acc * Fraction(1, n))
            if not is_zero(v):
                out[e] = v
    return GradedSeries._raw(g.cap, out)


def series_pow(f: GradedSeries, e) -> GradedSeries:
    """f**e for f with constant term 1 and any ring-valued exponent ``e``.

    Uses the recurrence obtained from f * D(F) = e * F * D(f), which agrees
    with exp(e log f) and needs no intermediate logarithm.
    """
    if f.constant_term() != 1:
        raise BadConstantTerm("pow needs constant term 1")
    e = ring.to_ring(e)
    cap = f.cap
    if is_zero(e):
        return GradedSeries.one(cap)
    if e == 1:
        return f
    nonconst = [(x, c) for x, c in f.items() if x != (0, 0)]
    out: Dict[Exp, object] = {(0, 0): Fraction(1)}
    # |a| F_a = sum_{b != 0} (e |b| - |a - b|) f_b F_{a-b}
    for a in cap.exponents[1:]:
        n = _deg(a)
        acc = 0
        for (b, s), c in _below(a, nonconst):
            h = out.get((a[0] - b, a[1] - s))
            if h is not None:
                m = b + s
                acc = acc + c * h * (e * m - (n - m))
        if not is_zero(acc):
            v = constant_value(acc * Fraction(1, n))
            if not is_zero(v):
                out[a] = v
    return GradedSeries._raw(cap, out)


def formal_partial(f: GradedSeries, var: str) -> GradedSeries:
    if var not in ("x", "y"):
        raise ValueError("var must be 'x' or 'y'")
    out = {}
    for (a, r), c in f.items():
        if var == "x" and a:
            out[(a - 1, r)] = c * a
        elif var == "y" and r:
            out[(a, r - 1)] = c * r
    return GradedSeries._raw(f.cap, out)


def coeff(f: GradedSeries, a: int, r: int):
    return f.coeff(a, r)


def series_arith(lhs: GradedSeries, op: str, rhs: GradedSeries) -> GradedSeries:
    if op == "add":
        return lhs + rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown op {op!r}")


def macmahon(sign: str, power, cap: Cap) -> GradedSeries:
    """M(+-x)**power = prod_{n <= a_max} (1 - (+-x)^n)^(-n*power), truncated."""
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    power = ring.to_ring(power)
    result = GradedSeries.one(cap)
    if is_zero(power):
        return result
    for n in range(1, cap.max_a + 1):
        if not cap.contains(n, 0):
            break
        lead = -1 if (sign == "plus" or n % 2 == 0) else 1
        factor = GradedSeries(cap, {(0, 0): 1, (n, 0): lead})
        result = result * series_pow(factor, -power * n)
    return result


def euler_product(exponents: Mapping[int, object], cap: Cap) -> GradedSeries:
    """prod_n (1 - x^n)^(-c_n) in x, by direct series multiplication."""
    result = GradedSeries.one(cap)
    for n, c in sorted(exponents.items()):
        if not cap.contains(n, 0) or is_zero(ring.to_ring(c)):
            continue
        result = result * series_pow(GradedSeries(cap, {(0, 0): 1, (n, 0): -1}), -ring.to_ring(c))
    return result


def x_coefficients(f: GradedSeries, n: int) -> List[object]:
    """[f]_{x^0}, ..., [f]_{x^n} (pure x part)."""
    return [f.coeff(a, 0) for a in range(n + 1)]
