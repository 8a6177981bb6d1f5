"""The tropical vertex group.

A generator ``theta_{(a,r),f}`` acts on x, y by ``x -> f^-r x``,
``y -> f^a y``, where ``f`` is a series in the single monomial ``x^a y^r``.
Group elements are words of generators; the word ``[g1, g2, ..., gn]`` is the
product ``g1 g2 ... gn`` of ring automorphisms, i.e. it acts on a series
``s`` as ``g1(g2(...gn(s)))``.

Internally an element is evaluated through its *ratio images*
``(U, V)`` with ``X = x U`` and ``Y = y V``.  Both ratios are ordinary
series inside the cap, so nothing is lost at the cap boundary when the
factorization algorithm reads off ``Y / y - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import ring
from .ring import is_zero
from .series import (
    Cap,
    CapMismatch,
    GradedSeries,
    OutOfCap,
    formal_partial,
    series_invert,
    series_pow,
)

Ray = Tuple[int, int]


class NotInGroup(ValueError):
    pass


def primitive(a: int, r: int) -> Tuple[Ray, int]:
    """Split (a, r) into its primitive direction and multiplicity."""
    if a < 0 or r < 0 or (a, r) == (0, 0):
        raise ValueError(f"({a},{r}) is not a nonzero class in the positive cone")
    g = math.gcd(a, r)
    return (a // g, r // g), g


def is_primitive(a: int, r: int) -> bool:
    return (a, r) != (0, 0) and math.gcd(a, r) == 1


def quadratic_sign(a: int, r: int) -> int:
    """(-1)^(a r)."""
    return -1 if (a * r) % 2 else 1


class VertexGenerator:
    """theta_{ray, f} with ``ray`` primitive and ``f = 1 + (terms on the ray)``."""

    __slots__ = ("ray", "f", "_powers")

    def __init__(self, ray: Ray, f: GradedSeries):
        a, r = ray
        if not is_primitive(a, r):
            raise ValueError(f"generator ray {ray} must be primitive")
        if f.constant_term() != 1:
            raise ValueError("ray function must have constant term 1")
        for (p, q) in f.support():
            if (p, q) == (0, 0):
                continue
            if p * r != q * a:
                raise ValueError(f"term x^{p} y^{q} is not on ray {ray}")
        self.ray = (a, r)
        self.f = f
        self._powers: Dict[int, GradedSeries] = {0: GradedSeries.one(f.cap), 1: f}

    @property
    def cap(self) -> Cap:
        return self.f.cap

    def power(self, k: int) -> GradedSeries:
        p = self._powers.get(k)
        if p is None:
            if k == -1:
                p = series_invert(self.f)
            else:
                p = series_pow(self.f, k)
            self._powers[k] = p
        return p

    def inverse(self) -> "VertexGenerator":
        return VertexGenerator(self.ray, self.power(-1))

    def is_identity(self) -> bool:
        return len(self.f) == 1

    def act(self, s: GradedSeries) -> GradedSeries:
        """Image of ``s`` under this automorphism."""
        if s.cap != self.cap:
            raise CapMismatch(f"{s.cap} vs {self.cap}")
        if self.is_identity():
            return s
        a, r = self.ray
        groups: Dict[int, Dict[Tuple[int, int], object]] = {}
        for (p, q), c in s.items():
            groups.setdefault(a * q - r * p, {})[(p, q)] = c
        out = GradedSeries.zero(self.cap)
        for k, part in groups.items():
            piece = GradedSeries._raw(self.cap, part)
            out = out + (piece if k == 0 else piece * self.power(k))
        return out

    def ratios(self) -> Tuple[GradedSeries, GradedSeries]:
        a, r = self.ray
        return self.power(-r), self.power(a)

    def __eq__(self, other):
        return isinstance(other, VertexGenerator) and self.ray == other.ray and self.f == other.f

    __hash__ = None

    def __repr__(self):
        return f"theta{self.ray}[{self.f}]"


VertexWord = List[VertexGenerator]


def generator(ray: Ray, f: GradedSeries) -> VertexGenerator:
    """theta_{ray, f} for any nonzero ray; a non-primitive ray k*(a0, r0)
    becomes theta_{(a0, r0), f^k}, which acts identically."""
    prim, k = primitive(*ray)
    return VertexGenerator(prim, f if k == 1 else series_pow(f, k))


def make_T(ray: Ray, exponent, cap: Cap) -> VertexGenerator:
    """T^exponent_{a,r} = theta_{(a,r), (1 - (-1)^{ar} x^a y^r)^exponent}."""
    a, r = ray
    if not cap.contains(a, r):
        raise OutOfCap(f"ray {ray} outside {cap}")
    base = GradedSeries(cap, {(0, 0): 1, (a, r): -quadratic_sign(a, r)})
    return generator(ray, series_pow(base, exponent))


def word_inverse(w: Sequence[VertexGenerator]) -> VertexWord:
    return [g.inverse() for g in reversed(w)]


def _common_cap(words: Iterable[Sequence[VertexGenerator]]) -> Cap | None:
    cap = None
    for w in words:
        for g in w:
            if cap is None:
                cap = g.cap
            elif g.cap != cap:
                raise CapMismatch(f"{g.cap} vs {cap}")
    return cap


def apply(w: Sequence[VertexGenerator], s: GradedSeries) -> GradedSeries:
    """Action of the product ``w[0] w[1] ... w[-1]`` on the series ``s``."""
    for g in reversed(w):
        s = g.act(s)
    return s


def images(w: Sequence[VertexGenerator], cap: Cap) -> Tuple[GradedSeries, GradedSeries]:
    """Ratio images (X/x, Y/y) of the element ``w``."""
    u = GradedSeries.one(cap)
    v = GradedSeries.one(cap)
    for g in reversed(w):
        if g.cap != cap:
            raise CapMismatch(f"{g.cap} vs {cap}")
        if g.is_identity():
            continue
        gu, gv = g.ratios()
        u = gu * g.act(u)
        v = gv * g.act(v)
    return u, v


def acts_equal(w1: Sequence[VertexGenerator], w2: Sequence[VertexGenerator], cap: Cap) -> bool:
    return images(w1, cap) == images(w2, cap)


def commutator(u: Sequence[VertexGenerator], v: Sequence[VertexGenerator]) -> VertexWord:
    """v^-1 u^-1 v u."""
    _common_cap([u, v])
    return word_inverse(v) + word_inverse(u) + list(v) + list(u)


# -- slope orders -------------------------------------------------------------


def slope_key(ray: Ray):
    a, r = ray
    return (1, Fraction(0)) if a == 0 else (0, Fraction(r, a))


def sort_rays(rays: Iterable[Ray], order: str = "desc") -> List[Ray]:
    """``desc``: decreasing slope r/a, so (0,1) comes first and (1,0) last."""
    if order not in ("desc", "asc"):
        raise ValueError(f"unknown slope order {order!r}")
    return sorted(rays, key=slope_key, reverse=(order == "desc"))


def rays_in_cap(cap: Cap) -> List[Ray]:
    return [e for e in cap.exponents if e != (0, 0) and is_primitive(*e)]


@dataclass
class Factorization:
    """Ray functions of an ordered product expansion."""

    cap: Cap
    order: str
    rays: Dict[Ray, GradedSeries] = field(default_factory=dict)

    def ordered_rays(self) -> List[Ray]:
        return sort_rays(self.rays, self.order)

    def nontrivial(self) -> Dict[Ray, GradedSeries]:
        return {ray: f for ray, f in self.rays.items() if len(f) > 1}

    def word(self) -> VertexWord:
        return [VertexGenerator(ray, self.rays[ray]) for ray in self.ordered_rays() if len(self.rays[ray]) > 1]

    def ray_function(self, ray: Ray) -> GradedSeries:
        return self.rays.get(ray, GradedSeries.one(self.cap))

    def __eq__(self, other):
        if not isinstance(other, Factorization):
            return NotImplemented
        return (
            self.cap == other.cap
            and self.order == other.order
            and self.nontrivial() == other.nontrivial()
        )

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "cap": self.cap.to_json(),
            "rays": [
                {"a": a, "r": r, "f_terms": self.rays[(a, r)].to_json()["terms"]}
                for (a, r) in self.ordered_rays()
                if len(self.rays[(a, r)]) > 1
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Factorization":
        cap = Cap.from_json(obj["cap"])
        rays = {}
        for item in obj["rays"]:
            rays[(item["a"], item["r"])] = GradedSeries.from_json({"cap": obj["cap"], "terms": item["f_terms"]})
        return cls(cap, obj["order"], rays)


def recompose(fact: Factorization) -> VertexWord:
    return fact.word()


def factorize(w: Sequence[VertexGenerator], cap: Cap, order: str = "desc") -> Factorization:
    """Unique ordered product expansion of ``w`` along primitive rays.

    Works degree by degree.  With P the product of the ray functions found so
    far, the lowest-degree part of images(w) - images(P) is the ratio image
    of a product of commuting elementary factors, one per monomial.  A
    monomial of direction (a, r) contributes ``a c`` to Y/y and ``-r c`` to
    X/x, where ``c`` is the new ray-function coefficient.
    """
    w = list(w)
    if _common_cap([w]) not in (None, cap):
        raise CapMismatch("word and factorization caps differ")
    target_u, target_v = images(w, cap)
    rays: Dict[Ray, Dict[Tuple[int, int], object]] = {}
    by_degree: Dict[int, List[Tuple[int, int]]] = {}
    for e in cap.exponents[1:]:
        by_degree.setdefault(e[0] + e[1], []).append(e)

    for k in sorted(by_degree):
        word = [
            VertexGenerator(ray, GradedSeries(cap, terms))
            for ray, terms in ((r, rays[r]) for r in sort_rays(rays, order))
        ]
        pu, pv = images(word, cap)
        du = target_u - pu
        dv = target_v - pv
        low = min(
            (e[0] + e[1] for e in list(du.support()) + list(dv.support())),
            default=None,
        )
        if low is not None and low < k:
            raise NotInGroup(f"discrepancy survives at degree {low} < {k}")
        for (p, q) in by_degree[k]:
            cu = du._terms.get((p, q), 0)
            cv = dv._terms.get((p, q), 0)
            if is_zero(cu) and is_zero(cv):
                continue
            (a, r), _ = primitive(p, q)
            if a > 0:
                c = ring.constant_value(cv * Fraction(1, a))
            else:
                c = ring.constant_value(-cu)
            if not is_zero(ring.constant_value(cu + c * r)) or not is_zero(ring.constant_value(cv - c * a)):
                raise NotInGroup(f"images at x^{p} y^{q} are not those of a ray automorphism")
            terms = rays.setdefault((a, r), {(0, 0): Fraction(1)})
            terms[(p, q)] = c
    fact = Factorization(
        cap,
        order,
        {ray: GradedSeries(cap, terms) for ray, terms in rays.items()},
    )
    return fact


# -- ray functions and BPS exponents -----------------------------------------


def ray_function_to_BPS(ray: Ray, f_ray: GradedSeries) -> List[Tuple[int, object]]:
    """Exponents Omega(m a, m r) with  f = prod_m (1 - (-1)^{m^2 a r} z^m)^{m Omega(m a, m r)}.

    ``z = x^a y^r``.  The factor m in the exponent is what the generator
    T^Omega_{m a, m r} contributes once it is rewritten on its primitive ray.
    """
    a, r = ray
    if not is_primitive(a, r):
        raise ValueError(f"{ray} is not primitive")
    cap = f_ray.cap
    out = []
    residual = f_ray
    m = 1
    while cap.contains(m * a, m * r):
        c = residual.coeff(m * a, m * r)
        sign = quadratic_sign(m * a, m * r)
        # (1 - sign z^m)^(m w) = 1 - m w sign z^m + ...
        omega = ring.constant_value(-c * sign * Fraction(1, m))
        out.append((m, omega))
        if not is_zero(omega):
            factor = GradedSeries(cap, {(0, 0): 1, (m * a, m * r): -sign})
            residual = residual * series_pow(factor, -omega * m)
        m += 1
    return out


def BPS_to_ray_function(ray: Ray, omegas: Mapping[int, object], cap: Cap) -> GradedSeries:
    a, r = ray
    f = GradedSeries.one(cap)
    for m, w in sorted(omegas.items()):
        if is_zero(ring.to_ring(w)) or not cap.contains(m * a, m * r):
            continue
        sign = quadratic_sign(m * a, m * r)
        f = f * series_pow(GradedSeries(cap, {(0, 0): 1, (m * a, m * r): -sign}), ring.to_ring(w) * m)
    return f


# -- checks ---------------------------------------------------------------------


def symplectic_defect(g: VertexGenerator) -> GradedSeries:
    """(dX/dx dY/dy - dX/dy dY/dx) x y - X Y; zero iff dx/x ^ dy/y is preserved."""
    cap = g.cap
    big_x = g.act(GradedSeries.x(cap))
    big_y = g.act(GradedSeries.y(cap))
    jac = formal_partial(big_x, "x") * formal_partial(big_y, "y") - formal_partial(
        big_x, "y"
    ) * formal_partial(big_y, "x")
    return jac.shift(1, 1) - big_x * big_y
