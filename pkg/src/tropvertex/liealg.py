"""The Gamma_+-graded Lie algebra with twisted bracket and BCH products.

Basis elements e_(a,r) bracket as
    [e_xi, e_eta] = (-1)^<xi,eta> <xi,eta> e_(xi+eta),   <(a,r),(a',r')> = a r' - r a'.
Elements live inside a cap and, optionally, in the quotient by classes with
r > R.  The Lie path to the invariants works only with these elements and
never builds automorphisms.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import ring
from .combinat import pair_sum
from .ring import is_zero
from .series import Cap, CapMismatch
from .vertex import sort_rays, primitive

Cls = Tuple[int, int]


class NotNilpotent(ValueError):
    pass


MAX_BCH_ORDER = 8


def pairing(xi: Cls, eta: Cls) -> int:
    return xi[0] * eta[1] - xi[1] * eta[0]


class LieElement:
    __slots__ = ("cap", "r_quotient", "_terms")

    def __init__(self, cap: Cap, terms: Mapping[Cls, object] | None = None, r_quotient: Optional[int] = None):
        if r_quotient is not None and r_quotient < 1:
            raise ValueError("quotient level must be positive")
        self.cap = cap
        self.r_quotient = r_quotient
        clean = {}
        for (a, r), c in (terms or {}).items():
            if (a, r) == (0, 0):
                raise ValueError("e_(0,0) is not in the positive cone")
            if not self.keeps(a, r):
                continue
            c = ring.to_ring(c)
            if not is_zero(c):
                clean[(a, r)] = c
        self._terms = clean

    def keeps(self, a: int, r: int) -> bool:
        return self.cap.contains(a, r) and (self.r_quotient is None or r <= self.r_quotient)

    @classmethod
    def _raw(cls, cap, terms, r_quotient):
        e = cls.__new__(cls)
        e.cap, e._terms, e.r_quotient = cap, terms, r_quotient
        return e

    @classmethod
    def zero(cls, cap: Cap, r_quotient: Optional[int] = None) -> "LieElement":
        return cls._raw(cap, {}, r_quotient)

    @classmethod
    def basis(cls, a: int, r: int, cap: Cap, r_quotient: Optional[int] = None, c=1) -> "LieElement":
        return cls(cap, {(a, r): c}, r_quotient)

    def coeff(self, a: int, r: int):
        return self._terms.get((a, r), Fraction(0))

    def __getitem__(self, cls_: Cls):
        return self.coeff(*cls_)

    def items(self):
        return self._terms.items()

    def support(self) -> List[Cls]:
        return sorted(self._terms, key=lambda e: (e[1], e[0]))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "LieElement"):
        if self.cap != other.cap or self.r_quotient != other.r_quotient:
            raise CapMismatch(f"{self.cap}/{self.r_quotient} vs {other.cap}/{other.r_quotient}")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return LieElement._raw(self.cap, out, self.r_quotient)

    def __neg__(self):
        return LieElement._raw(self.cap, {e: -c for e, c in self._terms.items()}, self.r_quotient)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LieElement":
        c = ring.to_ring(c)
        if is_zero(c):
            return LieElement.zero(self.cap, self.r_quotient)
        out = {}
        for e, v in self._terms.items():
            w = v * c
            if not is_zero(w):
                out[e] = w
        return LieElement._raw(self.cap, out, self.r_quotient)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def map_coeffs(self, fn) -> "LieElement":
        return LieElement(self.cap, {e: fn(c) for e, c in self._terms.items()}, self.r_quotient)

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.cap == other.cap and self.r_quotient == other.r_quotient and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({ring.ring_str(self._terms[e])})e{e}" for e in self.support()) or "0"
        return f"LieElement[{self.cap}, R={self.r_quotient}]({body})"


def bracket(u: LieElement, v: LieElement) -> LieElement:
    u._check(v)
    out: Dict[Cls, object] = {}
    keeps = u.keeps
    for xi, c1 in u._terms.items():
        for eta, c2 in v._terms.items():
            k = pairing(xi, eta)
            if k == 0:
                continue
            tgt = (xi[0] + eta[0], xi[1] + eta[1])
            if not keeps(*tgt):
                continue
            w = c1 * c2 * (-k if k % 2 else k)
            prev = out.get(tgt)
            out[tgt] = w if prev is None else prev + w
    return LieElement._raw(u.cap, {e: c for e, c in out.items() if not is_zero(c)}, u.r_quotient)


def ad_power(a: LieElement, b: LieElement, k: int) -> LieElement:
    """ad_a^k (b) by iterated brackets."""
    for _ in range(k):
        b = bracket(a, b)
    return b


# -- the boundary operators ---------------------------------------------------


def operator_A(chi, cap: Cap, r_quotient: Optional[int] = None) -> LieElement:
    """chi * sum_{n, i} e_(i n, 0) / i^2."""
    chi = ring.to_ring(chi)
    terms = {}
    for a in range(1, cap.max_a + 1):
        if cap.contains(a, 0):
            s = sum((Fraction(1, i * i) for i in range(1, a + 1) if a % i == 0), Fraction(0))
            terms[(a, 0)] = chi * s
    return LieElement(cap, terms, r_quotient)


def operator_B(cap: Cap, r_quotient: Optional[int] = None) -> LieElement:
    """-sum_j e_(0, j) / j^2."""
    return LieElement(
        cap,
        {(0, j): Fraction(-1, j * j) for j in range(1, cap.max_r + 1) if cap.contains(0, j)},
        r_quotient,
    )


def _j_power(j: int, e: int) -> Fraction:
    return Fraction(j) ** e


def ad_power_closed(k: int, chi, cap: Cap, r_quotient: Optional[int] = None) -> LieElement:
    """Closed form of Ad^k_A(B):
    -chi^k sum_{a, j} (-1)^{j a} j^{k-2} S_k(a) e_(a, j), with S_k(a) the
    sum of prod n / prod i over pairs of length k with n.i = a."""
    if k < 1:
        raise ValueError("k must be positive")
    chi_k = ring.to_ring(chi) ** k
    terms = {}
    for (a, j) in cap.exponents:
        if a < k or j < 1:
            continue
        s = pair_sum(a, k)
        if s == 0:
            continue
        sign = -1 if (j * a) % 2 else 1
        terms[(a, j)] = -chi_k * (sign * _j_power(j, k - 2) * s)
    return LieElement(cap, terms, r_quotient)


def log_lhs_closed(chi, cap: Cap, r_quotient: Optional[int] = None) -> LieElement:
    """log(exp(A) exp(B) exp(-A)) in closed form, truncated to the cap."""
    out = operator_B(cap, r_quotient)
    for k in range(1, cap.max_a + 1):
        out = out + ad_power_closed(k, chi, cap, r_quotient).scale(Fraction(1, factorial(k)))
    return out


def bch_conjugate(A: LieElement, B: LieElement, k_max: Optional[int] = None) -> LieElement:
    """B + sum_k Ad^k_A(B) / k!, stopping once the iterated bracket vanishes."""
    total = B
    term = B
    k = 0
    while True:
        k += 1
        if k_max is not None and k > k_max:
            break
        term = bracket(A, term)
        if term.is_zero():
            break
        total = total + term.scale(Fraction(1, factorial(k)))
    return total


# -- BCH ---------------------------------------------------------------------


def _bch_order(u: LieElement, v: LieElement) -> int:
    supp = list(u._terms) + list(v._terms)
    if not supp:
        return 1
    if u.r_quotient is not None and min(r for _, r in supp) >= 1:
        return u.r_quotient
    low = min(a + r for a, r in supp)
    n = u.cap.max_degree // low
    if n > MAX_BCH_ORDER:
        raise NotNilpotent(f"BCH would need words of length {n}")
    return max(n, 1)


def _nested(letters: Sequence[LieElement]) -> LieElement:
    acc = letters[-1]
    for x in reversed(letters[:-1]):
        if acc.is_zero():
            break
        acc = bracket(x, acc)
    return acc


def bch_multiply(u: LieElement, v: LieElement, order: Optional[int] = None) -> LieElement:
    """log(exp(u) exp(v)) by Dynkin's formula, truncated at words of length ``order``."""
    u._check(v)
    if u.is_zero():
        return v
    if v.is_zero():
        return u
    first = bracket(u, v)
    if first.is_zero():
        return u + v
    n_max = order if order is not None else _bch_order(u, v)
    total = u + v
    if n_max >= 2:
        total = total + first.scale(Fraction(1, 2))
    # sum over n blocks (r_i, s_i) with r_i + s_i >= 1 and total length L in 3..n_max
    cache: Dict[Tuple[str, ...], LieElement] = {}
    letter = {"X": u, "Y": v}
    for length in range(3, n_max + 1):
        for n in range(1, length + 1):
            coeff_n = Fraction((-1) ** (n - 1), n * length)
            for blocks in _blocks(n, length):
                word = "".join("X" * r + "Y" * s for r, s in blocks)
                if len(word) >= 2 and word[-1] == word[-2]:
                    continue
                denom = 1
                for r, s in blocks:
                    denom *= factorial(r) * factorial(s)
                val = cache.get(word)
                if val is None:
                    val = _nested([letter[c] for c in word])
                    cache[word] = val
                if not val.is_zero():
                    total = total + val.scale(coeff_n / denom)
    return total


def _blocks(n: int, length: int):
    """Sequences of n pairs (r, s), r + s >= 1, summing to ``length``."""
    for sizes in _compositions_exact(length, n):
        for splits in itertools.product(*[range(sz + 1) for sz in sizes]):
            yield tuple((r, sz - r) for r, sz in zip(splits, sizes))


def _compositions_exact(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions_exact(total - first, parts - 1):
            yield (first,) + rest


def bch_product(elements: Iterable[LieElement]) -> LieElement:
    """log(exp(z1) exp(z2) ... ) folded left to right."""
    it = iter(elements)
    acc = next(it)
    for z in it:
        acc = bch_multiply(acc, z)
    return acc


# -- second computation path for Omega --------------------------------------


def ray_log(cls_: Cls, omega, cap: Cap, r_quotient: int) -> LieElement:
    """log of T^omega on class (a, r): -omega sum_n e_(n a, n r) / n^2."""
    a, r = cls_
    terms = {}
    n = 1
    while cap.contains(n * a, n * r) and n * r <= r_quotient:
        terms[(n * a, n * r)] = -ring.to_ring(omega) * Fraction(1, n * n)
        n += 1
    return LieElement(cap, terms, r_quotient)


def rhs_log(omegas: Mapping[Cls, object], cap: Cap, r_quotient: int, order: str = "desc") -> LieElement:
    """log of the slope-ordered product of T^Omega over mixed and (0, r) classes."""
    by_ray: Dict[Cls, List[Cls]] = {}
    for cls_, w in omegas.items():
        if cls_[1] < 1 or is_zero(ring.to_ring(w)):
            continue
        by_ray.setdefault(primitive(*cls_)[0], []).append(cls_)
    factors = []
    for ray in sort_rays(by_ray, order):
        z = LieElement.zero(cap, r_quotient)
        for cls_ in by_ray[ray]:
            z = z + ray_log(cls_, omegas[cls_], cap, r_quotient)
        factors.append(z)
    if not factors:
        return LieElement.zero(cap, r_quotient)
    return bch_product(factors)


def solve_omega_liepath(chi, R: int, a_max: int, order: str = "desc") -> Dict[Cls, object]:
    """Omega(a, r) for r <= R by matching log(lhs) with the ordered BCH product,
    one level r at a time (the unknowns at level r enter linearly)."""
    if not 1 <= R <= 3:
        raise ValueError("the Lie path is limited to R <= 3")
    cap = Cap.box(a_max, R)
    lhs = log_lhs_closed(chi, cap, R)
    omegas: Dict[Cls, object] = {}
    for r in range(1, R + 1):
        z0 = rhs_log(omegas, cap, R, order)
        for a in range(0, a_max + 1):
            w = ring.constant_value(z0.coeff(a, r) - lhs.coeff(a, r))
            if not is_zero(w):
                omegas[(a, r)] = w
            else:
                omegas[(a, r)] = Fraction(0)
    return {k: v for k, v in omegas.items()}
