"""Exact coefficient arithmetic.

Two kinds of ring values are used everywhere in the package:

* ``fractions.Fraction`` (plain ``int`` is accepted on input) for numeric
  coefficients, and
* :class:`MultiPoly`, a sparse polynomial over Q in the named variables
  ``chi``, ``u``, ``t`` and ``s_<j>_<k>``.

The module-level helpers (:func:`is_zero`, :func:`inverse`, :func:`substitute`,
...) are the coefficient-ring contract; callers never need to know which of
the two representations they are holding.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

__all__ = [
    "Fraction",
    "MultiPoly",
    "NotInvertible",
    "var",
    "chi",
    "to_ring",
    "is_zero",
    "is_one",
    "is_constant",
    "is_invertible",
    "inverse",
    "constant_value",
    "substitute",
    "ring_to_json",
    "ring_from_json",
    "rational_to_str",
    "rational_from_str",
    "ring_str",
]

_KINDS = {"chi": 0, "u": 1, "t": 2}
_S_RE = re.compile(r"^s_([1-9][0-9]*)_([1-9][0-9]*)$")

VarKey = Tuple[int, int, int]
Monomial = Tuple[Tuple[VarKey, int], ...]


class NotInvertible(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def var_key(name: str) -> VarKey:
    """Sort key of a variable name: (kind, j, k)."""
    if name in _KINDS:
        return (_KINDS[name], 0, 0)
    m = _S_RE.match(name)
    if m is None:
        raise ValueError(f"unknown variable name {name!r}")
    return (3, int(m.group(1)), int(m.group(2)))


@lru_cache(maxsize=None)
def var_name(key: VarKey) -> str:
    kind, j, k = key
    if kind == 3:
        return f"s_{j}_{k}"
    return ("chi", "u", "t")[kind]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = dict(m1)
    for k, e in m2:
        out[k] = out.get(k, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class MultiPoly:
    """Sparse polynomial with Fraction coefficients.

    Terms are stored as ``{monomial: coeff}`` where a monomial is a sorted
    tuple of ``(var_key, exponent)`` pairs.  Instances are treated as
    immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "MultiPoly":
        c = Fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def variable(cls, name: str, exp: int = 1) -> "MultiPoly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return cls.constant(1)
        return cls._raw({((var_key(name), exp),): Fraction(1)})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Fraction, Mapping[str, int]]]) -> "MultiPoly":
        """Build from ``(coeff, {name: exp})`` pairs; repeated monomials add up."""
        acc: Dict[Monomial, Fraction] = {}
        for c, exps in terms:
            mono = tuple(sorted((var_key(n), e) for n, e in exps.items() if e))
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(c)
        return cls(acc)

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> set:
        return {var_name(k) for m in self._terms for k, _ in m}

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(_mono_degree(m) for m in self._terms)
        key = var_key(name)
        return max(dict(m).get(key, 0) for m in self._terms)

    def coeff_of(self, exps: Mapping[str, int]) -> Fraction:
        mono = tuple(sorted((var_key(n), e) for n, e in exps.items() if e))
        return self._terms.get(mono, Fraction(0))

    def sorted_terms(self):
        """Terms in graded-lex order on the fixed variable order."""
        return sorted(self._terms.items(), key=lambda kv: (_mono_degree(kv[0]), kv[0]))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, MultiPoly):
            if len(other._terms) > len(self._terms):
                big, small = other._terms, self._terms
            else:
                big, small = self._terms, other._terms
            out = dict(big)
            for m, c in small.items():
                v = out.get(m)
                if v is None:
                    out[m] = c
                else:
                    v = v + c
                    if v:
                        out[m] = v
                    else:
                        del out[m]
            return MultiPoly._raw(out)
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            out = dict(self._terms)
            v = out.get((), 0) + other
            if v:
                out[()] = Fraction(v)
            else:
                out.pop((), None)
            return MultiPoly._raw(out)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (MultiPoly, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            a, b = self._terms, other._terms
            if not a or not b:
                return MultiPoly._raw({})
            if len(b) == 1 and () in b:
                return self * b[()]
            if len(a) == 1 and () in a:
                return other * a[()]
            out: Dict[Monomial, Fraction] = {}
            for m1, c1 in a.items():
                for m2, c2 in b.items():
                    m = _mono_mul(m1, m2)
                    v = out.get(m)
                    out[m] = c1 * c2 if v is None else v + c1 * c2
            return MultiPoly._raw({m: c for m, c in out.items() if c})
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw({})
            if other == 1:
                return self
            return MultiPoly._raw({m: c * other for m, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            inv = 1 / Fraction(other)
            return self * inv
        if isinstance(other, MultiPoly) and other.is_constant() and not other.is_zero():
            return self * (1 / other.constant_term())
        raise NotInvertible("polynomial division is not supported")

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise NotInvertible("only nonnegative integer powers of polynomials")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return len(self._terms) == 1 and self._terms.get(()) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- substitution -------------------------------------------------
    def substitute(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Replace the bound variables by ring values (partial bindings allowed)."""
        keyed = {var_key(n): v for n, v in bindings.items()}
        out = MultiPoly._raw({})
        powers: Dict[Tuple[VarKey, int], object] = {}
        for mono, c in self._terms.items():
            term = MultiPoly._raw({})
            rest = []
            val: object = c
            for k, e in mono:
                if k in keyed:
                    pk = powers.get((k, e))
                    if pk is None:
                        pk = _ring_pow(keyed[k], e)
                        powers[(k, e)] = pk
                    val = val * pk
                else:
                    rest.append((k, e))
            term = MultiPoly._raw({tuple(rest): Fraction(1)}) * val
            out = out + term
        return out

    def evaluate(self, bindings: Mapping[str, object]):
        return constant_value(self.substitute(bindings))

    # -- display ------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            vs = "*".join(
                var_name(k) if e == 1 else f"{var_name(k)}^{e}" for k, e in mono
            )
            if not vs:
                parts.append(str(c))
            elif c == 1:
                parts.append(vs)
            elif c == -1:
                parts.append("-" + vs)
            else:
                parts.append(f"{c}*{vs}")
        return " + ".join(parts).replace("+ -", "- ")


def _ring_pow(v, e: int):
    if isinstance(v, MultiPoly):
        return v ** e
    return Fraction(v) ** e


def var(name: str) -> MultiPoly:
    return MultiPoly.variable(name)


def chi() -> MultiPoly:
    """The symbolic Euler characteristic."""
    return MultiPoly.variable("chi")


# -- coefficient-ring contract ------------------------------------------

RingValue = Union[Fraction, MultiPoly]


def to_ring(v) -> RingValue:
    if isinstance(v, MultiPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        return rational_from_str(v)
    raise TypeError(f"not a ring value: {v!r}")


def is_zero(v) -> bool:
    return not v


def is_one(v) -> bool:
    return v == 1


def is_constant(v) -> bool:
    return not isinstance(v, MultiPoly) or v.is_constant()


def constant_value(v):
    """Return a Fraction when ``v`` is constant; otherwise ``v`` unchanged."""
    if isinstance(v, MultiPoly):
        return v.constant_term() if v.is_constant() else v
    return Fraction(v)


def is_invertible(v) -> bool:
    return is_constant(v) and not is_zero(v)


def inverse(v) -> Fraction:
    if not is_invertible(v):
        raise NotInvertible(f"{v} is not an invertible constant")
    return 1 / Fraction(constant_value(v))


def substitute(v, bindings: Mapping[str, object]):
    if isinstance(v, MultiPoly):
        return constant_value(v.substitute(bindings))
    return v


# -- serialization -------------------------------------------------------


def rational_to_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    s = s.strip()
    if not re.fullmatch(r"-?\d+(/\d+)?", s):
        raise ValueError(f"not a rational literal: {s!r}")
    return Fraction(s)


def ring_to_json(v):
    """Rationals become ``"p/q"``; polynomials a sorted list of term objects."""
    v = constant_value(v)
    if isinstance(v, MultiPoly):
        return [
            {"coeff": rational_to_str(c), "vars": {var_name(k): e for k, e in mono}}
            for mono, c in v.sorted_terms()
        ]
    return rational_to_str(v)


def ring_from_json(obj) -> RingValue:
    if isinstance(obj, str):
        return rational_from_str(obj)
    return constant_value(
        MultiPoly.from_terms((rational_from_str(t["coeff"]), t["vars"]) for t in obj)
    )


def ring_str(v) -> str:
    v = constant_value(v)
    if isinstance(v, MultiPoly):
        return str(v)
    return rational_to_str(v)
