"""Joyce-Song wall-crossing for D0-D6 classes of rank 1 and 2.

A decomposition of (a, r) is an ordered partition p of a together with the
places of the copies of gamma.  Each decomposition contributes

    (-1)^{n-1} / 2^{n-1} * U * (sum over trees) * prod DT^-(alpha_k).

The tree weight is prod over edges of <alpha_k, alpha_l>, with the sign
(-1)^{sum_{i<j} <alpha_i, alpha_j>} taken once per decomposition.  Rank 1
and 2 use case-by-case U formulas and closed tree sums; a general engine
(see-saw S, U by block compositions, matrix-tree sums) covers any rank.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, List, Sequence, Tuple

from . import ring
from .combinat import compositions, divisor_square_sum
from .liealg import pairing

Cls = Tuple[int, int]


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


# -- rank 1 -------------------------------------------------------------------


def s_symbol_r1(p: Sequence[int], i: int) -> int:
    n = len(p) + 1
    if not 1 <= i <= n:
        raise ValueError(f"place {i} out of range 1..{n}")
    if i == 1:
        return _sgn(n - 1)
    if i == 2:
        return _sgn(n - 2)
    return 0


@lru_cache(maxsize=None)
def contraction_sum(s: int) -> Fraction:
    """sum over ordered q of s of (-1)^len(q) / prod q_l!, by enumeration."""
    if s == 0:
        return Fraction(1)
    total = Fraction(0)
    for q in compositions(s):
        den = 1
        for x in q:
            den *= factorial(x)
        total += Fraction(_sgn(len(q)), den)
    return total


def helper_identity(s: int) -> Tuple[Fraction, Fraction]:
    """(enumerated sum, (-1)^s / s!)."""
    if s < 1:
        raise ValueError("s must be positive")
    return contraction_sum(s), Fraction(_sgn(s), factorial(s))


def u_symbol_r1(p: Sequence[int], i: int, method: str = "closed") -> Fraction:
    n = len(p) + 1
    if not 1 <= i <= n:
        raise ValueError(f"place {i} out of range 1..{n}")
    if method == "closed":
        return Fraction(_sgn(n - i), factorial(i - 1) * factorial(n - i))
    if method == "contraction":
        # head contracted to one class; tail contracted by q, with S of the
        # contracted decomposition equal to (-1)^len(q)
        total = Fraction(0)
        tail = n - i
        qs = list(compositions(tail)) if tail else [()]
        for q in qs:
            den = 1
            for x in q:
                den *= factorial(x)
            total += Fraction(_sgn(len(q)), den)
        return total / factorial(i - 1)
    raise ValueError(f"unknown method {method!r}")


def tree_factor_r1(p: Sequence[int], i: int) -> int:
    """(-1)^a (-1)^{n+i} prod p_k: the star tree rooted at gamma."""
    n = len(p) + 1
    a = sum(p)
    prod = 1
    for x in p:
        prod *= x
    return _sgn(a + n + i) * prod


def dt_minus(p: Sequence[int], chi, gamma_weight=1):
    """prod over the mu-parts of DT^-(p_k mu) = -chi J(p_k), times DT^- of the gamma parts."""
    k = len(p)
    val = ring.to_ring(chi) ** k * _sgn(k)
    j = Fraction(1)
    for x in p:
        j *= divisor_square_sum(x)
    return ring.constant_value(val * (j * ring.to_ring(gamma_weight)))


# -- trees ------------------------------------------------------------------------
#
# Convention "pairs": a tree contributes (-1)^{sum_{k<l} <a_k,a_l>} prod_edges <a_k,a_l>,
# the sign running over every pair of vertices.  Convention "edges" puts the
# sign (-1)^<a_k,a_l> on each edge only; it agrees with "pairs" at rank 1 but
# not for two single copies of gamma.

TREE_CONVENTIONS = ("pairs", "edges")


def edge_weight(u: Cls, v: Cls) -> int:
    """(-1)^<u,v> <u,v> for an edge oriented from the earlier vertex u to v."""
    k = pairing(u, v)
    return _sgn(k) * k


def pair_sign(classes: Sequence[Cls]) -> int:
    n = len(classes)
    return _sgn(sum(pairing(classes[k], classes[l]) for k in range(n) for l in range(k + 1, n)))


def _edge_fn(convention: str):
    if convention == "pairs":
        return pairing
    if convention == "edges":
        return edge_weight
    raise ValueError(f"unknown tree convention {convention!r}")


def decomposition_classes(p: Sequence[int], gammas: Dict[int, int]) -> List[Cls]:
    """Classes alpha_1..alpha_n; ``gammas`` maps place -> multiple of gamma."""
    n = len(p) + len(gammas)
    out = []
    it = iter(p)
    for pos in range(1, n + 1):
        if pos in gammas:
            out.append((0, gammas[pos]))
        else:
            out.append((next(it), 0))
    return out


def _prufer_trees(n: int) -> Iterator[List[Tuple[int, int]]]:
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return
    for code in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in code:
            degree[x] += 1
        edges = []
        for x in code:
            leaf = min(v for v in range(n) if degree[v] == 1)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(n) if degree[v] == 1]
        edges.append((u, w))
        yield edges


def tree_sum_bruteforce(classes: Sequence[Cls], convention: str = "pairs") -> int:
    """Sum over all labelled trees on the classes, by Pruefer codes."""
    fn = _edge_fn(convention)
    total = 0
    for edges in _prufer_trees(len(classes)):
        w = 1
        for k, l in edges:
            w *= fn(classes[k], classes[l])
            if not w:
                break
        total += w
    return total * (pair_sign(classes) if convention == "pairs" else 1)


def _det(m: List[List[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return d


def tree_sum(classes: Sequence[Cls], convention: str = "pairs") -> int:
    """The same sum by the weighted matrix-tree theorem."""
    n = len(classes)
    if n == 1:
        return 1
    fn = _edge_fn(convention)
    lap = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        for l in range(k + 1, n):
            w = fn(classes[k], classes[l])
            lap[k][l] -= w
            lap[l][k] -= w
            lap[k][k] += w
            lap[l][l] += w
    d = _det([row[1:] for row in lap[1:]])
    sign = pair_sign(classes) if convention == "pairs" else 1
    return int(d) * sign


def admissible_trees_r2(n: int, i: int, j: int) -> Iterator[Dict[int, Tuple[int, ...]]]:
    """Trees with non-zero weight for gamma at places i < j.

    Every mu vertex must hang off a gamma; one special vertex l joins both.
    Yields {mu place: tuple of gamma places it is joined to}.
    """
    mus = [v for v in range(1, n + 1) if v not in (i, j)]
    for l in mus:
        others = [v for v in mus if v != l]
        for choice in itertools.product((i, j), repeat=len(others)):
            tree = {l: (i, j)}
            tree.update({v: (g,) for v, g in zip(others, choice)})
            yield tree


def tree_sum_r2_enum(p: Sequence[int], i: int, j: int, convention: str = "pairs") -> int:
    n = len(p) + 2
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    classes = decomposition_classes(p, {i: 1, j: 1})
    fn = _edge_fn(convention)
    total = 0
    for tree in admissible_trees_r2(n, i, j):
        w = 1
        for v, gs in tree.items():
            for g in gs:
                lo, hi = min(v, g), max(v, g)
                w *= fn(classes[lo - 1], classes[hi - 1])
        total += w
    return total * (pair_sign(classes) if convention == "pairs" else 1)


def tree_sum_r2_closed(p: Sequence[int], i: int, j: int, variant: str = "corrected") -> int:
    """Closed tree sum for gamma at places i < j.

    ``variant="printed"`` is the literal closed form; it carries one
    factor (-1)^a too many relative to the pair-sign convention, which the
    default ``"corrected"`` removes.
    """
    if variant not in ("corrected", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    n = len(p) + 2
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    a = sum(p)
    prod = 1
    for x in p:
        prod *= x
    pre = _sgn(n + i + 1 + (a if variant == "printed" else 0)) * prod
    if j == i + 1:
        head = sum(p[: i - 1])
        tail = sum(p[i - 1:])
        return pre * (head - tail) * 2 ** (n - 3) if n >= 3 else 0
    if j == i + 2:
        return pre * p[i - 1] * 2 ** (n - 3)
    return 0


# -- rank 2 ---------------------------------------------------------------------


def u_symbol_r2(p: Sequence[int], i: int, j: int, second_order: bool = True,
                variant: str = "corrected") -> Fraction:
    """First- and second-order U terms for gamma at places i < j.

    For j = i + 2 only n - i - 2 mu classes follow the second gamma, so the
    tail contraction runs over partitions of n - i - 2.  The corrected
    variant uses that count; the first-order term then carries
    (-1)^{n-i-1} / ((i-1)! (n-i-2)!) and the second-order term the opposite
    sign to the printed one.  ``variant="printed"`` keeps the literal
    n - i - 1 count.  Returns 0 for j >= i + 3, where every tree vanishes.
    """
    if variant not in ("corrected", "printed"):
        raise ValueError(f"unknown variant {variant!r}")
    n = len(p) + 2
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    if j not in (i + 1, i + 2):
        return Fraction(0)
    head = sum(p[: i - 1])
    tail = sum(p[i - 1:])
    even = sum(p) % 2 == 0
    if j == i + 1:
        c = Fraction(_sgn(n - i - 1), factorial(i - 1) * factorial(n - i - 1))
        u = c / 2 * (int(head >= tail) - int(head < tail))
        if second_order and even:
            u -= c / 2 * int(head == tail)
        return u
    head2 = head + p[i - 1]
    tail2 = tail - p[i - 1]
    if variant == "printed":
        c = Fraction(_sgn(n - i - 1), factorial(i - 1) * factorial(n - i - 1))
        second = c / 2 * (int(head2 == tail2) - int(head == tail))
    else:
        c = Fraction(_sgn(n - i - 1), factorial(i - 1) * factorial(n - i - 2))
        second = -c / 2 * (int(head2 == tail2) - int(head == tail))
    u = c * int(head < tail and head2 >= tail2)
    if second_order and even:
        u += second
    return u


def _weight(n: int) -> Fraction:
    return Fraction(_sgn(n - 1), 2 ** (n - 1))


def dt_js_r1(a: int, chi):
    """DT-bar(a,1) assembled from decompositions (p, i)."""
    if a < 1:
        raise ValueError("a must be positive")
    total = Fraction(0)
    for p in compositions(a):
        n = len(p) + 1
        inner = Fraction(0)
        for i in range(1, n + 1):
            inner += u_symbol_r1(p, i) * tree_factor_r1(p, i)
        if inner:
            total = total + dt_minus(p, chi) * (_weight(n) * inner)
    return ring.constant_value(total)


def dt_js_r1_rearranged(a: int, chi):
    """(-1)^a sum_n chi^{n-1}/(n-1)! sum_{p, len n-1} prod p_k J(p_k)."""
    chi = ring.to_ring(chi)
    total = Fraction(0)
    for p in compositions(a):
        w = Fraction(1)
        for x in p:
            w *= x * divisor_square_sum(x)
        total = total + chi ** len(p) * (w / factorial(len(p)))
    return ring.constant_value(total * _sgn(a))


def dt_js_r2_scaled(a: int, chi):
    """The copy of the rank-1 sum with 2 gamma in a single place."""
    total = Fraction(0)
    for p in compositions(a):
        n = len(p) + 1
        classes_gamma = {}
        inner = Fraction(0)
        for i in range(1, n + 1):
            tree = 1
            for pos, x in enumerate(p, start=1):
                # mu parts before the gamma-slot pair as <x mu, 2 gamma>, after as <2 gamma, x mu>
                tree *= edge_weight((x, 0), (0, 2)) if pos < i else edge_weight((0, 2), (x, 0))
            inner += u_symbol_r1(p, i) * tree
        if inner:
            total = total + dt_minus(p, chi, Fraction(1, 4)) * (_weight(n) * inner)
    return ring.constant_value(total)


def dt_js_r2_residual(a: int, chi, tree_method: str = "closed", second_order: bool = True,
                      variant: str = "corrected"):
    """Decompositions (p, i, j) with two single copies of gamma.

    ``variant="printed"`` assembles the literal U and tree forms (with
    per-edge signs); it does not reproduce DT-bar(a, 2).
    """
    if tree_method not in ("closed", "enum"):
        raise ValueError(f"unknown tree method {tree_method!r}")
    convention = "pairs" if variant == "corrected" else "edges"

    def tree_fn(p, i, j):
        if tree_method == "closed":
            return tree_sum_r2_closed(p, i, j, variant)
        return tree_sum_r2_enum(p, i, j, convention)

    total = Fraction(0)
    for p in compositions(a):
        n = len(p) + 2
        inner = Fraction(0)
        for i in range(1, n):
            for j in (i + 1, i + 2):
                if j > n:
                    continue
                u = u_symbol_r2(p, i, j, second_order, variant)
                if u:
                    inner += u * tree_fn(p, i, j)
        if inner:
            total = total + dt_minus(p, chi) * (_weight(n) * inner)
    return ring.constant_value(total)


def dt_js_r2(a: int, chi, method: str = "assembly", **opts):
    """DT-bar(a, 2) on the far side of the wall.

    ``method="assembly"`` adds the scaled rank-1 copy and the residual sum;
    ``method="general"`` runs the general engine over all decompositions.
    """
    if a < 1:
        raise ValueError("a must be positive")
    if method == "general":
        return dt_js_general(a, 2, chi)
    if method != "assembly":
        raise ValueError(f"unknown method {method!r}")
    return ring.constant_value(dt_js_r2_scaled(a, chi) + dt_js_r2_residual(a, chi, **opts))


# -- general engine -----------------------------------------------------------------
#
# The D0-D6 wall: before it every mu-type class (a, 0) has phase above every
# gamma-type class (0, r); after it phases follow r / (a + r).  Joyce's U
# is built from see-saw S symbols over pairs of nondecreasing surjections
# (psi, xi), with 1/|psi^-1(b)|! weights and (-1)^{l-1}/l on the outer level.


def _phase_before(c: Cls) -> Fraction:
    return Fraction(c[0], c[0] + c[1])


def _phase_after(c: Cls) -> Fraction:
    return Fraction(c[1], c[0] + c[1])


def _sum(cs: Sequence[Cls]) -> Cls:
    return (sum(c[0] for c in cs), sum(c[1] for c in cs))


def see_saw_S(classes: Sequence[Cls]) -> int:
    """Joyce's S symbol: every adjacent step must be of type (a) or (b)."""
    count_a = 0
    for k in range(len(classes) - 1):
        left = _phase_after(_sum(classes[: k + 1]))
        right = _phase_after(_sum(classes[k + 1:]))
        up = _phase_before(classes[k]) <= _phase_before(classes[k + 1])
        if up and left > right:
            count_a += 1
        elif not up and left <= right:
            continue
        else:
            return 0
    return _sgn(count_a)


def _blocks(n: int) -> Iterator[List[List[int]]]:
    """Ways to cut 0..n-1 into consecutive nonempty blocks."""
    for comp in compositions(n):
        out, start = [], 0
        for c in comp:
            out.append(list(range(start, start + c)))
            start += c
        yield out


def u_symbol(classes: Sequence[Cls]) -> Fraction:
    """Joyce's U symbol for the D0-D6 wall."""
    n = len(classes)
    total_phase = _phase_after(_sum(classes))
    res = Fraction(0)
    for psi in _blocks(n):
        if any(_phase_before(classes[k]) != _phase_before(classes[b[0]]) for b in psi for k in b):
            continue
        beta = [_sum([classes[k] for k in b]) for b in psi]
        w = Fraction(1)
        for b in psi:
            w /= factorial(len(b))
        for xi in _blocks(len(beta)):
            if any(_phase_after(_sum([beta[k] for k in b])) != total_phase for b in xi):
                continue
            prod = 1
            for b in xi:
                prod *= see_saw_S([beta[k] for k in b])
                if not prod:
                    break
            if prod:
                res += Fraction(_sgn(len(xi) - 1), len(xi)) * prod * w
    return res


def dt_minus_class(c: Cls, chi):
    """DT-bar on the near side: -chi J(a) on (a, 0), 1/r^2 on (0, r), else 0."""
    a, r = c
    if a and r:
        return Fraction(0)
    if r == 0:
        return ring.to_ring(chi) * -divisor_square_sum(a)
    return Fraction(1, r * r)


def decompositions(a: int, r: int) -> Iterator[List[Cls]]:
    """Ordered sequences of classes (p, 0) and (0, k) summing to (a, r)."""
    if (a, r) == (0, 0):
        yield []
        return
    for p in range(1, a + 1):
        for rest in decompositions(a - p, r):
            yield [(p, 0)] + rest
    for k in range(1, r + 1):
        for rest in decompositions(a, r - k):
            yield [(0, k)] + rest


def dt_js_general(a: int, r: int, chi):
    """sum over decompositions of (-1)^{n-1}/2^{n-1} U * tree sum * prod DT-bar."""
    total = Fraction(0)
    for classes in decompositions(a, r):
        n = len(classes)
        if n == 1:
            continue
        t = tree_sum(classes)
        if not t:
            continue
        u = u_symbol(classes)
        if not u:
            continue
        d = ring.to_ring(1)
        for c in classes:
            d = d * dt_minus_class(c, chi)
        total = total + d * (_weight(n) * u * t)
    return ring.constant_value(total)


def unique_ordering_place(p: Sequence[int]) -> List[int]:
    """All i with head_{i-1} < tail_i and head_i >= tail_{i+1}; exactly one exists."""
    out = []
    for i in range(1, len(p) + 1):
        head = sum(p[: i - 1])
        tail = sum(p[i - 1:])
        if head < tail and head + p[i - 1] >= tail - p[i - 1]:
            out.append(i)
    return out


def joycesong_table(chi, cap):
    from .dtcore import InvariantTable, _boundary_values, mobius_invert

    if cap.max_r > 2:
        raise ValueError("the Joyce-Song path covers r <= 2 only")
    omega = _boundary_values(chi, cap)
    t = InvariantTable(chi, cap, "joycesong", omega)
    t = mobius_invert(t, "omega_to_dt")
    for (a, r) in cap.exponents:
        if a >= 1 and r == 1:
            t.dtbar[(a, 1)] = dt_js_r1(a, chi)
        elif a >= 1 and r == 2:
            t.dtbar[(a, 2)] = dt_js_r2(a, chi)
    return mobius_invert(t, "dt_to_omega")


# -- rank 3 structure -------------------------------------------------------------


def rank3_tree_shapes(p: Sequence[int], places: Tuple[int, int, int]) -> List[dict]:
    """Non-vanishing trees for three single copies of gamma.

    Each record has the shape ("one_cap" when one mu vertex joins all three
    gammas, "two_cap" when two mu vertices each join two), the cap places and
    the tree weight divided by the common factor prod (-1)^{p_k} p_k.
    """
    n = len(p) + 3
    classes = decomposition_classes(p, {g: 1 for g in places})
    common = 1
    for x in p:
        common *= _sgn(x) * x
    out = []
    for edges in _prufer_trees(n):
        w = 1
        for k, l in edges:
            w *= edge_weight(classes[k], classes[l])
            if not w:
                break
        if not w:
            continue
        deg: Dict[int, int] = {}
        for k, l in edges:
            for v in (k, l):
                if classes[v][1] == 0:
                    deg[v] = deg.get(v, 0) + 1
        caps = sorted(v + 1 for v, d in deg.items() if d > 1)
        shape = {1: "one_cap", 2: "two_cap"}.get(len(caps), "other")
        if shape == "one_cap" and deg[caps[0] - 1] != 3:
            shape = "other"
        out.append({"shape": shape, "caps": tuple(caps), "ratio": Fraction(w, common)})
    return out
