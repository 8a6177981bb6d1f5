"""Gromov-Witten side of the D0-D6 wall-crossing.

The commutator of the D6 generator with the D0 tail factorizes into mixed
rays only.  The logarithm of each mixed ray function packages aggregate
genus-zero numbers N_h; a refined commutator with one parameter per slot
separates them into numbers N[G] indexed by graded ordered partitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from . import ring
from .ring import MultiPoly, is_zero
from .series import Cap, GradedSeries, OutOfCap, macmahon, series_exp, series_invert, series_log
from .vertex import (
    BPS_to_ray_function,
    VertexGenerator,
    factorize,
    is_primitive,
    make_T,
    quadratic_sign,
    ray_function_to_BPS,
)

Ray = Tuple[int, int]

# refined runs multiply polynomial coefficients; keep them small
MAX_REFINED_VARIABLES = 12
MAX_REFINED_CAP = 40

# D0-D6 values of the refined parameters at u = 1; pinned by the end-to-end
# comparison with aggregate_gw (sigma must specialize to the inverse tail)
D0D6_S = -1
D0D6_T = -1


class CapTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GradedOrderedPartition:
    """Grades p^1..p^d; every part in grade j is a multiple of j.

    Parts are kept per labeled slot, so a grade may contain zeros (an
    unused slot).  ``canonical`` drops zeros and sorts within each grade.
    """

    grades: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for j, parts in enumerate(self.grades, start=1):
            for p in parts:
                if p < 0 or p % j:
                    raise ValueError(f"part {p} in grade {j} is not a nonnegative multiple of {j}")

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(g) for g in self.grades)

    @property
    def size(self) -> int:
        return sum(sum(g) for g in self.grades)

    def canonical(self) -> "GradedOrderedPartition":
        return GradedOrderedPartition(tuple(tuple(sorted((p for p in g if p), reverse=True)) for g in self.grades))

    def to_json(self) -> dict:
        return {str(j): list(g) for j, g in enumerate(self.grades, start=1)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedOrderedPartition":
        d = max((int(k) for k in obj), default=0)
        return cls(tuple(tuple(int(p) for p in obj.get(str(j), [])) for j in range(1, d + 1)))


@dataclass
class GWRecord:
    ray: Ray
    h: int
    value: object
    partition: Optional[GradedOrderedPartition] = None

    def to_json(self) -> dict:
        out = {"h": self.h, "value": ring.ring_to_json(self.value)}
        if self.partition is not None:
            out["partition"] = self.partition.to_json()
        return out


def records_to_json(ray: Ray, records: List[GWRecord]) -> dict:
    return {"ray": {"a": ray[0], "r": ray[1]}, "records": [rec.to_json() for rec in records]}


def _check_ray(a: int, r: int):
    if not is_primitive(a, r) or a < 1 or r < 1:
        raise ValueError(f"({a},{r}) is not a primitive mixed ray")


def _ray_cap(a: int, r: int, h_max: int) -> Cap:
    return Cap.box(h_max * a, h_max * r)


def commutator_word(chi, cap: Cap) -> List[VertexGenerator]:
    """T_{0,1}^-1 theta_{(1,0),D} T_{0,1} theta_{(1,0),D^-1} with D = M(x)^chi."""
    d = macmahon("plus", chi, cap)
    t = make_T((0, 1), 1, cap)
    return [t.inverse(), VertexGenerator((1, 0), d), t, VertexGenerator((1, 0), series_invert(d))]


def commutator_pipeline(a: int, r: int, chi, cap: Cap | None = None, h_max: int = 2):
    """Ray function on the primitive ray (a, r) and the Omega(h a, h r) it encodes."""
    _check_ray(a, r)
    if cap is None:
        cap = _ray_cap(a, r, h_max)
    if not cap.contains(a, r):
        raise OutOfCap(f"ray ({a},{r}) outside {cap}")
    fact = factorize(commutator_word(chi, cap), cap)
    f_ray = fact.ray_function((a, r))
    return f_ray, ray_function_to_BPS((a, r), f_ray)


def aggregate_gw(f_ray: GradedSeries, a: int, r: int) -> List[GWRecord]:
    """N_h = (-1)^{h(a+r)} [x^{ha} y^{hr}] log f / h for every h in the cap."""
    _check_ray(a, r)
    lg = series_log(f_ray)
    out = []
    h = 1
    while f_ray.cap.contains(h * a, h * r):
        c = lg.coeff(h * a, h * r)
        sign = -1 if (h * (a + r)) % 2 else 1
        out.append(GWRecord((a, r), h, ring.constant_value(c * Fraction(sign, h))))
        h += 1
    return out


def gw_side(records: List[GWRecord], a: int, r: int, cap: Cap) -> GradedSeries:
    """exp(sum_h h N_h (-1)^{h(a+r)} x^{ha} y^{hr})."""
    terms = {}
    for rec in records:
        h = rec.h
        if cap.contains(h * a, h * r):
            sign = -1 if (h * (a + r)) % 2 else 1
            terms[(h * a, h * r)] = rec.value * (h * sign)
    return series_exp(GradedSeries(cap, terms))


def verify_gw_identity(a: int, r: int, chi, h_max: int = 2) -> dict:
    """Check exp(GW side) == prod_h (1 - (-1)^{h^2 a r} z^h)^{h Omega(ha, hr)}.

    N_h come from log f, Omega from the BPS read-off of the same f; the two
    sides are then rebuilt from those numbers alone and compared.
    """
    _check_ray(a, r)
    cap = _ray_cap(a, r, h_max)
    f_ray, omegas = commutator_pipeline(a, r, chi, cap)
    records = aggregate_gw(f_ray, a, r)
    lhs = gw_side(records, a, r, cap)
    rhs = BPS_to_ray_function((a, r), dict(omegas), cap)
    return {
        "ray": (a, r),
        "chi": chi,
        "h_max": h_max,
        "N": {rec.h: rec.value for rec in records},
        "omega": dict(omegas),
        "pass": lhs == rhs and lhs == f_ray,
    }


# -- refined commutator ------------------------------------------------------------

_S_NAME = re.compile(r"^s_(\d+)_(\d+)$")


def s_var(j: int, k: int) -> str:
    return f"s_{j}_{k}"


def refined_slots(chi: int, d1: int) -> List[Tuple[int, int]]:
    """(j, k) for grades j <= d1 and slots k <= j chi."""
    return [(j, k) for j in range(1, d1 + 1) for k in range(1, j * chi + 1)]


def refined_word(chi: int, d1: int, cap: Cap) -> List[VertexGenerator]:
    """tau^-1 sigma^-1 tau sigma with sigma = prod (1 + s_j_k x^j), tau = 1 + t y."""
    sigma = GradedSeries.one(cap)
    for j, k in refined_slots(chi, d1):
        if cap.contains(j, 0):
            sigma = sigma * GradedSeries(cap, {(0, 0): 1, (j, 0): ring.var(s_var(j, k))})
    tau = GradedSeries(cap, {(0, 0): 1, (0, 1): ring.var("t")})
    gs = VertexGenerator((1, 0), sigma)
    gt = VertexGenerator((0, 1), tau)
    return [gt.inverse(), gs.inverse(), gt, gs]


def decode_monomial(mono: Mapping[str, int], chi: int, d1: int) -> Tuple[GradedOrderedPartition, int]:
    """Partition with p^j_k = j e_jk, plus the t exponent."""
    grades = [[0] * (j * chi) for j in range(1, d1 + 1)]
    t_exp = 0
    for name, e in mono.items():
        if name == "t":
            t_exp = e
            continue
        m = _S_NAME.match(name)
        if not m:
            raise ValueError(f"unexpected variable {name}")
        j, k = int(m.group(1)), int(m.group(2))
        grades[j - 1][k - 1] = j * e
    return GradedOrderedPartition(tuple(tuple(g) for g in grades)), t_exp


def _monomials(v) -> List[Tuple[Dict[str, int], Fraction]]:
    if isinstance(v, MultiPoly):
        out = []
        for mono, c in v.items():
            out.append(({ring.var_name(k): e for k, e in mono}, c))
        return out
    return [({}, Fraction(v))] if not is_zero(v) else []


def refined_commutator(chi: int, d1: int, cap: Cap) -> Dict[Ray, List[GWRecord]]:
    """Per primitive mixed ray, the numbers N[G] read from log f.

    A monomial c * prod s_j_k^{e_jk} t^{hr} at x^{ha} y^{hr} yields the
    record N[G] = (-1)^{h(a+r)} c / h with G decoded from the exponents.
    """
    if not isinstance(chi, int) or chi < 1:
        raise ValueError("refined runs need a positive integer chi")
    if d1 < 1:
        raise ValueError("d1 must be positive")
    n_vars = len(refined_slots(chi, d1)) + 1
    if n_vars > MAX_REFINED_VARIABLES or len(cap.exponents) > MAX_REFINED_CAP:
        raise CapTooLarge(f"{n_vars} parameters on {len(cap.exponents)} exponents")
    fact = factorize(refined_word(chi, d1, cap), cap)
    out: Dict[Ray, List[GWRecord]] = {}
    for ray, f in sorted(fact.nontrivial().items()):
        a, r = ray
        if a < 1 or r < 1:
            raise ValueError(f"unexpected pure ray {ray} in the commutator")
        lg = series_log(f)
        recs = []
        seen = set()
        h = 1
        while cap.contains(h * a, h * r):
            sign = -1 if (h * (a + r)) % 2 else 1
            for mono, c in _monomials(lg.coeff(h * a, h * r)):
                g, t_exp = decode_monomial(mono, chi, d1)
                if g.size != h * a or t_exp != h * r:
                    raise ValueError(f"monomial {mono} does not match class ({h * a},{h * r})")
                if g in seen:
                    raise ValueError(f"monomial decoding collision at {g}")
                seen.add(g)
                recs.append(GWRecord(ray, h, c * Fraction(sign, h), g))
            h += 1
        out[ray] = recs
    return out


def canonical_records(records: List[GWRecord]) -> List[dict]:
    """Group labeled-slot records by canonical partition.

    Each entry gives the canonical partition, the number of labeled slot
    assignments collapsing to it and their common value.
    """
    groups: Dict[Tuple[int, GradedOrderedPartition], List[object]] = {}
    for rec in records:
        groups.setdefault((rec.h, rec.partition.canonical()), []).append(rec.value)
    out = []
    for (h, g), vals in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].grades)):
        out.append({"h": h, "partition": g, "multiplicity": len(vals), "value": vals[0],
                    "uniform": all(v == vals[0] for v in vals)})
    return out


def specialize_to_d0d6(refined: Mapping[Ray, List[GWRecord]], chi: int, u=1,
                       s_value=D0D6_S, t_value=D0D6_T) -> Dict[Ray, List[GWRecord]]:
    """Sum N[G] times the specialized monomial over G of each size.

    Slot parameter s_j_k is set to s_value * u^j and t to t_value * u, so
    sigma becomes prod_j (1 - u^j x^j)^{j chi}, the inverse D0 tail.
    """
    out: Dict[Ray, List[GWRecord]] = {}
    for ray, recs in refined.items():
        a, r = ray
        acc: Dict[int, object] = {}
        for rec in recs:
            g = rec.partition
            w = ring.to_ring(1)
            for j, parts in enumerate(g.grades, start=1):
                for p in parts:
                    e = p // j
                    w = w * (ring.to_ring(s_value) * ring.to_ring(u) ** j) ** e
            w = w * (ring.to_ring(t_value) * ring.to_ring(u)) ** (rec.h * r)
            acc[rec.h] = acc.get(rec.h, 0) + rec.value * w
        out[ray] = [GWRecord(ray, h, ring.constant_value(v)) for h, v in sorted(acc.items())]
    return out


def truncated_aggregate(chi: int, d1: int, cap: Cap) -> Dict[Ray, List[GWRecord]]:
    """aggregate_gw for the commutator whose tail keeps only grades j <= d1."""
    tail = GradedSeries.one(cap)
    for j in range(1, d1 + 1):
        if cap.contains(j, 0):
            tail = tail * _pow_int(GradedSeries(cap, {(0, 0): 1, (j, 0): -1}), j * chi)
    t = make_T((0, 1), 1, cap)
    word = [t.inverse(), VertexGenerator((1, 0), series_invert(tail)), t, VertexGenerator((1, 0), tail)]
    fact = factorize(word, cap)
    out = {}
    for ray, f in sorted(fact.nontrivial().items()):
        out[ray] = aggregate_gw(f, *ray)
    return out


def _pow_int(s: GradedSeries, n: int) -> GradedSeries:
    out = GradedSeries.one(s.cap)
    for _ in range(n):
        out = out * s
    return out


def compare_refined(chi: int, d1: int, cap: Cap, **spec_opts) -> dict:
    refined = refined_commutator(chi, d1, cap)
    spec = specialize_to_d0d6(refined, chi, **spec_opts)
    direct = truncated_aggregate(chi, d1, cap)
    mismatches = []
    for ray in sorted(set(spec) | set(direct)):
        a_vals = {rec.h: rec.value for rec in spec.get(ray, [])}
        b_vals = {rec.h: rec.value for rec in direct.get(ray, [])}
        for h in sorted(set(a_vals) | set(b_vals)):
            if a_vals.get(h, 0) != b_vals.get(h, 0):
                mismatches.append({"ray": ray, "h": h, "refined": a_vals.get(h, 0), "aggregate": b_vals.get(h, 0)})
    return {"chi": chi, "d1": d1, "cap": str(cap), "rays": len(direct), "mismatches": mismatches,
            "pass": not mismatches}
