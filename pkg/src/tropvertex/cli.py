"""Command-line entry point.

    tropvertex bps --chi 1 --amax 7 --rmax 2
    tropvertex dt --chi sym --amax 3 --rmax 2
    tropvertex verify ks --rmax 3 --amax 6 --chi sym
    tropvertex series coulomb --r 2 --chi 1 --n 7

Every output embeds the run config and the package version.  Tables are
cached under $TROPVERTEX_CACHE (default ~/.cache/tropvertex) keyed by a hash
of the canonical config.  Exit codes: 0 pass, 1 failed assertion, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import __version__, ring
from .series import Cap

log = logging.getLogger("tropvertex")

CACHE_ENV = "TROPVERTEX_CACHE"


class UsageError(ValueError):
    pass


# -- config and output ----------------------------------------------------------------


def parse_chi(text: str):
    if text == "sym":
        return ring.chi()
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--chi must be an integer or 'sym', got {text!r}")


def canonical(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical(config).encode()).hexdigest()[:24]


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "tropvertex"


def atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cache_load(cache_dir: Optional[Path], config: dict):
    if cache_dir is None:
        return None
    p = cache_dir / f"{config_hash(config)}.json"
    if not p.exists():
        return None
    try:
        obj = json.loads(p.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if obj.get("config") != config:
        return None
    return obj


def cache_store(cache_dir: Optional[Path], config: dict, obj: dict):
    if cache_dir is not None:
        atomic_write(cache_dir / f"{config_hash(config)}.json", json.dumps(obj, sort_keys=True, indent=1))


def _str(v) -> str:
    return ring.ring_str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return ring.ring_to_json(v)


def emit(obj: dict, fmt: str, out_path: Optional[str], csv_rows=None):
    if fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# config", canonical(obj["config"]), "version", obj["version"]])
        for row in csv_rows:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if out_path:
        atomic_write(Path(out_path), text)
    else:
        sys.stdout.write(text)


def _envelope(config: dict, body: dict) -> dict:
    return {"config": config, "version": __version__, **body}


# -- bps / dt ---------------------------------------------------------------------------


def _table_config(args) -> dict:
    return {
        "command": "table",
        "chi": args.chi,
        "amax": args.amax,
        "rmax": args.rmax,
        "order": args.order,
        "method": args.method,
    }


def cmd_table(args) -> int:
    from .dtcore import InvariantTable, omega_table

    chi = parse_chi(args.chi)
    if args.amax < 0 or args.rmax < 1:
        raise UsageError("need --amax >= 0 and --rmax >= 1")
    config = _table_config(args)
    cache_dir = None if args.no_cache else Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    obj = cache_load(cache_dir, config)
    if obj is None:
        log.info("computing %s", canonical(config))
        table = omega_table(chi, Cap.box(args.amax, args.rmax), args.method, args.order)
        obj = _envelope(config, {"table": table.to_json()})
        cache_store(cache_dir, config, obj)
    else:
        log.info("cache hit %s", config_hash(config))
    table = InvariantTable.from_json(obj["table"])
    key = "omega" if args.command == "bps" else "dtbar"
    values = getattr(table, key)
    rows = [["a", "r", key]] + [[a, r, _str(values[(a, r)])] for (a, r) in table.classes() if (a, r) in values]
    out = _envelope({**config, "command": args.command}, {"table": obj["table"]})
    emit(out, args.format, args.out, rows)
    return 0


# -- verify -----------------------------------------------------------------------------


def _suite_ks(args) -> List[dict]:
    from .dtcore import conjecture_report, omega_table

    chi = parse_chi(args.chi)
    cap = Cap.box(args.amax, min(args.rmax, 3))
    tables = {m: omega_table(chi, cap, m, args.order) for m in ("factorization", "liepath", "closedform")}
    out = []
    base = tables["factorization"].omega
    for m in ("liepath", "closedform"):
        for e in cap.exponents[1:]:
            out.append({"check": f"factorization=={m}", "class": list(e),
                        "pass": base[e] == tables[m].omega[e]})
    for rec in conjecture_report(chi, cap, tables["factorization"]):
        out.append({**rec, "informational": True})
    return out


def _suite_js(args) -> List[dict]:
    from .dtcore import omega_table
    from .joycesong import dt_js_r1, dt_js_r2

    chi = parse_chi(args.chi)
    table = omega_table(chi, Cap.box(args.amax, 2))
    out = []
    for a in range(1, args.amax + 1):
        out.append({"check": "js_rank1", "a": a, "lhs": dt_js_r1(a, chi), "rhs": table.omega[(a, 1)],
                    "pass": dt_js_r1(a, chi) == table.omega[(a, 1)]})
    if args.rmax >= 2:
        for a in range(1, args.amax + 1):
            v = dt_js_r2(a, chi)
            out.append({"check": "js_rank2", "a": a, "lhs": v, "rhs": table.dtbar[(a, 2)],
                        "pass": v == table.dtbar[(a, 2)]})
    return out


def _suite_congruence(args) -> List[dict]:
    from .numbertheory import binom_congruences, check_mod4, check_mod9

    chis = [int(c) for c in args.chis.split(",")]
    out = []
    for chi in chis:
        if args.mod in (4, 0):
            for a in range(2, args.amax + 1, 2):
                out.append({"check": "mod4", **check_mod4(a, chi)})
        if args.mod in (9, 0):
            for a in range(3, args.amax + 1, 3):
                out.append({"check": "mod9", **check_mod9(a, chi)})
    for rec in binom_congruences(4, 4, 12):
        if args.mod == 0 or (args.mod == 4) == ("2" in rec["name"] or "4" in rec["name"]):
            out.append({"check": rec["name"], **rec})
    return out


def _suite_gw(args) -> List[dict]:
    from .gwbridge import compare_refined, verify_gw_identity

    chi = parse_chi(args.chi)
    res = verify_gw_identity(args.a, args.r, chi, args.hmax)
    out = [{"check": "gw_identity", "ray": list(res["ray"]), "N": res["N"], "pass": res["pass"]}]
    if args.refined and isinstance(chi, int) and chi > 0:
        d1 = args.refined
        ref = compare_refined(chi, d1, Cap.box(args.hmax * args.a, args.hmax * args.r))
        out.append({"check": "refined_specialization", "d1": d1, "pass": ref["pass"],
                    "mismatches": ref["mismatches"]})
    return out


def property_checks(seed: int, count: int) -> List[dict]:
    """Randomized exact checks: exp/log, symplectic generators, factorization
    round trips, and bracket antisymmetry / Jacobi."""
    from .liealg import LieElement, bracket
    from .series import GradedSeries, series_exp, series_log
    from .vertex import Factorization, factorize, make_T, recompose, acts_equal, symplectic_defect

    rng = random.Random(seed)
    cap = Cap.box(3, 3)
    out = []

    def rand_q():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))

    for i in range(count):
        g = GradedSeries(cap, {e: rand_q() for e in cap.exponents[1:] if rng.random() < 0.5})
        out.append({"check": "exp_log", "i": i, "pass": series_log(series_exp(g)) == g})
        rays = [(a, r) for a in range(4) for r in range(4) if (a, r) != (0, 0)]
        word = [make_T(rng.choice(rays), rng.randint(-2, 2), cap) for _ in range(rng.randint(1, 4))]
        ok_sym = all(symplectic_defect(gen).is_zero() for gen in word)
        out.append({"check": "symplectic", "i": i, "pass": ok_sym})
        fact = factorize(word, cap)
        again = factorize(recompose(fact), cap)
        out.append({"check": "factorization_roundtrip", "i": i,
                    "pass": acts_equal(recompose(fact), word, cap) and again == fact
                    and Factorization.from_json(fact.to_json()) == fact})
        lie_cap = Cap.box(4, 4)

        def rand_lie():
            return LieElement(lie_cap, {(a, r): rand_q() for a in range(3) for r in range(3)
                                        if (a, r) != (0, 0) and rng.random() < 0.5})

        x, y, z = rand_lie(), rand_lie(), rand_lie()
        anti = bracket(x, y) + bracket(y, x)
        jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        out.append({"check": "bracket", "i": i, "pass": anti.is_zero() and jac.is_zero()})
    return out


def _suite_properties(args) -> List[dict]:
    return property_checks(args.seed, args.count)


SUITES = {
    "ks": _suite_ks,
    "js": _suite_js,
    "congruence": _suite_congruence,
    "gw": _suite_gw,
    "properties": _suite_properties,
}


def cmd_verify(args) -> int:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "format", "verbose")}
    records = SUITES[args.suite](args)
    hard = [r for r in records if not r.get("informational")]
    failed = [r for r in hard if not r["pass"]]
    body = {
        "suite": args.suite,
        "pass": not failed,
        "checked": len(hard),
        "failed": len(failed),
        "records": _jsonable(records),
    }
    rows = [["check", "pass", "detail"]] + [
        [r["check"], r["pass"], canonical(_jsonable({k: v for k, v in r.items() if k not in ("check", "pass")}))]
        for r in records
    ]
    emit(_envelope(config, body), args.format, args.out, rows)
    if failed:
        print(f"FAIL {args.suite}: {canonical(_jsonable(failed[0]))}", file=sys.stderr)
        return 1
    return 0


# -- series -----------------------------------------------------------------------------


def cmd_series(args) -> int:
    from .dtcore import coulomb_partition, degenerate_partition, series_coefficients
    from .series import macmahon

    chi = parse_chi(args.chi)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    if args.which == "macmahon":
        s = macmahon(args.sign, chi, Cap.box(args.n, 0))
    elif args.which == "coulomb":
        s = coulomb_partition(args.r, chi, args.n, args.coulomb_sign)
    else:
        s = degenerate_partition(args.r, chi, args.n)
    coeffs = series_coefficients(s)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "format", "verbose")}
    rows = [["n", "coeff"]] + [[i, _str(c)] for i, c in enumerate(coeffs)]
    emit(_envelope(config, {"coefficients": _jsonable(coeffs)}), args.format, args.out, rows)
    return 0


# -- argument parsing ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropvertex", description="D0-D6 invariants in the tropical vertex group")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("bps", "dt"):
        t = sub.add_parser(name, parents=[common], help=f"{'Omega' if name == 'bps' else 'DT-bar'} table")
        t.add_argument("--chi", default="1")
        t.add_argument("--amax", type=int, default=6)
        t.add_argument("--rmax", type=int, default=2)
        t.add_argument("--order", choices=["desc", "asc"], default="desc")
        t.add_argument("--method", choices=["factorization", "liepath", "closedform", "joycesong"],
                       default="factorization")
        t.add_argument("--cache-dir")
        t.add_argument("--no-cache", action="store_true")
        t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--chi", default="1")
    v.add_argument("--amax", type=int, default=6)
    v.add_argument("--rmax", type=int, default=3)
    v.add_argument("--order", choices=["desc", "asc"], default="desc")
    v.add_argument("--mod", type=int, choices=[0, 4, 9], default=0, help="0 runs both")
    v.add_argument("--chis", default="1,2,3", help="chi values for the congruence suite")
    v.add_argument("--a", type=int, default=1)
    v.add_argument("--r", type=int, default=1)
    v.add_argument("--hmax", type=int, default=2)
    v.add_argument("--refined", type=int, default=0, help="also run the refined check with this d1")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=20)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("series", parents=[common], help="print series coefficients")
    s.add_argument("which", choices=["macmahon", "coulomb", "degenerate"])
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--chi", default="1")
    s.add_argument("--n", type=int, default=7)
    s.add_argument("--sign", choices=["plus", "minus"], default="plus", help="M(t) or M(-t)")
    s.add_argument("--coulomb-sign", choices=["minus", "degenerate"], default="minus")
    s.set_defaults(func=cmd_series)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
