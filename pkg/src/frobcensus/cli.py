"""Command-line front end: census, sieve, gsp, exponents, charsum, selftest.

Exit codes: 0 ok, 2 invalid input, 3 capacity, 4 internal consistency.
Flags win over values from ``--config`` (a JSON object with the same keys).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from . import asymptotics, census, gsp, sieve
from .curves import LMFDB_3680_A, CurveModel
from .errors import ConsistencyError, FrobCensusError, InvalidInputError
from .numth import DEFAULT_TRIAL_BOUND

SCHEMA = 1


@dataclass
class Config:
    curve: CurveModel = LMFDB_3680_A
    X: int = 10**4
    z: Optional[str] = None  # "auto" or a number
    threads: int = 1
    out: Path = Path("frobcensus_out")
    factor_bound: int = DEFAULT_TRIAL_BOUND
    constants: Dict[str, float] = field(default_factory=lambda: dict(asymptotics.DEFAULT_CONSTANTS))
    seed: int = 0
    extended: bool = False

    def validate(self) -> "Config":
        if self.X < 2:
            raise InvalidInputError("X must be >= 2")
        if self.threads < 1:
            raise InvalidInputError("thread count must be >= 1")
        return self


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInputError("config must be a JSON object")
    return data


def build_config(args: argparse.Namespace) -> Config:
    file_cfg = _load_config(getattr(args, "config", None))
    merged = dict(file_cfg)
    for key in ("curve", "x", "threads", "out", "factor_bound", "seed", "z"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    cfg = Config()
    if "curve" in merged:
        c = merged["curve"]
        cfg.curve = CurveModel(tuple(c)) if isinstance(c, list) else CurveModel.parse(str(c))
    if "x" in merged:
        cfg.X = int(merged["x"])
    if "threads" in merged:
        cfg.threads = int(merged["threads"])
    cfg.threads = census.resolve_threads(cfg.threads)
    if "out" in merged:
        cfg.out = Path(merged["out"])
    if "factor_bound" in merged:
        cfg.factor_bound = int(merged["factor_bound"])
    if "seed" in merged:
        cfg.seed = int(merged["seed"])
    if "z" in merged:
        cfg.z = str(merged["z"])
    cfg.constants.update(file_cfg.get("constants", {}))
    for name in ("A", "B", "B_prime", "c_prime"):
        val = getattr(args, f"const_{name}", None)
        if val is not None:
            cfg.constants[name] = val
    cfg.extended = bool(getattr(args, "extended", False) or file_cfg.get("extended", False))
    return cfg.validate()


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    out = getattr(args, "json_out", None)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# -- subcommands -------------------------------------------------------------------------


def cmd_census(args) -> int:
    cfg = build_config(args)
    cap = census.EXTENDED_X_CAP if cfg.extended else census.DEFAULT_X_CAP
    report = census.run_census(cfg.curve, cfg.X, cfg.threads, x_cap=cap, factor_bound=cfg.factor_bound)
    paths = census.write_report(report, cfg.out)
    summ = census.summary(report)
    if not args.quiet:
        print(json.dumps(summ, indent=2, sort_keys=True))
        print(f"wrote {', '.join(str(p) for p in paths.values())}", file=sys.stderr)
    return 0


def _parse_theta(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad theta {text!r}") from exc


def cmd_sieve(args) -> int:
    cfg = build_config(args)
    if args.random:
        rng = random.Random(cfg.seed)
        worst = None
        for _ in range(args.random):
            A, P = sieve.random_instance(rng)
            rep = sieve.sieve_terms(A, P)
            if not rep.holds:
                raise ConsistencyError(f"square sieve inequality fails on A={A}, P={P}")
            slack = rep.bound - rep.s_exact
            if worst is None or slack < worst:
                worst = slack
        _emit({"schema": SCHEMA, "instances": args.random, "seed": cfg.seed,
               "inequality_satisfied": True, "min_slack": str(worst)}, args)
        return 0
    report = census.run_census(cfg.curve, cfg.X, cfg.threads,
                               x_cap=census.EXTENDED_X_CAP if cfg.extended else census.DEFAULT_X_CAP,
                               factor_bound=cfg.factor_bound)
    if not report.ordinary_simple:
        raise InvalidInputError("no ordinary simple primes up to X; nothing to sieve")
    d = args.d if args.d is not None else min(report.d0_multiplicities)
    if cfg.z not in (None, "auto"):
        z = float(cfg.z)
        A = sieve.sieve_sequence(report, d, args.variant)
        P = sieve.sieve_primes(z, exclude=2 * d * cfg.curve.disc)
        rep = sieve.sieve_terms(A, P.primes)
    else:
        rep, P = sieve.census_sieve(report, d, _parse_theta(args.theta), args.variant)
    pi_f = census.pi_F(report, d)
    out = {"schema": SCHEMA, "X": cfg.X, "d": d, "variant": args.variant,
           "z": P.z, "interval": [P.lo, P.hi], "widened": P.widened, "primes": list(P.primes),
           "pi_F": pi_f, **rep.to_json(), "S_ge_pi_F": rep.s_exact >= pi_f}
    _emit(out, args)
    if not rep.holds:
        raise ConsistencyError("square sieve inequality violated on census data")
    return 0


def cmd_gsp(args) -> int:
    c = gsp.gsp_census(args.g, args.l, classes=not args.no_classes, method=args.method)
    out = c.to_json(top=args.top)
    lower, upper = gsp.density_bounds(args.g, args.l)
    violations = gsp.verify_charpoly_bounds(c)
    out.update(density_lower=str(lower), density_upper=str(upper),
               density_violations=len(violations))
    if c.class_count_sp is not None:
        lo, hi = gsp.class_count_interval(args.g, args.l)
        out["class_count_interval"] = [lo, hi]
        out["class_count_ok"] = lo <= c.class_count_sp <= hi
    _emit(out, args)
    if violations:
        raise ConsistencyError(f"{len(violations)} char-poly buckets violate the density bounds")
    return 0


def cmd_exponents(args) -> int:
    rows = asymptotics.exponent_table(args.g)
    if args.regime != "all":
        rows = [r for r in rows if r["regime"] == args.regime]
    _emit({"schema": SCHEMA, "g": args.g, "rows": rows}, args)
    return 0


def cmd_charsum(args) -> int:
    l = args.l
    if args.a is not None:
        val = sieve.quad_char_sum(args.a, args.b, args.c, l)
        _emit({"schema": SCHEMA, "l": l, "a": args.a, "b": args.b, "c": args.c,
               "quad_char_sum": val, "conic_count": sieve.conic_count(args.a, args.b, args.c, l)}, args)
        return 0
    mismatches = 0
    conic_bad = 0
    for a in range(l):
        for b in range(l):
            for c in range(l):
                if sieve.quad_char_sum(a, b, c, l) != sieve.quad_char_sum_brute(a, b, c, l):
                    mismatches += 1
                if (a * (b * b - 4 * a * c)) % l and sieve.conic_count(a, b, c, l) != l + 1:
                    conic_bad += 1
    _emit({"schema": SCHEMA, "l": l, "closed_form_mismatches": mismatches,
           "conic_violations": conic_bad}, args)
    if mismatches or conic_bad:
        raise ConsistencyError("character-sum identities failed")
    return 0


def cmd_selftest(args) -> int:
    from .curves import count_points, count_points_slow
    from .frobenius import gamma_symbolic, psi_constant

    checks: List[tuple] = []
    c5 = CurveModel((1, 0, 0, 0, 0, 1))
    checks.append(("N1(x^5+1, 3) = 4", count_points(c5, 3, 1) == 4))
    checks.append(("N2 fast = slow at p=7", count_points(LMFDB_3680_A, 7, 2) == count_points_slow(LMFDB_3680_A, 7, 2)))
    checks.append(("psi_2 = 128", psi_constant(2) == 128))
    checks.append(("psi_3 = 5072", psi_constant(3) == 5072))
    checks.append(("gamma_2(1,2,7) = 228", gamma_symbolic(2)((-1, 2), 7) == 228))
    rep = census.run_census(LMFDB_3680_A, 500)
    checks.append(("census X=500 max Pi(A,K) <= 1", census.max_pi_K(rep) <= 1))
    rng = random.Random(args.seed if args.seed is not None else 0)
    checks.append(("square sieve on 50 random instances",
                   all(sieve.sieve_terms(*sieve.random_instance(rng)).holds for _ in range(50))))
    g1 = gsp.gsp_census(1, 5)
    checks.append(("GL2(F5) order and bounds", g1.order_gsp == 480 and not gsp.verify_charpoly_bounds(g1)))
    checks.append(("theta GRH g=2 = 1/46", asymptotics.optimal_theta("GRH", 2).theta == Fraction(1, 46)))
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if not all(ok for _, ok in checks):
        raise ConsistencyError("selftest failed")
    return 0


# -- parser --------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frobcensus", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, curve=True):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--seed", type=int)
        if curve:
            p.add_argument("--curve", help='f coefficients lowest degree first, e.g. "1,0,0,2,-3,1"')
            p.add_argument("--x", type=int, help="prime bound X")
            p.add_argument("--threads", type=int, help="worker threads (env FROBCENSUS_THREADS wins)")
            p.add_argument("--factor-bound", type=int, dest="factor_bound")
            p.add_argument("--extended", action="store_true", help="raise the X cap to 1e5")

    p = sub.add_parser("census", help="per-prime census and field counts")
    common(p)
    p.add_argument("--out", help="output directory")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("sieve", help="square sieve on census data or random instances")
    common(p)
    p.add_argument("--d", type=int, help="squarefree d (default: smallest observed d0)")
    p.add_argument("--theta", default="1/46", help="z = X^theta")
    p.add_argument("--z", help="explicit z (overrides theta)")
    p.add_argument("--variant", choices=["delta", "gamma"], default="delta")
    p.add_argument("--random", type=int, default=0, help="fuzz this many seeded random instances")
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("gsp", help="enumerate Sp/GSp_{2g}(F_l)")
    common(p, curve=False)
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--method", choices=["auto", "brute", "closure"], default="auto")
    p.add_argument("--no-classes", action="store_true")
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_gsp)

    p = sub.add_parser("exponents", help="sieve exponent balancing table")
    common(p, curve=False)
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--regime", default="all",
                   choices=["all"] + [r.value for r in asymptotics.Regime])
    for name in ("A", "B", "B_prime", "c_prime"):
        p.add_argument(f"--const-{name.replace('_', '-')}", type=float, dest=f"const_{name}")
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("charsum", help="quadratic character sums and conic counts mod l")
    common(p, curve=False)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--c", type=int, default=0)
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("selftest", help="quick end-to-end consistency checks")
    common(p, curve=False)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FrobCensusError as exc:
        print(f"frobcensus: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"frobcensus: invalid input: {exc}", file=sys.stderr)
        return InvalidInputError.exit_code


if __name__ == "__main__":
    sys.exit(main())
