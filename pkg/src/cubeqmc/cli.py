"""Command-line entry point: construction, point generation, criterion
evaluation, exact t-values, integration runs, and bound reports.

All subcommands are deterministic: identical configuration yields
byte-identical artifacts (modulo the timestamp field, excludable with
--no-timestamp).  --threads is accepted for interface stability; every
reduction is already deterministic, so results never depend on it.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

from . import bounds as bounds_mod
from . import gf2, measures, nets
from .cbc import Cube, WeightScheme, B_fast, cbc_construct, cbc_guarantee_rhs, subsets
from .errors import ConfigError, CubeQMCError, NumericValidationError, WorkGuardError
from .lattice import E_walsh, PolyLatticeRule, plps


def parse_weights(spec: str, s: int) -> WeightScheme:
    """Flag grammar: prod:g1,g2,... | pod:G1,...|g1,... | @file.json"""
    if spec.startswith("@"):
        path = spec[1:]
        if not os.path.exists(path):
            raise ConfigError(f"weights file not found: {path}")
        with open(path) as fh:
            return WeightScheme.from_json(json.load(fh))
    if spec.startswith("prod:"):
        gammas = tuple(float(t) for t in spec[5:].split(","))
        if len(gammas) == 1 and s > 1:
            gammas = gammas * s  # single value broadcasts over coordinates
        if len(gammas) < s:
            raise ConfigError("not enough product weights for dimension")
        return WeightScheme.from_json({"type": "product", "gamma": list(gammas)})
    if spec.startswith("pod:"):
        parts = spec[4:].split("|")
        if len(parts) != 2:
            raise ConfigError("pod weights need Gamma|gamma")
        big = [1.0] + [float(t) for t in parts[0].split(",")]
        small = [float(t) for t in parts[1].split(",")]
        return WeightScheme.from_json({"type": "pod", "Gamma": big, "gamma": small})
    raise ConfigError(f"cannot parse weights spec {spec!r}")


def parse_cube(spec: str, s: int) -> Cube:
    """Flag grammar: unit | a1,..;b1,.. | @file.json"""
    if spec == "unit":
        return Cube.unit(s)
    if spec.startswith("@"):
        path = spec[1:]
        if not os.path.exists(path):
            raise ConfigError(f"cube file not found: {path}")
        with open(path) as fh:
            return Cube.from_json(json.load(fh))
    if ";" in spec:
        lo, hi = spec.split(";", 1)
        a = tuple(float(t) for t in lo.split(","))
        b = tuple(float(t) for t in hi.split(","))
        if len(a) == 1 and len(b) == 1 and s > 1:
            a, b = a * s, b * s  # single interval broadcasts over coordinates
        return Cube(a, b)
    raise ConfigError(f"cannot parse cube spec {spec!r}")


def parse_measures(spec: str, s: int) -> list[measures.CoordinateMeasure]:
    """Flag grammar: uniform | linear | @file.json holding a list of measure
    objects; a bare name applies the same measure to every coordinate."""
    if spec == "uniform":
        return [measures.builtin_measure("uniform", a=0, b=1) for _ in range(s)]
    if spec == "linear":
        return [measures.builtin_measure("linear") for _ in range(s)]
    if spec.startswith("@"):
        path = spec[1:]
        if not os.path.exists(path):
            raise ConfigError(f"measures file not found: {path}")
        with open(path) as fh:
            objs = json.load(fh)
        if not isinstance(objs, list):
            raise ConfigError("measures file must hold a list")
        out = [measures.measure_from_json(o) for o in objs]
        if len(out) != s:
            raise ConfigError("measure count does not match dimension")
        return out
    raise ConfigError(f"cannot parse measures spec {spec!r}")


def _load_rule(args) -> PolyLatticeRule:
    if not args.f or not args.g:
        raise ConfigError("--f and --g required")
    return PolyLatticeRule.from_hex(args.f, args.g)


def _point_source(args):
    """Resolve a point set from --plps / --sobol / --matrices flags."""
    chosen = sum(bool(x) for x in (args.plps, args.sobol, args.matrices))
    if chosen != 1:
        raise ConfigError("choose exactly one of --plps, --sobol, --matrices")
    if args.plps:
        rule = _load_rule(args)
        return plps(rule), rule.m
    if args.sobol:
        if args.m is None or args.s is None:
            raise ConfigError("--sobol needs --s and --m")
        mats = nets.sobol_matrices(args.s, args.m)
        definition = nets.NetDefinition(args.m, args.s, mats)
        if args.N is not None:
            pts, _dec = nets.sequence_prefix(definition, args.N)
            return pts, args.m
        return nets.generate_net(definition), args.m
    if not os.path.exists(args.matrices):
        raise ConfigError(f"matrix file not found: {args.matrices}")
    definition = nets.load_matrices(args.matrices)
    if args.N is not None:
        pts, _dec = nets.sequence_prefix(definition, args.N)
        return pts, definition.m
    return nets.generate_net(definition), definition.m


def _emit(report: dict, args) -> None:
    if not args.no_timestamp:
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_cbc(args) -> None:
    if args.s is None or not args.f:
        raise ConfigError("--f and --s required")
    f = gf2.poly_from_hex(args.f)
    weights = parse_weights(args.weights, args.s)
    cube = parse_cube(args.cube, args.s)
    g_star, b_val = cbc_construct(f, args.s, weights, cube)
    m = gf2.poly_degree(f)
    report = {
        "command": "cbc",
        "f": gf2.poly_to_hex(f),
        "m": m,
        "s": args.s,
        "g": [gf2.poly_to_hex(g) for g in g_star],
        "B": b_val,
        "guarantee_rhs": cbc_guarantee_rhs(m, args.s, weights, cube),
        "weights": weights.to_json(),
        "cube": cube.to_json(),
    }
    _emit(report, args)


def _cmd_points(args) -> None:
    pts, m = _point_source(args)
    if not args.out:
        raise ConfigError("points requires --out")
    if args.format == "csv":
        pts.to_csv(args.out)
    else:
        pts.to_binary(args.out, m=m)


def _cmd_criterion(args) -> None:
    rule = _load_rule(args)
    s = rule.s
    weights = parse_weights(args.weights, s)
    cube = parse_cube(args.cube, s)
    pts = plps(rule)
    report = {
        "command": "criterion",
        "f": gf2.poly_to_hex(rule.f),
        "g": [gf2.poly_to_hex(g) for g in rule.g],
        "m": rule.m,
        "s": s,
        "B": B_fast(pts, rule.m, weights, cube),
        "weights": weights.to_json(),
        "cube": cube.to_json(),
    }
    _emit(report, args)


def _cmd_tvalue(args) -> None:
    if args.plps:
        raise ConfigError("tvalue works on digital nets; use --sobol or --matrices")
    if args.sobol:
        if args.m is None or args.s is None:
            raise ConfigError("--sobol needs --s and --m")
        definition = nets.NetDefinition(args.m, args.s, nets.sobol_matrices(args.s, args.m))
    else:
        if not args.matrices or not os.path.exists(args.matrices):
            raise ConfigError("matrix file not found")
        definition = nets.load_matrices(args.matrices)
    table = {}
    for u in subsets(definition.s):
        table[",".join(map(str, u))] = nets.exact_t(definition, u)
    report = {
        "command": "tvalue",
        "m": definition.m,
        "s": definition.s,
        "t": table,
    }
    _emit(report, args)


def _cmd_integrate(args) -> None:
    pts, _m = _point_source(args)
    s = pts.s
    mes = parse_measures(args.measures, s)
    cube = Cube(tuple(m.a for m in mes), tuple(m.b for m in mes))
    F = measures.builtin_integrand(args.integrand, cube)
    nodes = measures.map_points(pts, mes)
    estimate = measures.qmc_estimate(F, nodes)
    report = {
        "command": "integrate",
        "integrand": args.integrand,
        "n_points": pts.n_points,
        "s": s,
        "estimate": estimate,
    }
    if args.reference is not None:
        report["reference"] = args.reference
        report["error"] = estimate - args.reference
    _emit(report, args)


def _cmd_bounds(args) -> None:
    rule = _load_rule(args)
    s = rule.s
    weights = parse_weights(args.weights, s)
    cube = parse_cube(args.cube, s)
    m = rule.m
    pts = plps(rule)
    q = math.inf if args.q == "inf" else float(args.q)
    e_map = {u: E_walsh(pts, m, u) for u in subsets(s)}
    ctx = bounds_mod.BoundContext(s=s, weights=weights, cube=cube, q=q, m=m)
    report = {
        "command": "bounds",
        "f": gf2.poly_to_hex(rule.f),
        "g": [gf2.poly_to_hex(g) for g in rule.g],
        "m": m,
        "s": s,
        "q": args.q,
        "E": {",".join(map(str, u)): str(e_map[u]) for u in subsets(s)},
        "thm1_bound": bounds_mod.thm1_bound(ctx, e_map),
    }
    if q == 1:
        report["cbc_bound"] = bounds_mod.cbc_bound(ctx)
        report["avg_formula"] = bounds_mod.avg_formula(ctx)
    _emit(report, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeqmc", description="Digital nets and polynomial lattice rules "
        "for weighted integration over a cube."
    )
    parser.add_argument("--config", help="JSON file of defaults; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output path (default stdout for JSON)")
        p.add_argument("--no-timestamp", action="store_true")
        p.add_argument("--threads", type=int, default=1)

    def rule_flags(p):
        p.add_argument("--f", help="modulus polynomial, hex (e.g. 0x7)")
        p.add_argument("--g", help="generating vector, comma-separated hex")

    def source_flags(p):
        rule_flags(p)
        p.add_argument("--plps", action="store_true", help="polynomial lattice points")
        p.add_argument("--sobol", action="store_true")
        p.add_argument("--matrices", help="generating-matrix file")
        p.add_argument("--s", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--N", type=int, help="sequence-prefix length")

    p = sub.add_parser("cbc", help="component-by-component construction")
    p.add_argument("--f", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--weights", default="prod:1")
    p.add_argument("--cube", default="unit")
    common(p)

    p = sub.add_parser("points", help="emit points as CSV or binary")
    source_flags(p)
    p.add_argument("--format", choices=("csv", "bin"), default="csv")
    common(p)

    p = sub.add_parser("criterion", help="quality criterion B for a rule")
    rule_flags(p)
    p.add_argument("--weights", default="prod:1")
    p.add_argument("--cube", default="unit")
    common(p)

    p = sub.add_parser("tvalue", help="exact t values per projection")
    source_flags(p)
    common(p)

    p = sub.add_parser("integrate", help="map points and run the estimator")
    source_flags(p)
    p.add_argument("--measures", default="uniform")
    p.add_argument("--integrand", default="constant")
    p.add_argument("--reference", type=float)
    common(p)

    p = sub.add_parser("bounds", help="bound report for a rule")
    rule_flags(p)
    p.add_argument("--weights", default="prod:1")
    p.add_argument("--cube", default="unit")
    p.add_argument("--q", default="1")
    common(p)

    return parser


_COMMANDS = {
    "cbc": _cmd_cbc,
    "points": _cmd_points,
    "criterion": _cmd_criterion,
    "tvalue": _cmd_tvalue,
    "integrate": _cmd_integrate,
    "bounds": _cmd_bounds,
}


def _apply_config(args, parser) -> None:
    """Fill unset flags from the optional JSON config; flags win."""
    if not args.config:
        return
    if not os.path.exists(args.config):
        raise ConfigError(f"config file not found: {args.config}")
    with open(args.config) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad config JSON: {exc}") from None
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        # a flag explicitly provided on the command line wins; argparse gives
        # us no direct record, so config only fills values still at default
        if getattr(args, attr) in (None, False):
            setattr(args, attr, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        _apply_config(args, parser)
        _COMMANDS[args.command](args)
    except WorkGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, CubeQMCError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
