"""Command-line entry point: ``python -m isofill <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 infeasible or over budget.
A ``--config`` file of ``key=value`` lines supplies defaults; flags override it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import bounds
from .chains import Chain, double, rectangle
from .constructions import DEFAULT_C0, build_linked_map, cross_validate
from .experiments import DEFAULT_LP_BUDGET, dumps, run_construction_sweep, run_iso_experiment
from .filler import fill_absolute, fill_double, fill_relative
from .generators import equator, linked_pair, random_cycle, random_relative_cycle
from .oracle import BudgetError, NotABoundaryError, linking_number, min_filling

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_axes(text: str) -> list[Fraction]:
    try:
        return [Fraction(p.strip()) for p in str(text).split(",") if p.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad axis list {text!r}: {exc}") from None


def int_axes(axes) -> tuple[int, ...]:
    if any(a.denominator != 1 for a in axes):
        raise ValueError(f"grid axes must be integers, got {[str(a) for a in axes]}")
    return tuple(int(a) for a in axes)


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def _common(p: argparse.ArgumentParser, *names: str) -> None:
    if "axes" in names:
        p.add_argument("--axes", type=parse_axes, help="comma-separated axis lengths, e.g. 1,2,4,8")
    if "k" in names:
        p.add_argument("--k", type=int, help="cycle dimension")
    if "k1" in names:
        p.add_argument("--k1", type=int, help="first sphere dimension of the wedge")
    if "lip" in names:
        p.add_argument("--lip", type=Fraction, default=Fraction(8), help="Lipschitz budget L")
    if "seed" in names:
        p.add_argument("--seed", type=int, default=0)
    if "samples" in names:
        p.add_argument("--samples", type=int, default=0)
    if "resolution" in names:
        p.add_argument("--resolution", type=int, default=1)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--csv", help="also write CSV rows here")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--config", help="key=value file of defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isofill", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fill", help="constructive filling of a cycle with its certificate")
    _common(p, "axes", "k", "seed")
    p.add_argument("--method", choices=("double", "absolute", "relative"), default="double")
    p.add_argument("--density", type=int, default=4)
    p.add_argument("--chain", help="JSON chain file (default: a random cycle)")

    p = sub.add_parser("lp", help="minimal filling volume by LP relaxation or exact ILP")
    _common(p, "axes", "k", "seed")
    p.add_argument("--mode", choices=("lp", "ilp"), default="lp")
    p.add_argument("--density", type=int, default=4)
    p.add_argument("--chain", help="JSON chain file (default: a random cycle)")
    p.add_argument("--budget", type=int, default=None, help="max matrix nonzeros")

    p = sub.add_parser("link", help="linking number of the standard linked pair")
    _common(p, "axes", "k1")
    p.add_argument("--ilp", action="store_true", help="also recompute with an ILP filling")

    p = sub.add_parser("equator", help="a coordinate equator and its filling volumes")
    _common(p, "axes", "k")
    p.add_argument("--which", choices=("smallest", "largest", "rim"), default="smallest")
    p.add_argument("--no-lp", action="store_true")

    p = sub.add_parser("construct", help="linked-tube map blueprint")
    _common(p, "axes", "k1", "lip")
    p.add_argument("--c0", type=Fraction, default=Fraction(DEFAULT_C0))
    p.add_argument("--check-copies", type=int, default=0,
                   help="cross-check against oracle linking numbers with this many fibers")

    p = sub.add_parser("bounds", help="evaluate a closed-form bound")
    _common(p, "axes", "k", "k1", "lip")
    p.add_argument("--kind", required=False, default="ellipse",
                   choices=("gromov", "ellipse", "hopf", "iso", "kdilation", "bad", "composition"))
    p.add_argument("--iso", type=Fraction)
    p.add_argument("--vol", type=Fraction)
    p.add_argument("--areas", type=parse_axes)
    p.add_argument("--axes2", type=parse_axes, help="target ellipse axes for kdilation")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--A", type=Fraction)
    p.add_argument("--w", type=Fraction)
    p.add_argument("--c0", type=Fraction, default=Fraction(DEFAULT_C0))

    p = sub.add_parser("iso-experiment", help="bracket an isoperimetric constant")
    _common(p, "axes", "k", "seed", "samples", "resolution")
    p.add_argument("--no-equators", action="store_true")
    p.add_argument("--density", type=int, default=6)
    p.add_argument("--lp-budget", type=int, default=DEFAULT_LP_BUDGET)

    p = sub.add_parser("sweep", help="construction sweep over Lipschitz budgets")
    _common(p, "axes", "k1")
    p.add_argument("--lips", type=parse_axes, default=[Fraction(x) for x in (8, 16, 32, 64)])
    p.add_argument("--c0", type=Fraction, default=Fraction(DEFAULT_C0))
    parser.subcommands = sub.choices
    return parser


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValueError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _input_cycle(args, geometry, relative=False) -> Chain:
    if args.chain:
        with open(args.chain) as fh:
            z = Chain.from_json(json.load(fh))
        if z.geometry != geometry:
            raise ValueError(f"chain geometry {z.geometry} does not match --axes")
        return z
    if relative:
        return random_relative_cycle(geometry, args.k, args.seed, args.density)
    return random_cycle(geometry, args.k, args.seed, args.density)


def cmd_fill(args):
    _need(args, "axes", "k")
    axes = int_axes(args.axes)
    if args.method == "double":
        z = _input_cycle(args, double(axes))
        cert = fill_double(z)
    else:
        z = _input_cycle(args, rectangle(axes), relative=args.method == "relative")
        cert = (fill_absolute if args.method == "absolute" else fill_relative)(z)
    out = {"cycle": z.to_json(), "mass": z.mass, "certificate": cert.to_json()}
    return out, [{"method": cert.method, "mass": z.mass, "fill_mass": cert.mass,
                  "certified_bound": str(cert.certified_bound)}]


def cmd_lp(args):
    _need(args, "axes", "k")
    z = _input_cycle(args, double(int_axes(args.axes)))
    res = min_filling(z, args.mode, args.budget)
    out = {"cycle": z.to_json(), "mass": z.mass, "mode": res.mode, "value": res.value}
    if res.mode == "ilp":
        out["witness"] = res.chain(z.geometry, z.dim).to_json()
    return out, [{"mode": res.mode, "mass": z.mass, "value": res.value}]


def cmd_link(args):
    _need(args, "axes", "k1")
    g = double(int_axes(args.axes))
    k2 = g.n + 1 - args.k1
    u, v = linked_pair(g, args.k1, k2)
    out = {"k1": args.k1, "k2": k2, "core_u": u.to_json(), "core_v": v.to_json(),
           "linking_constructive": linking_number(u, v)}
    if args.ilp:
        witness = min_filling(u, "ilp").chain(g, u.dim)
        out["linking_ilp"] = linking_number(u, v, filling=witness)
    row = {k: out[k] for k in out if k.startswith("linking") or k in ("k1", "k2")}
    return out, [row]


def cmd_equator(args):
    _need(args, "axes", "k")
    g = double(int_axes(args.axes))
    z = equator(g, args.k, args.which)
    cert = fill_double(z)
    out = {"which": args.which, "k": args.k, "chain": z.to_json(), "mass": z.mass,
           "constructive_fill": cert.mass, "certified_bound": str(cert.certified_bound)}
    if not args.no_lp:
        out["lp_lower"] = min_filling(z, "lp").value
    return out, [{k: v for k, v in out.items() if k != "chain"}]


def cmd_construct(args):
    _need(args, "axes", "k1")
    b = build_linked_map(args.axes, args.k1, None, args.lip, args.c0)
    out = {"blueprint": b.to_json(),
           "upper_bound": bounds.ellipse_bound(b.axes, b.L, b.k1, b.k2).to_json()}
    if args.check_copies:
        out["cross_check"] = cross_validate(b, args.check_copies)
    return out, [{"L": str(b.L), "d1": b.d1, "d2": b.d2, "invariant": b.invariant}]


def cmd_bounds(args):
    kind = args.kind
    if kind == "gromov":
        _need(args, "iso", "vol", "areas")
        n = len(args.axes) - 1 if args.axes else 3
        rep = bounds.gromov_bound(args.iso, args.vol, list(args.areas), args.lip, n)
    elif kind == "hopf":
        _need(args, "axes")
        rep = bounds.ellipse_bound(args.axes, args.lip)
    elif kind == "ellipse":
        _need(args, "axes", "k1")
        rep = bounds.ellipse_bound(args.axes, args.lip, args.k1)
    elif kind == "iso":
        _need(args, "axes", "k")
        rep = bounds.iso_formula(args.axes, args.k)
    elif kind == "kdilation":
        _need(args, "axes", "axes2", "k")
        rep = bounds.kdilation_bound(args.axes, args.axes2, args.k, args.degree)
    elif kind == "bad":
        _need(args, "A", "w")
        naive, improved, ratio = bounds.bad_example_bound(args.A, args.w, args.lip)
        out = {"naive": naive.to_json(), "improved": improved.to_json(), "ratio": str(ratio)}
        return out, [naive.csv_row(), improved.csv_row()]
    else:
        d, hopf, c = bounds.hopf_composition(args.lip, args.c0)
        out = {"L": str(args.lip), "C0": str(args.c0), "D": d, "hopf": hopf, "c": str(c)}
        return out, [out]
    return rep.to_json(), [rep.csv_row()]


def cmd_iso_experiment(args):
    _need(args, "axes", "k")
    report = run_iso_experiment(args.axes, args.k, args.samples, args.seed,
                                not args.no_equators, args.resolution, args.density, args.lp_budget)
    return report, report["samples"]


def cmd_sweep(args):
    _need(args, "axes", "k1")
    report = run_construction_sweep(args.axes, args.k1, args.lips, args.c0)
    return report, report["rows"]


COMMANDS = {"fill": cmd_fill, "lp": cmd_lp, "link": cmd_link, "equator": cmd_equator,
            "construct": cmd_construct, "bounds": cmd_bounds,
            "iso-experiment": cmd_iso_experiment, "sweep": cmd_sweep}


def _csv_text(rows) -> str:
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        values = read_config(args.config)
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}", EXIT_INVALID) from None
    sub = parser.subcommands[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, text in values.items():
        if key not in known or key in ("config", "help"):
            raise CliError(f"unknown config key {key!r} for {args.command}", EXIT_INVALID)
        action = known[key]
        if action.const is True:                        # store_true flag
            defaults[key] = text.lower() in ("1", "true", "yes", "on")
        else:
            try:
                defaults[key] = action.type(text) if action.type else text
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise CliError(f"config key {key!r}: {exc}", EXIT_INVALID) from None
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        out, rows = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (BudgetError, NotABoundaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = _csv_text(rows) if args.format == "csv" else dumps(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(_csv_text(rows))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
