"""Command-line interface.

Exit status is 0 on success, 2 for invalid input and 3 for numerical
failures; errors are reported as a JSON object on stderr.
"""

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import cf_interp, contact, essnorm, h2num
from .config import Tolerances, using_tolerances
from .errors import EssNormalError, NumericalError, ParseError, ValidationError
from .expr import format_map, parse_complex, parse_map
from .ratfun import complex_pair


def _map_out(phi):
    return {"map": phi.to_json(), "expression": format_map(phi)}


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"{type(o).__name__} is not JSON serializable")


def _parse_steps(text):
    steps = []
    for chunk in (text or "").split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ParseError(f"step {chunk!r} must be 's,t'", 0)
        try:
            steps.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"step {chunk!r} has non-numeric entries", 0) from exc
    return steps


def _parse_sizes(text):
    try:
        sizes = [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"sizes {text!r} must be comma-separated integers", 0) from exc
    if not sizes or any(n < 1 for n in sizes):
        raise ParseError("sizes must be positive integers", 0)
    return sorted(sizes)


def _parse_terms(text):
    terms = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        if ":" not in chunk:
            raise ParseError(f"term {chunk!r} must be 'coeff:expr'", 0)
        c, e = chunk.split(":", 1)
        terms.append(essnorm.CombinationTerm(parse_complex(c), parse_map(e)))
    if not terms:
        raise ParseError("no terms given", 0)
    return terms


def _load_data(text):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON data: {exc.msg}", exc.pos) from exc
    return cf_interp.CFData.from_json(obj)


# -- subcommands --------------------------------------------------------------


def cmd_check(args):
    return essnorm.classify(parse_map(args.expr)).to_json()


def cmd_contact(args):
    return contact.contact_profile(parse_map(args.expr)).to_json()


def cmd_construct(args):
    zeta = parse_complex(args.zeta)
    w = parse_map(args.tail)
    phi = essnorm.generate_ess_normal(zeta, _parse_steps(args.steps), w)
    return _map_out(phi)


def cmd_decompose(args):
    phi = parse_map(args.expr)
    prof = contact.contact_profile(phi)
    basics = essnorm.decompose_into_basics(phi, seed=args.seed)
    rows = []
    for p, b in zip(prof.points, basics):
        row = _map_out(b)
        row["zeta"] = complex_pair(p.zeta)
        row["order"] = p.order
        rows.append(row)
    return {"basics": rows, "certificate": essnorm.decomposition_certificate(phi, basics)}


def cmd_combo(args):
    return essnorm.combination_report(_parse_terms(args.terms)).to_json()


def cmd_commutator(args):
    rep = h2num.compactness_diagnostic(parse_map(args.expr), _parse_sizes(args.sizes))
    if args.csv is not None:
        if args.csv == "-":
            return rep.to_csv()
        with open(args.csv, "w", newline="") as fh:
            fh.write(rep.to_csv())
    return rep.to_json()


def cmd_interp(args):
    data = _load_data(args.data)
    chain = cf_interp.parametrization_chain(data)
    F = cf_interp.construct_basic_interpolant(data, seed=args.seed)
    out = {"chain": chain.to_json(), "interpolant": F.to_json(), "expression": format_map(F)}
    return out


COMMANDS = {
    "check": cmd_check,
    "contact": cmd_contact,
    "construct": cmd_construct,
    "decompose": cmd_decompose,
    "combo": cmd_combo,
    "commutator": cmd_commutator,
    "interp": cmd_interp,
}


def _add_eps_flags(p):
    g = p.add_argument_group("tolerances")
    for f in dataclasses.fields(Tolerances):
        g.add_argument(
            "--eps-" + f.name.replace("_", "-"),
            dest="eps_" + f.name,
            type=type(f.default),
            default=None,
            help=f"default {f.default}",
        )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="essnormal",
        description="Classify and construct rational symbols with essentially normal composition operators.",
    )
    parser.add_argument("--json", action="store_true", help="read a request object from stdin")
    _add_eps_flags(parser)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check", help="essential-normality classification")
    p.add_argument("expr")
    p = sub.add_parser("contact", help="boundary contact profile")
    p.add_argument("expr")
    p = sub.add_parser("construct", help="generate a non-trivially essentially normal symbol")
    p.add_argument("--zeta", default="1")
    p.add_argument("--steps", default="", help="'s1,t1;s2,t2;...'")
    p.add_argument("--tail", default="i", help="constant or expression mapping the real line into H")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("decompose", help="decomposition into basic functions")
    p.add_argument("expr")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("combo", help="compactness of a linear combination")
    p.add_argument("--terms", required=True, help="'c1:expr1,c2:expr2,...'")
    p = sub.add_parser("commutator", help="finite-section self-commutator diagnostics")
    p.add_argument("expr")
    p.add_argument("--sizes", default="64,128,256")
    p.add_argument("--csv", nargs="?", const="-", default=None, help="singular values as CSV (file or stdout)")
    p = sub.add_parser("interp", help="boundary Caratheodory-Fejer interpolation")
    p.add_argument("--data", required=True, help='JSON {"n": n, "a": [[re,im],...]} or @file')
    p.add_argument("--seed", type=int, default=0)
    return parser


def _argv_from_request(obj):
    if not isinstance(obj, dict) or "command" not in obj:
        raise ParseError("request must be an object with a 'command' field", 0)
    # "--key=value" and a trailing "--" keep values such as "-i" from reading as flags
    argv = []
    for key, val in obj.get("tolerances", {}).items():
        argv.append(f"--eps-{key.replace('_', '-')}={val}")
    argv.append(str(obj["command"]))
    for key, val in obj.items():
        if key in ("command", "expr", "tolerances"):
            continue
        if isinstance(val, bool):
            if val:
                argv.append("--" + key)
            continue
        if isinstance(val, (dict, list)) and key == "data":
            val = json.dumps(val)
        argv.append(f"--{key.replace('_', '-')}={val}")
    if "expr" in obj:
        argv += ["--", str(obj["expr"])]
    return argv


def _fail(exc, stderr):
    json.dump(exc.to_dict(), stderr, default=_default)
    stderr.write("\n")
    return 3 if isinstance(exc, NumericalError) else 2


def main(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.json:
            try:
                req = json.load(stdin)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON request: {exc.msg}", exc.pos) from exc
            args = parser.parse_args(_argv_from_request(req))
        if not args.command:
            parser.print_usage(stderr)
            return 2
        overrides = {
            f.name: getattr(args, "eps_" + f.name)
            for f in dataclasses.fields(Tolerances)
            if getattr(args, "eps_" + f.name) is not None
        }
        with using_tolerances(**overrides):
            out = COMMANDS[args.command](args)
    except EssNormalError as exc:
        return _fail(exc, stderr)
    except ZeroDivisionError as exc:
        return _fail(ValidationError(str(exc)), stderr)
    except OSError as exc:
        return _fail(ValidationError(str(exc)), stderr)
    if isinstance(out, str):
        stdout.write(out)
    else:
        json.dump(out, stdout, indent=2, default=_default)
        stdout.write("\n")
    return 0


def run():
    sys.exit(main())
