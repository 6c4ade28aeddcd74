"""Command line interface: ``stw validate``, ``stw twist``, ``stw suite``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .algebra import algebra_from_json, find_symmetric_form
from .catalog import parse_algebra_spec, string_module
from .errors import AlgebraError, BadParameter, HypothesisFailed, ParseError, StwError
from .module import Module, module_from_json, regular_module, simple_module
from .stable import grothendieck_class, is_stably_isomorphic, omega_power, stable_hom
from .suite import SCHEMA_VERSION, run_suite, suite_report
from .twist import TwistContext, hypothesis_report, pn_twist, spherical_twist

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(report: dict, path: str | None):
    report = dict(report, schema_version=SCHEMA_VERSION)
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def _jsonable(v):
    if hasattr(v, "tolist"):
        return v.tolist()
    if hasattr(v, "item"):
        return v.item()
    raise TypeError("not serialisable: %r" % type(v))


def load_json(path: str) -> dict:
    if not os.path.exists(path):
        raise ParseError("no such file: %s" % path)
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError("cannot parse %s: %s" % (path, exc)) from exc


def load_algebra(spec: str, check: bool = True):
    """A catalog spec such as ``dihedral:q=2:p=2`` or a JSON file path."""
    if os.path.exists(spec) or spec.endswith(".json"):
        doc = load_json(spec)
        try:
            return algebra_from_json(doc, check=check)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, StwError):
                raise
            raise ParseError("malformed algebra document: %s" % exc) from exc
    try:
        return parse_algebra_spec(spec)
    except BadParameter as exc:
        raise ParseError(str(exc)) from exc


def load_module(spec: str, ctx: TwistContext) -> Module:
    alg = ctx.algebra
    if spec == "simple":
        return simple_module(alg)
    if spec == "regular":
        return regular_module(alg)
    if spec == "T":
        return ctx.T
    if spec.startswith("string:"):
        return string_module(alg, spec.split(":", 1)[1])
    doc = load_json(spec)
    try:
        return module_from_json(doc, alg)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StwError):
            raise
        raise ParseError("malformed module document: %s" % exc) from exc


# commands

def cmd_validate(args) -> int:
    report = {"command": "validate", "source": args.algebra}
    try:
        alg = load_algebra(args.algebra, check=True)
    except AlgebraError as exc:
        report.update(valid=False, error=type(exc).__name__, message=str(exc),
                      witness=getattr(exc, "witness", None))
        print("invalid: %s: %s" % (type(exc).__name__, exc))
        _emit(report, args.json)
        return EXIT_FAIL
    report.update(valid=True, p=alg.p, dim=alg.dim, loewy_length=alg.loewy_length)
    try:
        form = find_symmetric_form(alg, seed=args.seed)
        report.update(symmetric=True, symmetric_form=form.functional.tolist())
        summary = "local symmetric, d=%d" % alg.dim
    except StwError as exc:
        report.update(symmetric=False, symmetric_note=str(exc))
        summary = "local, not certified symmetric, d=%d" % alg.dim
        if args.strict_symmetric:
            print(summary)
            _emit(report, args.json)
            return EXIT_FAIL
    report["summary"] = summary
    print(summary)
    _emit(report, args.json)
    return EXIT_OK


def cmd_export(args) -> int:
    alg = load_algebra(args.algebra)
    doc = dict(alg.to_json(), name=alg.name)
    text = json.dumps(doc, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_twist(args) -> int:
    alg = load_algebra(args.alg)
    ctx = TwistContext(alg, args.x, y=args.y, n=args.n, seed=args.seed)
    mod = load_module(args.module, ctx)
    report = {"command": "twist", "algebra": alg.name, "kind": args.kind, "x": args.x,
              "y": args.y, "module": args.module, "iterations": args.iter}
    hyp = hypothesis_report(ctx)
    report["hypotheses"] = hyp.to_dict()
    try:
        twist = spherical_twist if args.kind == "spherical" else pn_twist
        out = mod
        for _ in range(args.iter):
            out = twist(ctx, out)
    except HypothesisFailed as exc:
        report.update(error=type(exc).__name__, message=str(exc))
        print("hypothesis failed: %s: %s" % (type(exc).__name__, exc))
        _emit(report, args.json)
        return EXIT_FAIL
    report.update(dim=out.dim, grothendieck_class=grothendieck_class(out).value,
                  stable_end_dim=stable_hom(out, out).stable_dim)
    lines = ["dim %d, class %d mod %d, stable End dim %d" % (
        out.dim, report["grothendieck_class"], alg.dim, report["stable_end_dim"])]
    status = EXIT_OK
    if args.compare:
        kind, _, shift = args.compare.partition(":")
        if kind != "omega":
            raise UsageError("--compare must look like omega:K")
        shift = int(shift)
        res = is_stably_isomorphic(out, omega_power(mod, shift), seed=args.seed)
        text = {"yes": "stably isomorphic", "no": "not stably isomorphic",
                "unknown": "inconclusive"}[res.verdict]
        report["compare"] = {"against": "omega^%d" % shift, "verdict": text, "reason": res.reason}
        lines.append("%s to Omega^%d of the input (%s)" % (text, shift, res.reason))
        if args.expect and args.expect != res.verdict:
            status = EXIT_FAIL
    print("\n".join(lines))
    _emit(report, args.json)
    return status


def cmd_suite(args) -> int:
    start = time.perf_counter()
    results = run_suite(args.level, seed=args.seed, jobs=args.jobs,
                        cases=args.case or None)
    for r in results:
        print("%-24s %-12s %6.1fs" % (r.case, r.verdict, r.wall_time))
        for failure in r.details.get("failures", []):
            print("    " + failure)
        if "error" in r.details:
            print("    " + r.details["error"])
    print("total %.1fs" % (time.perf_counter() - start))
    _emit(suite_report(results, args.level, args.seed, timing=args.timing), args.json)
    return EXIT_OK if all(r.verdict != "fail" for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stw", description="Stable twist functors over prime fields.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="validate an algebra file or catalog spec")
    p.add_argument("algebra")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-symmetric", action="store_true",
                   help="treat a missing symmetric form as a failure")
    p.add_argument("--json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="write a catalog algebra as JSON")
    p.add_argument("algebra")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("twist", help="apply a twist functor to a module")
    p.add_argument("--alg", required=True)
    p.add_argument("--kind", choices=["spherical", "pn"], required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p.add_argument("--n", type=int)
    p.add_argument("--module", default="simple",
                   help="simple, regular, T, string:WORD or a module JSON file")
    p.add_argument("--iter", type=int, default=1)
    p.add_argument("--compare", help="omega:K compares with Omega^K of the input")
    p.add_argument("--expect", choices=["yes", "no"], help="exit 1 unless the comparison agrees")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("suite", help="run the acceptance suite")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--case", action="append", help="run only this case (repeatable)")
    p.add_argument("--timing", action="store_true", help="include wall times in the JSON report")
    p.add_argument("--json")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print("unknown name: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except StwError as exc:
        print("%s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
