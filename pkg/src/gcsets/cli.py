"""``gcn``: generate, analyze, verify and draw GC_n node sets.

Exit codes: 0 success, 1 a theorem check failed, 2 generation failure,
malformed input or unwritable output, 3 invalid arguments, 4 node set not
n-correct (or, for ``usage``, not GC), 5 the requested line has fewer than
two nodes.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from typing import Sequence

from .constructors import FAMILIES, MIN_DEGREE, generate
from .errors import GenerationFailed, MalformedInput, TooFewNodes
from .gcset import analyze
from .geom import canonical_line, line_through, rat, Point
from .serialize import dumps, load_nodeset, nodeset_to_json
from .svg import render_svg
from .usage import all_usage_reports, usage_census, used_line_catalog, used_nodes_pipeline
from .verify import CHECKERS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ARGS, EXIT_NOT_CORRECT, EXIT_FEW_NODES = 0, 1, 2, 3, 4, 5

CSV_FIELDS = ("line", "class", "k", "r", "r_hat", "s", "users_count")


class UsageError(Exception):
    """Invalid command line arguments (exit 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rationals(text: str, count: int, what: str):
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated rationals, got {text!r}")
    try:
        return [rat(p.strip()) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational in {what} {text!r}: {exc}") from None


def _default_seed() -> int:
    raw = os.environ.get("GCN_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"GCN_SEED must be an integer, got {raw!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise MalformedInput(f"cannot write {out}: {exc}") from exc


def _load(path: str):
    try:
        return load_nodeset(path)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def _summary(X) -> str:
    ctx = X.context
    M = ctx.maximal_lines_in()
    return f"N={ctx.N} #M={len(M)} defect={X.degree + 2 - len(M)}"


# -- subcommands -------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.degree < MIN_DEGREE[args.family]:
        raise UsageError(f"{args.family} needs degree >= {MIN_DEGREE[args.family]}")
    seed = args.seed if args.seed is not None else _default_seed()
    if seed < 0:
        raise UsageError("seed must be nonnegative")
    kw = {}
    for name in ("bound", "retries"):
        value = getattr(args, name)
        if value is None:
            continue
        if args.family == "principal":
            raise UsageError(f"--{name} does not apply to the principal family")
        if value < 1:
            raise UsageError(f"--{name} must be positive")
        kw[name] = value
    if args.transform is not None:
        if args.family != "principal":
            raise UsageError("--transform only applies to the principal family")
        a, b, c, d, e, f = _rationals(args.transform, 6, "--transform")
        kw["transform"] = (((a, b), (c, d)), (e, f))
    try:
        X = generate(args.family, args.degree, seed, **kw)
    except GenerationFailed as exc:
        print(f"gcn: generation failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(dumps(nodeset_to_json(X)), args.out)
    print(_summary(X), file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK


def cmd_analyze(args) -> int:
    X = _load(args.input)
    report = analyze(X)
    if not report.n_correct:
        print("gcn: node set is not n-correct", file=sys.stderr)
        return EXIT_NOT_CORRECT
    doc = {"analysis": report.to_json(), "catalog": None, "census": None}
    if report.is_gc:
        doc["catalog"] = used_line_catalog(X).to_json()
        total, per_line = usage_census(X)
        doc["census"] = {"total": total, "per_line": [[l.to_json(), c] for l, c in per_line.items()]}
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _usage_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        w.writerow([" ".join(map(str, r.line.to_json())), r.label, r.k, r.r, r.r_hat,
                    "" if r.s is None else r.s, len(r.users)])
    return buf.getvalue()


def cmd_usage(args) -> int:
    X = _load(args.input)
    ctx = X.context
    if not ctx.is_gc:
        print("gcn: node set is not a GC set", file=sys.stderr)
        return EXIT_NOT_CORRECT
    if args.line is not None:
        try:
            line = canonical_line(*_rationals(args.line, 3, "--line"))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.through is not None:
        x1, y1, x2, y2 = _rationals(args.through, 4, "--through")
        try:
            line = line_through(Point(x1, y1), Point(x2, y2))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        line = None
    if line is None:
        reports = all_usage_reports(X)
    else:
        try:
            reports = [used_nodes_pipeline(X, line)]
        except TooFewNodes as exc:
            print(f"gcn: {exc}", file=sys.stderr)
            return EXIT_FEW_NODES
    if args.format == "csv":
        _emit(_usage_csv(reports), args.out)
    else:
        doc = reports[0].to_json() if line is not None else [r.to_json() for r in reports]
        _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    X = _load(args.input)
    if args.theorems == "all":
        ids = "all"
    else:
        ids = [t.strip() for t in args.theorems.split(",") if t.strip()]
        unknown = [t for t in ids if t not in CHECKERS]
        if unknown or not ids:
            raise UsageError(f"unknown theorem ids {unknown}; known: {', '.join(sorted(CHECKERS))}")
    bundle = run_checks(X, ids)
    _emit(dumps(bundle.to_json()), args.out)
    failed = [r.theorem_id for r in bundle.reports if r.status == "fail"]
    if failed:
        print(f"gcn: failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_export(args) -> int:
    X = _load(args.input)
    if args.svg is None and args.json is None and args.csv is None:
        raise UsageError("export needs at least one of --svg, --json, --csv")
    ctx = X.context
    if not ctx.is_gc:
        print("gcn: node set is not a GC set", file=sys.stderr)
        return EXIT_NOT_CORRECT
    prov = X.provenance
    title = f"{prov.family} n={X.degree}" if prov else f"n={X.degree}"
    if args.svg is not None:
        _emit(render_svg(X, title), args.svg)
    if args.json is not None:
        _emit(dumps([r.to_json() for r in all_usage_reports(X)]), args.json)
    if args.csv is not None:
        _emit(_usage_csv(all_usage_reports(X)), args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gcn", description="Exact analysis of GC_n interpolation node sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="build a family instance")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--degree", required=True, type=int)
    g.add_argument("--seed", type=int, default=None, help="default: $GCN_SEED or 0")
    g.add_argument("--bound", type=int, help="coefficient bound for random lines and points")
    g.add_argument("--retries", type=int, help="rejection-sampling attempts before giving up")
    g.add_argument("--transform", help="a,b,c,d,e,f for p -> [[a,b],[c,d]] p + (e,f) (principal only)")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="maximal lines, defect, used-line catalog, census")
    a.add_argument("input")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    u = sub.add_parser("usage", help="nodes using a line (all lines when none is given)")
    u.add_argument("input")
    grp = u.add_mutually_exclusive_group()
    grp.add_argument("--line", help="a,b,c for a*x + b*y + c = 0 (use --line=-1,0,2 for a leading minus)")
    grp.add_argument("--through", help="x1,y1,x2,y2")
    u.add_argument("--format", choices=("json", "csv"), default="json")
    u.add_argument("--out")
    u.set_defaults(func=cmd_usage)

    v = sub.add_parser("verify", help="run the theorem checkers")
    v.add_argument("input")
    v.add_argument("--theorems", default="all", help="'all' or comma-separated ids: " + ", ".join(sorted(CHECKERS)))
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="write SVG figure and usage reports")
    e.add_argument("input")
    e.add_argument("--svg")
    e.add_argument("--json")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_export)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"gcn: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except MalformedInput as exc:
        print(f"gcn: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
