"""Command-line driver.

Exit codes: 0 all checks pass, 1 any check fails, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import (
    REGISTRY,
    Cache,
    UsageError,
    aggregate_exit,
    load_reports,
    read_config,
    render_json,
    render_text,
    run,
    write_report,
)

PARAM_FLAGS = ("degree", "prime", "seed", "tol", "mode", "samples", "x", "y", "n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rsverify", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list-checks", help="list registered check ids")

    v = sub.add_parser("verify", help="run one check, or 'all'")
    v.add_argument("check")
    for name in PARAM_FLAGS:
        v.add_argument(f"--{name}", default=None)
    v.add_argument("--config", default=None, help="flat key=value file; flags override it")
    v.add_argument("--out", default="reports", help="report directory")
    v.add_argument("--timing", action="store_true", help="record elapsed_ms in the JSON report")
    v.add_argument("--quiet", action="store_true")

    r = sub.add_parser("report", help="aggregate report files")
    r.add_argument("paths", nargs="*")
    r.add_argument("--format", choices=("json", "text"), default="text")

    d = sub.add_parser("decompose", help="decompose a serialized character polynomial")
    d.add_argument("path", help="file with a serialized polynomial in a, b, c[, d]; '-' for stdin")
    d.add_argument("--nsl2", type=int, default=None)

    c = sub.add_parser("coset-enum", help="print the minimal double-coset representatives")
    c.add_argument("--format", choices=("json", "text"), default="text")

    o = sub.add_parser("orbit-table", help="orbit counts over F_q for all S")
    o.add_argument("--q", type=int, default=3)
    o.add_argument("--format", choices=("json", "text"), default="text")
    return ap


def _cmd_list(args, out):
    w = max(len(k) for k in REGISTRY)
    for k, spec in REGISTRY.items():
        defaults = " ".join(f"{n}={p.default}" for n, p in spec.params.items())
        out.write(f"{k.ljust(w)}  {spec.summary}" + (f"  [{defaults}]" if defaults else "") + "\n")
    return 0


def _cmd_verify(args, out):
    given = read_config(args.config) if args.config else {}
    for name in PARAM_FLAGS:
        val = getattr(args, name)
        if val is not None:
            given[name] = val
    ids = list(REGISTRY) if args.check == "all" else [args.check]
    for i in ids:
        if i not in REGISTRY:
            raise UsageError(f"unknown check {i!r}; see list-checks")
    # validate everything before running anything
    for i in ids:
        REGISTRY[i].resolve(given)
    cache = Cache()
    reps = []
    for i in ids:
        rep = run(i, given, cache)
        write_report(rep, args.out, timing=args.timing)
        reps.append(rep)
        if not args.quiet:
            out.write(f"{rep.check}: {rep.status} (residual {rep.residual})\n")
    return aggregate_exit(reps)


def _cmd_report(args, out):
    paths = args.paths or (["reports"] if Path("reports").is_dir() else [])
    reps = load_reports(paths)
    out.write(render_json(reps) if args.format == "json" else render_text(reps))
    return aggregate_exit(reps)


def _cmd_decompose(args, out):
    from ..chars import NotACharacter, decompose
    from ..exactalg import loads

    try:
        text = sys.stdin.read() if args.path == "-" else Path(args.path).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        p = loads(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse polynomial: {exc}") from exc
    nsl2 = args.nsl2 if args.nsl2 is not None else sum(1 for n in ("c", "d") if n in p.ctx.names)
    try:
        dec = decompose(p, nsl2)
    except NotACharacter as exc:
        out.write(json.dumps({"error": "not a character", "detail": str(exc)}) + "\n")
        return 1
    rows = [{"weight": list(w.as_tuple()), "mult": dec[w]} for w in sorted(dec, key=lambda w: w.as_tuple())]
    out.write(json.dumps({"nsl2": nsl2, "components": rows}, indent=2) + "\n")
    return 0


def _cmd_cosets(args, out):
    from ..weyl import WeylElt, min_double_coset_reps, signature

    reps = min_double_coset_reps()
    rows = [{"signature": list(signature(w)), "length": w.length(), "cycles": WeylElt(w.perm).cycle_string(),
             "perm": list(w.perm)} for w in reps]
    if args.format == "json":
        out.write(json.dumps({"total": len(rows), "reps": rows}, indent=2) + "\n")
        return 0
    sw = max(len(str(r["signature"])) for r in rows)
    for r in rows:
        out.write(f"{str(r['signature']).ljust(sw)}  length {r['length']:2d}  {r['cycles']}\n")
    out.write(f"total {len(rows)}\n")
    return 0


def _cmd_orbits(args, out):
    from ..weyl import orbit_table

    if args.q not in (3, 5, 7):
        raise UsageError("--q must be 3, 5 or 7")
    rep = orbit_table(args.q)
    if args.format == "json":
        out.write(json.dumps({"q": args.q, "status": rep.status, "rows": rep.details["rows"]},
                             indent=2, default=str) + "\n")
        return 1 if rep.status == "fail" else 0
    for row in rep.details["rows"]:
        S = "{" + ",".join(map(str, row["S"])) + "}"
        out.write(f"S={S:<8} orbits {row['orbits']}  expected {row['expected']}  {row['status']}\n")
    return 1 if rep.status == "fail" else 0


COMMANDS = {
    "list-checks": _cmd_list,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "decompose": _cmd_decompose,
    "coset-enum": _cmd_cosets,
    "orbit-table": _cmd_orbits,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"rsverify: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
