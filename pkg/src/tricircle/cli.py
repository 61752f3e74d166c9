"""Command line entry point: ``tricircle {shortest,plan,reachable,sweep,validate}``.

Results are printed as tab-separated ``key<TAB>value`` lines; ``--json``,
``--csv`` and ``--svg`` write documents and figures alongside.

Exit codes: 0 ok, 1 validation failure or other planning error (e.g. an
inverted reachability gap), 2 degenerate input, 3 unreachable length,
4 no middle-circle locus, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .ccc import Family
from .errors import (
    DegeneratePairError,
    InvalidRadiusError,
    NoGuaranteeError,
    NoHyperbolaError,
    PlanningError,
    UnreachableLengthError,
)
from .geometry import OrientedPoint
from .io import TrajectoryDocument, sweep_rows, write_samples_csv, write_sweep_csv
from .oracle import Tolerances, validate
from .solver import LENGTH_RTOL, analyze_pair, minimal_trajectory, plan_detailed, plan_with_radii

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_UNREACHABLE, EXIT_NO_HYPERBOLA, EXIT_USAGE = 0, 1, 2, 3, 4, 64
VALUE_FLAGS = ("--a", "--b", "--r1", "--r3", "--length", "--rmin")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pose(text, degrees=False):
    try:
        x, y, h = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"expected x,y,theta but got {text!r}") from None
    if degrees:
        h = math.radians(h)
    try:
        return OrientedPoint(x, y, h)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(pairs, out=None):
    out = out or sys.stdout
    for key, value in pairs:
        print(f"{key}\t{value}", file=out)


def _fmt(x):
    return repr(float(x)) if x is not None else "none"


def _traj_lines(traj):
    r1, r2, r3 = traj.radii
    lines = [("word", traj.word), ("kind", traj.kind), ("length", _fmt(traj.length)),
             ("r1", _fmt(r1)), ("r2", _fmt(r2)), ("r3", _fmt(r3)), ("k", _fmt(traj.k))]
    for i, c in enumerate(traj.changeovers, 1):
        lines.append((f"c{i}", f"{c[0]!r},{c[1]!r}"))
    return lines


def _write_doc(doc, path):
    if path == "-":
        print(doc.dumps())
    else:
        doc.save(path)


def _figure(args, trajs, a, b, title):
    if args.svg:
        from .plotting import plot_trajectories

        plot_trajectories(trajs, a, b, args.svg, title=title)


def cmd_shortest(args):
    a, b = _pose(args.a, args.degrees), _pose(args.b, args.degrees)
    pa = analyze_pair(a, b, args.rmin)
    traj = minimal_trajectory(a, b, args.rmin)
    _emit(_traj_lines(traj) + [("category", pa.pair_class.category),
                               ("memberships", ",".join(sorted(pa.pair_class.memberships)) or "none")])
    doc = TrajectoryDocument.from_trajectory(traj, a, b, args.rmin, None, "dubins")
    if args.json:
        _write_doc(doc, args.json)
    _figure(args, [traj], a, b, f"shortest {traj.word}")
    return doc


def cmd_plan(args):
    a, b = _pose(args.a, args.degrees), _pose(args.b, args.degrees)
    if args.length is None:
        raise UsageError("plan needs --length")
    if (args.r1 is None) != (args.r3 is None):
        raise UsageError("--r1 and --r3 must be given together")
    if args.r1 is not None:
        traj = plan_with_radii(a, b, args.r1, args.r3, args.rmin, args.length)
        solver, switches = "plan_with_radii", 0
    else:
        res = plan_detailed(a, b, args.rmin, args.length)
        traj, solver, switches = res.trajectory, f"plan/{res.strategy}", len(res.switches)
    report = validate(traj, a, b, args.rmin)
    _emit(_traj_lines(traj) + [("requested", _fmt(args.length)), ("solver", solver),
                               ("switches", switches), ("oracle", "pass" if report.passed else "fail")])
    doc = TrajectoryDocument.from_trajectory(traj, a, b, args.rmin, args.length, solver,
                                             {"length_rtol": LENGTH_RTOL})
    if args.json:
        _write_doc(doc, args.json)
    if args.csv:
        write_samples_csv(args.csv, traj)
    _figure(args, [traj], a, b, f"{traj.word}  l = {traj.length:.3f} m")
    return doc


def cmd_reachable(args):
    a, b = _pose(args.a, args.degrees), _pose(args.b, args.degrees)
    pa = analyze_pair(a, b, args.rmin)
    rs = pa.reachable
    _emit([("reachable", str(rs)), ("l_m", _fmt(rs.minimum)), ("category", pa.pair_class.category)]
          + ([("l1", _fmt(rs.gap[0])), ("l2", _fmt(rs.gap[1]))] if rs.gap else []))
    if args.json:
        payload = dict(rs.to_dict(), category=pa.pair_class.category, l_m=rs.minimum)
        text = json.dumps(payload, indent=2, ensure_ascii=False)
        if args.json == "-":
            print(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    return rs


def cmd_sweep(args):
    a, b = _pose(args.a, args.degrees), _pose(args.b, args.degrees)
    if args.r1 is None or args.r3 is None:
        raise UsageError("sweep needs --r1 and --r3")
    if args.grid < 16:
        raise UsageError("--grid must be at least 16")
    family = Family(a, b, args.r1, args.r3)
    rows = sweep_rows(family, args.grid, args.rmin if args.rmin_given else None)
    write_sweep_csv(args.csv if args.csv else sys.stdout, rows)
    if args.svg:
        from .plotting import plot_sweep

        plot_sweep(rows, args.svg, title=f"l(k) for r1={args.r1:g}, r3={args.r3:g}")
    return rows


def cmd_validate(args):
    if not args.json:
        raise UsageError("validate needs --json PATH of a trajectory document")
    doc = TrajectoryDocument.load(args.json)
    traj = doc.to_trajectory()
    r_min = args.rmin if args.rmin_given else doc.meta["r_min"]
    tol = Tolerances() if args.tol is None else Tolerances(position=args.tol, heading=args.tol)
    report = validate(traj, doc.start, doc.goal, r_min, tol=tol)
    _emit([("oracle", "pass" if report.passed else "fail"), ("summary", report.summary())])
    return report


def build_parser():
    p = Parser(prog="tricircle", description="Curvature-bounded three-arc trajectories of a given length.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def common(sp, poses=True):
        if poses:
            sp.add_argument("--a", required=True, help="start pose x,y,theta")
            sp.add_argument("--b", required=True, help="goal pose x,y,theta")
        sp.add_argument("--rmin", type=float, default=None, help="minimum turning radius (default 1)")
        sp.add_argument("--degrees", action="store_true", help="read theta in degrees")
        sp.add_argument("--json", metavar="PATH", help="write a JSON document ('-' for stdout)")
        sp.add_argument("--tol", type=float, default=None, help="oracle position/heading tolerance")

    sp = sub.add_parser("shortest", help="Dubins shortest path")
    common(sp)
    sp.add_argument("--svg", metavar="PATH")
    sp.set_defaults(func=cmd_shortest)

    sp = sub.add_parser("plan", help="trajectory of a desired length")
    common(sp)
    sp.add_argument("--length", type=float)
    sp.add_argument("--r1", type=float)
    sp.add_argument("--r3", type=float)
    sp.add_argument("--csv", metavar="PATH", help="sampled poses")
    sp.add_argument("--svg", metavar="PATH", help="figure (.svg or .png)")
    sp.set_defaults(func=cmd_plan)

    sp = sub.add_parser("reachable", help="set of reachable lengths")
    common(sp)
    sp.set_defaults(func=cmd_reachable)

    sp = sub.add_parser("sweep", help="l(k) over both branches as CSV")
    common(sp)
    sp.add_argument("--r1", type=float)
    sp.add_argument("--r3", type=float)
    sp.add_argument("--grid", type=int, default=1024)
    sp.add_argument("--csv", metavar="PATH", help="output path (default stdout)")
    sp.add_argument("--svg", metavar="PATH", help="plot of l(k)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="oracle check of a JSON trajectory document")
    common(sp, poses=False)
    sp.set_defaults(func=cmd_validate)
    return p


def _join_values(argv):
    """Glue value flags to their values so negative numbers are not read as options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_join_values(argv))
    args.rmin_given = args.rmin is not None
    if args.rmin is None:
        args.rmin = 1.0
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tricircle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnreachableLengthError as exc:
        print(f"unreachable\t{exc.length!r}", file=sys.stderr)
        _emit([("reachable", str(exc.reachable))])
        return EXIT_UNREACHABLE
    except NoGuaranteeError as exc:
        print(f"tricircle: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except NoHyperbolaError as exc:
        print(f"tricircle: {exc}", file=sys.stderr)
        return EXIT_NO_HYPERBOLA
    except InvalidRadiusError as exc:
        print(f"tricircle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegeneratePairError as exc:
        print(f"tricircle: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PlanningError as exc:  # includes GapInversionError
        print(f"tricircle: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.command == "validate" and not result.passed:
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
