"""Command-line entry point: ``topquandle <command> [options]``.

Exit codes: 0 success, 1 a check found violations, 2 bad input,
3 budget exceeded or no numerical solutions retained.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import families, finite, geometric, solver
from .braid import BraidError, parse_braid
from .groups import GroupError, builtin_group, load_group
from .quandles import (QuandleError, alexander_quandle, conjugation_quandle, dihedral_quandle,
                       is_kei, load_quandle, trivial_quandle, verify_axioms)

GEOMETRIC_KINDS = ("sphere", "csphere", "proj", "grass", "sl2")
INPUT_ERRORS = (BraidError, QuandleError, GroupError, geometric.GeometryError, solver.SolverError,
                families.OracleError, ValueError, OSError, json.JSONDecodeError)


class CheckFailed(Exception):
    pass


class SolveFailed(Exception):
    pass


def finite_quandle(selector: str, check: bool = True):
    """dihedral:n | alexander:n:t | trivial:n | conj:<group>[:class=i] | table:<file>."""
    kind, _, rest = selector.partition(":")
    if kind == "dihedral":
        return dihedral_quandle(int(rest))
    if kind == "alexander":
        n, t = rest.split(":")
        return alexander_quandle(int(n), int(t))
    if kind == "trivial":
        return trivial_quandle(int(rest))
    if kind == "table":
        return load_quandle(rest, check=check)
    if kind == "conj":
        name, _, opt = rest.partition(":")
        group = load_group(name) if Path(name).is_file() else builtin_group(name)
        if not opt:
            return conjugation_quandle(group)
        if not opt.startswith("class="):
            raise QuandleError(f"unknown conj option {opt!r}; expected class=<index>")
        classes = group.conjugacy_classes()
        i = int(opt[len("class="):])
        if not 0 <= i < len(classes):
            raise QuandleError(f"class index {i} out of range; {group.name} has {len(classes)} classes")
        return conjugation_quandle(group, classes[i])
    raise QuandleError(f"unknown quandle selector {selector!r}")


def resolve_quandle(selector: str, check: bool = True):
    if selector.split(":", 1)[0] in GEOMETRIC_KINDS:
        return geometric.geometric_quandle(selector)
    return finite_quandle(selector, check)


def _braid(args):
    if args.braid_file:
        return parse_braid(Path(args.braid_file).read_text(encoding="utf-8").strip())
    if args.braid is None:
        raise BraidError("give --braid or --braid-file")
    return parse_braid(args.braid)


def _emit(doc, out):
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _need_finite(q, command):
    if isinstance(q, geometric.GeometricQuandle):
        raise QuandleError(f"{command} needs a finite quandle")
    return q


def cmd_check_quandle(args):
    q = resolve_quandle(args.quandle, check=False)
    if isinstance(q, geometric.GeometricQuandle):
        doc = {"quandle": q.selector, **geometric.check_axioms(q, args.samples, args.seed or 0)}
        doc["passed"] = all(doc[k] < 1e-10 for k in ("idempotence", "right_inverse", "self_distributivity"))
    else:
        report = verify_axioms(q)
        doc = {"quandle": q.name, "size": q.size, **report.to_json(), "kei": is_kei(q) if report.passed else None}
    _emit(doc, args.out)
    if not doc["passed"]:
        raise CheckFailed("quandle axioms fail")


def cmd_solve_finite(args):
    q = _need_finite(resolve_quandle(args.quandle), "solve-finite")
    fps = finite.fixed_points(_braid(args), q, budget=args.budget, workers=args.workers)
    _emit(finite.finite_report(fps, args.quandle, include_points=args.points), args.out)


def cmd_solve_geom(args):
    q = resolve_quandle(args.quandle)
    if not isinstance(q, geometric.GeometricQuandle):
        raise QuandleError("solve-geom needs a geometric quandle selector")
    overrides = {"seed": args.seed, "restarts": args.restarts, "refine_tol": args.refine_tol,
                 "cluster_eps": args.cluster_eps, "workers": args.workers}
    config = solver.SolveConfig(**{k: v for k, v in overrides.items() if v is not None})
    cloud = solver.sample_solutions(_braid(args), q, config)
    _emit(solver.report(cloud), args.out)
    if args.emit_points:
        solver.write_points_csv(cloud, args.emit_points)
    if len(cloud) == 0:
        raise SolveFailed("no solutions retained")


def cmd_markov_test(args):
    q = _need_finite(resolve_quandle(args.quandle), "markov-test")
    doc = finite.markov_trials(_braid(args), q, args.trials, seed=args.seed or 0, budget=args.budget)
    doc["quandle"] = args.quandle
    _emit(doc, args.out)
    if doc["violations"]:
        raise CheckFailed(f"{len(doc['violations'])} Markov violations")


def cmd_diagram_color(args):
    q = _need_finite(resolve_quandle(args.quandle), "diagram-color")
    if args.diagram:
        code = finite.load_diagram(args.diagram)
        source = args.diagram
    else:
        word = _braid(args)
        code = finite.closed_braid_diagram(word)
        source = str(word)
    count, colourings = finite.diagram_colourings(code, q, budget=args.budget, limit=args.limit)
    doc = {"diagram": source, "quandle": args.quandle, "arcs": code.arcs,
           "crossings": len(code.crossings), "count": count}
    if args.reverse:
        doc["reversed_count"] = finite.orientation_reversal_count(code, q, budget=args.budget)
    if args.points:
        doc["colourings"] = [list(c) for c in colourings]
    _emit(doc, args.out)


def cmd_oracle(args):
    if args.family in families.FAMILIES:
        pts = json.loads(Path(args.points).read_text(encoding="utf-8")) if args.points else {}
        doc = families.oracle_report(args.family, pts.get("a"), pts.get("b"), seed=args.seed or 0)
    else:
        doc = {"family": "sl2", "trials": args.trials,
               "max_residual": families.sl2_family_check(args.trials, args.seed or 0)}
    _emit(doc, args.out)


def build_parser():
    p = argparse.ArgumentParser(prog="topquandle", description="Quandle invariants of braid closures.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, braid=True):
        if braid:
            sp.add_argument("--braid", help='braid word, e.g. "B2: s1^-3"')
            sp.add_argument("--braid-file", help="file holding a braid word")
        sp.add_argument("--quandle", required=True, help="quandle selector")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--seed", type=int)
        sp.add_argument("-v", "--verbose", action="store_true", help="progress on standard error")

    sp = sub.add_parser("check-quandle", help="verify the quandle axioms")
    common(sp, braid=False)
    sp.add_argument("--samples", type=int, default=10_000, help="random triples for geometric quandles")
    sp.set_defaults(func=cmd_check_quandle)

    sp = sub.add_parser("solve-finite", help="enumerate braid fixed points over a finite quandle")
    common(sp)
    sp.add_argument("--budget", type=int, default=finite.DEFAULT_BUDGET)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--points", action="store_true", help="include the fixed points")
    sp.set_defaults(func=cmd_solve_finite)

    sp = sub.add_parser("solve-geom", help="sample the fixed-point variety over a geometric quandle")
    common(sp)
    sp.add_argument("--restarts", type=int)
    sp.add_argument("--refine-tol", type=float)
    sp.add_argument("--cluster-eps", type=float)
    sp.add_argument("--emit-points", help="CSV file for the refined cloud")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(func=cmd_solve_geom)

    sp = sub.add_parser("markov-test", help="check count invariance under Markov moves")
    common(sp)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--budget", type=int, default=finite.DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_markov_test)

    sp = sub.add_parser("diagram-color", help="count colourings of a diagram")
    common(sp)
    sp.add_argument("--diagram", help="diagram JSON; defaults to the closed-braid diagram of --braid")
    sp.add_argument("--reverse", action="store_true", help="also count with reversed orientation")
    sp.add_argument("--points", action="store_true", help="include the colourings")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--budget", type=int, default=finite.DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_diagram_color)

    sp = sub.add_parser("oracle", help="closed-form solution oracles")
    sp.add_argument("--family", required=True, choices=list(families.FAMILIES) + ["sl2"])
    sp.add_argument("--points", help='JSON {"a": [...], "b": [...]} for the great-circle oracle')
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        args.func(args)
    except (finite.BudgetExceeded, SolveFailed) as exc:
        print(f"topquandle: {exc}", file=sys.stderr)
        return 3
    except CheckFailed as exc:
        print(f"topquandle: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"topquandle: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
