"""Command-line interface: structural reports, basis and ideal listings,
series coefficients, and both evolution solvers, all emitting JSON.

Exit codes: 0 success, 1 validation error (bad flags, bad files, bad
expressions), 2 desk-scale size guard.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import expressions, firstorder, heat, ideals, liealg, trees
from .errors import ExpressionError, SizeGuardError, TreeValidationError

__all__ = ["main", "run_cli"]


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="treelie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="dimension, nilpotence, center, node sets")
    p.add_argument("tree", help="tree JSON file")
    p.add_argument("--direction", choices=["up", "down"], default="up")

    p = sub.add_parser("basis", help="monomial basis listing")
    p.add_argument("tree")
    p.add_argument("--direction", choices=["up", "down"], default="up")

    p = sub.add_parser("ideals", help="abelian ideal enumeration")
    p.add_argument("tree")
    p.add_argument("--direction", choices=["up", "down"], default="up")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--oracle", action="store_true", help="cross-check with the downset oracle")

    p = sub.add_parser("bch", help="exponential-regrouping series coefficients")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("solve-first", help="first-order evolution solution")
    p.add_argument("tree")
    p.add_argument("--f", required=True, help="initial data expression")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", required=True, help="comma-separated coordinates")
    p.add_argument("--emit-eta", action="store_true")
    p.add_argument("--verify", choices=["exact", "numeric"])

    p = sub.add_parser("solve-heat", help="heat-type evolution solution")
    p.add_argument("tree")
    p.add_argument("--orders", required=True, help="comma-separated derivative orders")
    p.add_argument("--f", required=True)
    p.add_argument("--box", required=True, help="comma-separated half-widths")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--eval", dest="eval_point", required=True, help="t,x1,...,xn")
    p.add_argument("--csv", dest="csv_path", help="dump a solution grid at time t")
    p.add_argument("--csv-grid", type=int, default=10)
    return parser


def _csv_floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"bad float list {text!r}: {exc}")


def _csv_ints(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise _CliError(f"bad integer list {text!r}: {exc}")


def _load(path: str) -> trees.TreeDiagram:
    try:
        return trees.load_tree(path)
    except FileNotFoundError:
        raise _CliError(f"tree file not found: {path}")
    except json.JSONDecodeError as exc:
        raise _CliError(f"tree file is not valid JSON: {exc}")


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, ensure_ascii=False) + "\n")


def _cmd_info(ns) -> dict:
    tree = _load(ns.tree)
    cls = trees.classify_nodes(tree)
    dim, nilp = liealg.dim_and_nilpotence(tree, ns.direction)
    report = liealg.verify_structure(tree, ns.direction)
    center = []
    for element in report.center_basis:
        ((exps, dvar),) = element.terms.keys()  # center vectors are plain derivatives
        center.append(f"d{dvar}")
    return {
        "n": tree.n,
        "direction": ns.direction,
        "dim": dim,
        "nilpotence": nilp,
        "tips": list(cls.tips),
        "upsilon": list(cls.upsilon),
        "phi": list(cls.phi),
        "omega": list(cls.omega),
        "center": sorted(center),
        "closure": report.closure,
        "central_series_dims": list(report.central_series_dims),
    }


def _cmd_basis(ns) -> dict:
    tree = _load(ns.tree)
    basis = liealg.enumerate_basis(tree, ns.direction)
    return {
        "direction": ns.direction,
        "dim": len(basis),
        "basis": [
            {"coeff": str(m.coeff), "exps": list(m.exps), "d": m.dvar} for m in basis
        ],
    }


def _cmd_ideals(ns) -> dict:
    tree = _load(ns.tree)
    maximal = ideals.maximal_ideals(tree, ns.direction)
    oracle_checked = False
    if ns.count_only:
        count = ideals.enumerate_ideals(tree, ns.direction, mode="count")
        listing = None
    else:
        listing = ideals.enumerate_ideals(tree, ns.direction, mode="list")
        count = len(listing)
    if ns.oracle:
        oracle = ideals.brute_force_ideals(tree, ns.direction)
        enumerated = listing
        if enumerated is None:
            enumerated = ideals.enumerate_ideals(tree, ns.direction, mode="list")
        got = sorted(i.canonical() for i in enumerated)
        if got != sorted(oracle):
            raise AssertionError("enumeration disagrees with the downset oracle")
        oracle_checked = True
    doc = {
        "direction": ns.direction,
        "count": count,
        "maximal_count": len(maximal),
        "oracle_checked": oracle_checked,
    }
    if listing is not None:
        doc["ideals"] = [
            {
                "roots": [list(r) for r in ideal.canonical()],
                "dim": ideal.dim,
                "maximal": bool(ideal.maximal),
            }
            for ideal in listing
        ]
    return doc


def _cmd_bch(ns) -> dict:
    if ns.k < 0:
        raise _CliError("--k must be nonnegative")
    data = firstorder.bch_coefficients(ns.k)
    return {
        "k": ns.k,
        "a": [str(v) for v in data.a],
        "theta": [str(v) for v in data.theta],
    }


def _cmd_solve_first(ns) -> dict:
    tree = _load(ns.tree)
    x = _csv_floats(ns.x)
    if len(x) != tree.n:
        raise _CliError(f"expected {tree.n} coordinates, got {len(x)}")
    ast = expressions.parse_expression(ns.f, tree.n)
    solution = firstorder.solve_first_order(tree, ast)
    doc = {"u": solution(ns.t, x)}
    if ns.emit_eta:
        doc["eta"] = [str(solution.family.eta[i]) for i in range(1, tree.n + 1)]
    if ns.verify:
        report = firstorder.verify_first_order(tree, ast, mode=ns.verify)
        doc["verified"] = bool(report.ok)
    return doc


def _cmd_solve_heat(ns) -> dict:
    tree = _load(ns.tree)
    orders = _csv_ints(ns.orders)
    box = _csv_floats(ns.box)
    point = _csv_floats(ns.eval_point)
    if len(point) != tree.n + 1:
        raise _CliError(f"--eval needs t plus {tree.n} coordinates")
    t, x = point[0], point[1:]
    solution = heat.solve_heat(tree, orders, ns.f, box, ns.modes, ns.samples)
    check = heat.verify_modes(tree, orders)
    doc = {
        "u": solution(t, x),
        "modes_used": solution.modes_used,
        "verify_modes": bool(check.ok),
    }
    if ns.csv_path:
        _dump_csv(solution, t, ns.csv_path, ns.csv_grid)
        doc["csv"] = ns.csv_path
    return doc


def _dump_csv(solution: heat.HeatSolution, t: float, path: str, grid: int) -> None:
    n = solution.tree.n
    axes = [np.linspace(-a, a, grid) for a in solution.box]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"x{i}" for i in range(1, n + 1)] + ["u"])
        idx = [0] * n
        while True:
            x = [axes[d][idx[d]] for d in range(n)]
            writer.writerow([repr(t)] + [repr(v) for v in x] + [repr(solution(t, x))])
            d = n - 1
            while d >= 0:
                idx[d] += 1
                if idx[d] < grid:
                    break
                idx[d] = 0
                d -= 1
            if d < 0:
                break


_COMMANDS = {
    "info": _cmd_info,
    "basis": _cmd_basis,
    "ideals": _cmd_ideals,
    "bch": _cmd_bch,
    "solve-first": _cmd_solve_first,
    "solve-heat": _cmd_solve_heat,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        doc = _COMMANDS[ns.command](ns)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TreeValidationError, ExpressionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 2
    _emit(doc)
    return 0


def main(argv=None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
