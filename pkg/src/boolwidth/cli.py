"""Command-line interface: ``boolwidth <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import experiments as ex
from .cuts import DEFAULT_CAP, DEFAULT_LIMIT, CutStats, cut_stats
from .decomposition import (Bounds, TreeError, build_greedy_tree, build_random_tree,
                            cutbool_function, cutcar_function, exact_boolw, f_width,
                            local_search_improve, parse_tree)
from .graph import (GenerationError, GraphFormatError, OddDegreeSumError, gen_gnp,
                    gen_random_regular, members, parse_graph, write_graph)
from .sigmarho import CapExceeded, ProblemSpecError, parse_problem, solve_sigma_rho

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_CAP = 5
EXIT_CONFIG = 6
EXIT_VIOLATION = 7


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_graph(path: str):
    with open(path) as fh:
        return parse_graph(fh.read())


def _read_tree(path: str, n: int):
    with open(path) as fh:
        return parse_tree(fh.read(), n)


def _fmt_width(w) -> str:
    if isinstance(w, Bounds):
        return f"[{w.lower:.6f}, {w.upper:.6f}]"
    return f"{w:.6f}"


def _heuristic_tree(g, method: str, seed: int, budget: int):
    if method == "random" or g.n < 2:
        tree = build_random_tree(g, seed)
    elif method == "greedy":
        tree = build_greedy_tree(g, seed)
    elif method == "exact":
        tree = exact_boolw(g)[1]
    else:
        raise ValueError(f"unknown tree method {method!r}")
    if budget > 0:
        tree = local_search_improve(g, tree, budget)
    return tree


def cmd_gen(args) -> int:
    if args.model == "gnp":
        g = gen_gnp(args.n, args.p, args.seed)
    else:
        g = gen_random_regular(args.n, args.d, args.seed)
    _emit(write_graph(g), args.out)
    return EXIT_OK


def cmd_cutstats(args) -> int:
    g = _read_graph(args.graph)
    if args.side is not None:
        sides = [sum(1 << int(v) for v in args.side.split(",") if v.strip())]
    else:
        rng = ex.substream(args.seed, 0)
        sides = [ex.random_cut(rng, g.n) for _ in range(args.trials)]
    buf = io.StringIO()
    buf.write(f"# schema={ex.SCHEMA}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CutStats.CSV_FIELDS)
    for a in sides:
        writer.writerow(cut_stats(g, a, args.cap, args.limit).csv_row())
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    tree = _heuristic_tree(g, args.method, args.seed, args.improve)
    _emit(tree.to_string() + "\n", args.out)
    return EXIT_OK


def cmd_width(args) -> int:
    g = _read_graph(args.graph)
    tree = _read_tree(args.tree, g.n)
    f = cutbool_function(g, args.cap, args.limit) if args.function == "cutbool" else cutcar_function(g)
    buf = io.StringIO()
    buf.write(f"# schema={ex.SCHEMA}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["edge", "side", "value_lower", "value_upper"])
    for c in tree.all_cuts():
        v = f(c.side)
        lo, hi = (v.lower, v.upper) if isinstance(v, Bounds) else (v, v)
        writer.writerow([c.edge, " ".join(map(str, members(c.side))), ex.fmt(float(lo)), ex.fmt(float(hi))])
    if args.out:
        _emit(buf.getvalue(), args.out)
    print(f"width {_fmt_width(f_width(tree, f))}")
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    prob = parse_problem(args.problem)
    tree = _read_tree(args.tree, g.n) if args.tree else _heuristic_tree(g, args.heuristic, args.seed, 0)
    try:
        sol = solve_sigma_rho(g, tree, prob, args.cap)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(f"tree {tree.to_string()}")
    print(f"width {_fmt_width(f_width(tree, cutbool_function(g)))}")
    for side, inner, outer in sol.class_counts:
        print(f"classes {' '.join(map(str, members(side))) or '-'} : {inner} inner, {outer} outer")
    if not sol.feasible:
        print("infeasible")
        return EXIT_INFEASIBLE
    print(f"optimum {sol.size}")
    print(f"witness {' '.join(map(str, members(sol.witness)))}")
    return EXIT_OK


def _grid(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _finish(table: ex.Table, out: str | None) -> int:
    _emit(table.to_csv(), out)
    for note in table.notes:
        print(note, file=sys.stderr)
    print(f"{table.experiment}: {len(table.rows)} rows, {table.violations} violations", file=sys.stderr)
    return EXIT_OK


def cmd_exp_expansion(args) -> int:
    table = ex.cmd_expansion_check(args.n, args.p, args.samples, args.seed)
    if table.violations:
        print(f"violation witness: {table.rows[0][-1]}", file=sys.stderr)
    return _finish(table, args.out)


def cmd_exp_growth(args) -> int:
    table = ex.cmd_gnp_growth(_grid(args.ns), args.p, args.trials, args.seed, args.cap, args.limit,
                              greedy=not args.no_greedy)
    return _finish(table, args.out)


def cmd_exp_regular(args) -> int:
    table = ex.cmd_regular_lower(_grid(args.ns), args.d, args.trials, args.seed, args.cap, args.limit)
    return _finish(table, args.out)


def cmd_exp_sandwich(args) -> int:
    table = ex.cmd_sandwich(args.n, args.p, args.cuts, args.seed, args.graphs, args.cap, args.limit)
    code = _finish(table, args.out)
    return EXIT_VIOLATION if table.violations else code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boolwidth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=None):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
        if trials is not None:
            p.add_argument("--trials", type=int, default=trials)
        return p

    p = common(sub.add_parser("gen", help="generate a random graph"))
    p.add_argument("model", choices=["gnp", "regular"])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=float, default=0.5)
    p.add_argument("-d", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = common(sub.add_parser("cutstats", help="cut statistics as CSV"), trials=10)
    p.add_argument("graph")
    p.add_argument("--side", default=None, help="comma-separated vertices of A")
    p.set_defaults(func=cmd_cutstats)

    p = common(sub.add_parser("decompose", help="build a decomposition tree"))
    p.add_argument("graph")
    p.add_argument("--method", choices=["random", "greedy", "exact"], default="greedy")
    p.add_argument("--improve", type=int, default=0, help="local search budget")
    p.set_defaults(func=cmd_decompose)

    p = common(sub.add_parser("width", help="width of a tree under a cut function"))
    p.add_argument("graph")
    p.add_argument("tree")
    p.add_argument("--function", choices=["cutbool", "cutcar"], default="cutbool")
    p.set_defaults(func=cmd_width)

    p = common(sub.add_parser("solve", help="solve a (sigma, rho) problem"))
    p.add_argument("graph")
    p.add_argument("problem")
    p.add_argument("--tree", default=None)
    p.add_argument("--heuristic", choices=["random", "greedy"], default="greedy")
    p.set_defaults(func=cmd_solve)

    p = common(sub.add_parser("exp-expansion"))
    p.add_argument("-n", type=int, default=40)
    p.add_argument("-p", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_exp_expansion)

    p = common(sub.add_parser("exp-growth"), trials=20)
    p.add_argument("--ns", default="16,20,24,28")
    p.add_argument("-p", type=float, default=0.5)
    p.add_argument("--no-greedy", action="store_true")
    p.set_defaults(func=cmd_exp_growth)

    p = common(sub.add_parser("exp-regular"), trials=20)
    p.add_argument("--ns", default="20,30,40")
    p.add_argument("-d", type=int, default=3)
    p.set_defaults(func=cmd_exp_regular)

    p = common(sub.add_parser("exp-sandwich"))
    p.add_argument("-n", type=int, default=18)
    p.add_argument("-p", type=float, default=0.5)
    p.add_argument("--cuts", type=int, default=1000)
    p.add_argument("--graphs", type=int, default=10)
    p.set_defaults(func=cmd_exp_sandwich)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, TreeError, ProblemSpecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ex.ConfigError, OddDegreeSumError, GenerationError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
