"""Command-line surface.

Subcommands: solve, scan, goldbach, classify, partition, config, diff,
verify.  Identical inputs produce byte-identical stdout; anything
time-dependent (durations, progress) goes to stderr.  Exit codes:
0 success, 1 a verification failed, 2 invalid usage or arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import acceptance
from .arith import BUILTIN_FUNCTIONS, MultiplicativeFunction, build_factor_table
from .diffscan import (
    check_conditions,
    difference_instance,
    load_rule_file,
    solutions_to_configuration,
)
from .equation import classify, goldbach_count, solution_record, solve
from .geometry import (
    decompose,
    find_cycle,
    incidence_graph,
    is_prime_configuration,
    load_configuration,
    save_configuration,
    verify_incidence_bound,
)
from .partition import balanced_split
from .scan import format_solutions, format_table, iter_solution_blocks, scan, summary_to_json

OK, VERIFY_FAILED, USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cototient",
        description="Solve n - phi(n) = c and verify the structural bounds around it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="all n with n - phi(n) = c")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scan", help="scan a c range; table to stdout or --out")
    p.add_argument("--from", dest="c_from", type=int, required=True)
    p.add_argument("--to", dest="c_to", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--block-size", type=int, default=4096)
    p.add_argument("--out", type=Path, help="write the table here instead of stdout")
    p.add_argument("--summary", type=Path, help="write the JSON summary here")
    p.add_argument("--solutions", type=Path, help="write (c, n) pairs here")
    p.add_argument("--allow-large", action="store_true", help="override the c cap")

    p = sub.add_parser("goldbach", help="ways to write k as a sum of two primes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("classify", help="histogram the solutions of one c")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("partition", help="balanced two-group split of factors")
    p.add_argument("--values", required=True, help="comma-separated positive integers")
    p.add_argument("--t", type=int, required=True, help="declared bound on each value")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("config", help="analyze a configuration file")
    p.add_argument("--file", type=Path, required=True)
    p.add_argument("--assert-forest", action="store_true", help="exit 1 if a cycle exists")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("diff", help="f(n) - g(n) = c pipeline with geometry checks")
    p.add_argument("--f", default="id", help="id, phi, sigma, tau, or a name from --rules")
    p.add_argument("--g", default="phi")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--t", type=int, help="smoothness bound; default: tightest valid")
    p.add_argument("--rules", type=Path, help="JSON file with extra named rules")
    p.add_argument("--save-config", type=Path, help="write the built configuration here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="run the acceptance criteria")
    p.add_argument("--workers", type=int, default=8)
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p.add_argument("--criteria", help="comma-separated subset, e.g. 1,4,7")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "solve": _cmd_solve,
        "scan": _cmd_scan,
        "goldbach": _cmd_goldbach,
        "classify": _cmd_classify,
        "partition": _cmd_partition,
        "config": _cmd_config,
        "diff": _cmd_diff,
        "verify": _cmd_verify,
    }[args.command]
    try:
        return handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def entrypoint() -> None:
    sys.exit(main())


def _cmd_solve(args) -> int:
    sols = solve(args.c)
    if args.json:
        print(json.dumps({"c": args.c, "solutions": sols}))
    else:
        print(" ".join(map(str, sols)))
    return OK


def _cmd_scan(args) -> int:
    rows, summary = scan(
        args.c_from,
        args.c_to,
        workers=args.workers,
        block_size=args.block_size,
        allow_large=args.allow_large,
    )
    table = format_table(rows)
    if args.out:
        args.out.write_text(table)
    else:
        sys.stdout.write(table)
    if args.summary:
        args.summary.write_text(summary_to_json(summary))
    if args.solutions:
        with open(args.solutions, "w") as fh:
            detail = iter_solution_blocks(args.c_from, args.c_to, args.block_size)
            for line in format_solutions(detail):
                fh.write(line + "\n")
    return OK


def _cmd_goldbach(args) -> int:
    g = goldbach_count(args.k)
    if args.json:
        print(json.dumps({"k": args.k, "count": g}))
    else:
        print(g)
    return OK


def _cmd_classify(args) -> int:
    sols = solve(args.c)
    table = build_factor_table(max(2, args.c))
    records = [solution_record(args.c, n, table) for n in sols]
    hist, squarefree = classify(records)
    if args.json:
        print(
            json.dumps(
                {
                    "c": args.c,
                    "solutions": sols,
                    "histogram": hist,
                    "squarefree_histogram": squarefree,
                }
            )
        )
    else:
        print(f"c: {args.c}")
        print("solutions: " + (" ".join(map(str, sols)) or "-"))
        print("histogram: " + (_fmt_hist(hist) or "-"))
        print("squarefree_histogram: " + (_fmt_hist(squarefree) or "-"))
    return OK


def _fmt_hist(hist: dict[int, int]) -> str:
    return ",".join(f"{k}:{v}" for k, v in sorted(hist.items()))


def _cmd_partition(args) -> int:
    try:
        values = [int(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print(f"error: --values must be comma-separated integers, got {args.values!r}", file=sys.stderr)
        return USAGE
    split = balanced_split(values, args.t)
    n = split.product_a * split.product_b
    if args.json:
        print(
            json.dumps(
                {
                    "group_a": list(split.group_a),
                    "group_b": list(split.group_b),
                    "product_a": split.product_a,
                    "product_b": split.product_b,
                    "bound_holds": max(split.product_a, split.product_b) ** 2 <= n * args.t,
                }
            )
        )
    else:
        print("group_a: " + (" ".join(str(i) for i in split.group_a) or "-"))
        print("group_b: " + (" ".join(str(i) for i in split.group_b) or "-"))
        print(f"product_a: {split.product_a}")
        print(f"product_b: {split.product_b}")
        worse = max(split.product_a, split.product_b)
        print(f"bound: {worse}^2 = {worse**2} <= n*t = {n * args.t}")
    return OK


def _cmd_config(args) -> int:
    config = load_configuration(args.file)
    graph = incidence_graph(config)
    cycle = find_cycle(graph)
    classes = decompose(config, graph)
    report = verify_incidence_bound(config)
    doc = {
        "c": config.c,
        "points": len(config.points),
        "lines": len(config.lines),
        "edges": report.edge_count,
        "prime": is_prime_configuration(config),
        "cycle": None if cycle is None else [[kind, idx] for kind, idx in cycle],
        "classes": len(classes),
        "tau_c": report.tau_c,
        "incidence_bound": report.bound,
        "classes_prime": report.classes_prime,
        "bound_passed": report.passed,
    }
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        for key in (
            "c",
            "points",
            "lines",
            "edges",
            "prime",
            "classes",
            "tau_c",
            "incidence_bound",
            "classes_prime",
            "bound_passed",
        ):
            print(f"{key}: {doc[key]}")
        if cycle is None:
            print("cycle: none")
        else:
            print("cycle: " + " -> ".join(f"{kind} {idx}" for kind, idx in cycle))
    if args.assert_forest and cycle is not None:
        print("assertion failed: configuration contains a cycle", file=sys.stderr)
        return VERIFY_FAILED
    if not report.passed:
        print("assertion failed: incidence bound report did not pass", file=sys.stderr)
        return VERIFY_FAILED
    return OK


def _resolve_function(name: str, rules: Optional[Path]) -> MultiplicativeFunction:
    functions = dict(BUILTIN_FUNCTIONS)
    if rules:
        for func in load_rule_file(rules):
            functions[func.name] = func
    if name not in functions:
        raise ValueError(f"unknown function {name!r}; have {sorted(functions)}")
    return functions[name]


def _cmd_diff(args) -> int:
    f = _resolve_function(args.f, args.rules)
    g = _resolve_function(args.g, args.rules)
    table = build_factor_table(max(args.n_max, 2))
    instance = difference_instance(f, g, args.c, args.n_max, t=args.t, table=table)
    report = check_conditions(f, g, args.c, args.n_max, instance.t, table=table)
    config = solutions_to_configuration(instance, table=table)
    bound = verify_incidence_bound(config)
    if args.save_config:
        save_configuration(config, args.save_config)
    doc = {
        "f": f.name,
        "g": g.name,
        "c": args.c,
        "n_max": args.n_max,
        "t": instance.t,
        "solutions": list(instance.solutions),
        "conditions": {
            "dominates": report.dominates.ok,
            "injective": report.injective.ok,
            "equation": report.equation.ok,
            "growth_f_max_ratio": round(report.growth_f.max_ratio, 6),
            "growth_g_max_ratio": round(report.growth_g.max_ratio, 6),
            "smooth_f": report.smooth_f.ok,
            "smooth_g": report.smooth_g.ok,
        },
        "configuration": {
            "points": len(config.points),
            "lines": len(config.lines),
            "edges": bound.edge_count,
            "incidence_bound": bound.bound,
            "bound_passed": bound.passed,
        },
    }
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    else:
        print(f"f: {f.name}  g: {g.name}  c: {args.c}  n_max: {args.n_max}  t: {instance.t}")
        print("solutions: " + (" ".join(map(str, instance.solutions)) or "-"))
        cond = doc["conditions"]
        print(
            "conditions: dominates={dominates} injective={injective} equation={equation} "
            "growth_f={growth_f_max_ratio} growth_g={growth_g_max_ratio} "
            "smooth_f={smooth_f} smooth_g={smooth_g}".format(**cond)
        )
        cfg = doc["configuration"]
        print(
            "configuration: points={points} lines={lines} edges={edges} "
            "bound={incidence_bound} passed={bound_passed}".format(**cfg)
        )
    return OK if bound.passed else VERIFY_FAILED


def _cmd_verify(args) -> int:
    indices = None
    if args.criteria:
        try:
            indices = sorted({int(x) for x in args.criteria.split(",") if x.strip()})
        except ValueError:
            print(f"error: bad --criteria {args.criteria!r}", file=sys.stderr)
            return USAGE
        unknown = [i for i in indices if i not in acceptance.CRITERIA]
        if unknown:
            print(f"error: unknown criteria {unknown}", file=sys.stderr)
            return USAGE
    suite = acceptance.AcceptanceSuite(workers=args.workers, seed=args.seed)
    results = suite.run(indices)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"criterion {res.index} {status} {res.name}")
        print(f"  [{res.seconds:.1f}s] {res.detail}", file=sys.stderr)
        if not res.passed:
            failed += 1
    return VERIFY_FAILED if failed else OK
