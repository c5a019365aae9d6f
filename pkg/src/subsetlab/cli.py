"""Command-line entry point.

Every command prints one JSON result block on stdout. Exit status is 0 on
success, 1 when no subset exists (or a sweep fails its own check) and 2
on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from .errors import SubsetLabError
from .generators import GeneratorSpec, parse_cnf, parse_instance, random_instance, reduce_3sat, write_instance
from .harness import (
    ExperimentConfig,
    complexity_probe,
    run_accuracy_experiment,
    run_closed_form_check,
    write_report,
)
from .oracles import dp_decide, exhaustive_decide
from .solver import SolverConfig, solve

EXIT_OK, EXIT_NO_SUBSET, EXIT_USAGE = 0, 1, 2

METHODS = ("exact", "approx", "oracle-exh", "oracle-dp")


def _emit(block: dict) -> None:
    print(json.dumps(block, sort_keys=True))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.input))
    block = {"command": "solve", "method": args.method, "n": inst.n, "target": str(inst.target)}
    if args.method in ("exact", "approx"):
        cfg = SolverConfig(
            d3_lower_inclusive=not args.d3_exclusive,
            enable_fabrication=not args.no_fabrication,
        )
        result = solve(inst, cfg, approx=args.method == "approx")
        sol = result.solution
        block["stats"] = asdict(result.stats)
    elif args.method == "oracle-exh":
        sol = exhaustive_decide(inst).witness
    else:
        sol = dp_decide(inst).witness
    if sol is None:
        block["status"] = "no subset"
        _emit(block)
        return EXIT_NO_SUBSET
    block.update(
        status="found",
        indices=list(sol.indices),
        values=[str(v) for v in sol.values],
        sum=str(sol.sum),
    )
    _emit(block)
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(n=args.n, seed=args.seed, range_bound=args.range_bound, target=args.target)
    inst = random_instance(spec)
    _write(args.out, write_instance(inst))
    _emit({"command": "gen", "status": "ok", "out": args.out, "n": inst.n})
    return EXIT_OK


def cmd_reduce(args) -> int:
    formula = parse_cnf(_read(args.cnf))
    inst = reduce_3sat(formula)
    _write(args.out, write_instance(inst))
    _emit(
        {
            "command": "reduce",
            "status": "ok",
            "out": args.out,
            "variables": formula.num_vars,
            "clauses": len(formula.clauses),
            "n": inst.n,
        }
    )
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        trials_per_n=args.trials,
        seed=args.seed,
        method=args.method,
        oracle=args.oracle,
        permutations_per_trial=args.permutations_per_trial,
        d3_lower_inclusive=not args.d3_exclusive,
        enable_fabrication=not args.no_fabrication,
    )
    report = run_accuracy_experiment(cfg, workers=args.workers, counterexample_path=args.counterexamples)
    write_report(report, args.out)
    _emit(
        {
            "command": "experiment",
            "status": "ok" if report.false_positives == 0 else "false positives",
            "out": args.out,
            "trials": report.trials,
            "agreements": report.agreements,
            "agreement_rate": round(report.agreement_rate, 6),
            "false_negatives": report.false_negatives,
            "false_positives": report.false_positives,
            "counterexamples": len(report.counterexamples),
            "beyond_desk_scale": cfg.beyond_desk_scale,
        }
    )
    return EXIT_OK if report.false_positives == 0 else EXIT_NO_SUBSET


def cmd_check(args) -> int:
    summary = run_closed_form_check(args.trials, args.seed)
    block = {"command": "check-closed-forms", "status": "pass" if summary.passed else "fail"}
    block.update(asdict(summary))
    _emit(block)
    return EXIT_OK if summary.passed else EXIT_NO_SUBSET


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_probe(args) -> int:
    result = complexity_probe(args.n, args.trials, args.seed)
    block = {"command": "probe-complexity", "status": "ok"}
    block.update(asdict(result))
    _emit(block)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subsetlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--d3-exclusive", action="store_true", help="use a strict lower bound on D3")
        p.add_argument("--no-fabrication", action="store_true", help="do not append the sentinel")

    p = sub.add_parser("solve", help="decide one instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=METHODS, default="exact")
    solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--range-bound", type=int)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="reduce a DIMACS 3-CNF to an instance file")
    p.add_argument("--cnf", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("experiment", help="solver vs oracle accuracy sweep")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("exact", "approx"), default="exact")
    p.add_argument("--oracle", choices=("exhaustive", "dp"), default="exhaustive")
    p.add_argument("--permutations-per-trial", choices=("1", "n"), default="1")
    p.add_argument("--out", required=True)
    p.add_argument("--counterexamples")
    p.add_argument("--workers", type=int, default=1)
    solver_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check-closed-forms", help="closed forms vs elimination sweep")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("probe-complexity", help="operation counts on infeasible instances")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (OSError, SubsetLabError, ValueError) as exc:
        print(f"subsetlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
