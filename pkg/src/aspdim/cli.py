"""Command-line surface tying the toolkit together."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .bench import (
    FAMILY_LONG,
    compare_engines,
    run_benchmark,
    stats_table,
    summarize,
)
from .diminution import (
    Diminution,
    check_admissible,
    check_elementary_loop_admissible,
    check_loop_admissible,
    check_safe,
    check_splitting_safe,
    classify,
)
from .errors import AspdimError
from .generators import InstanceSpec
from .grounding import ground, restrict_ground
from .heuristics import HeuristicSpec
from .parser import parse_program
from .semantics import answer_sets
from .syntax import atom_set_to_text, program_to_text
from .transform import dom_lift, guard

EXIT_SAT = 10
EXIT_UNSAT = 20


def _read_program(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read())


def parse_dim_argument(value: str) -> frozenset[str]:
    """A diminution given as a file (one constant per line, # comments)
    or as an inline comma-separated list."""
    if os.path.exists(value):
        constants = []
        with open(value, encoding="utf-8") as fh:
            for line in fh:
                token = line.split("#", 1)[0].strip()
                if token:
                    constants.append(token)
        return frozenset(constants)
    return frozenset(t.strip() for t in value.split(",") if t.strip())


def _cmd_ground(args) -> int:
    program = _read_program(args.file)
    if args.dim is not None:
        gp = restrict_ground(program, parse_dim_argument(args.dim))
    else:
        gp = ground(program)
    text = gp.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_solve(args) -> int:
    program = _read_program(args.file)
    if args.dim is not None:
        gp = restrict_ground(program, parse_dim_argument(args.dim))
    else:
        gp = ground(program)
    found = answer_sets(gp, args.max_atoms)
    for interp in found:
        print(atom_set_to_text(interp))
    return EXIT_SAT if found else EXIT_UNSAT


def _cmd_check(args) -> int:
    program = _read_program(args.file)
    preserved = tuple(p.strip() for p in args.preserve.split(",")) if args.preserve else ()
    dim = Diminution.of(parse_dim_argument(args.dim), preserved)
    if args.mode == "all":
        report = classify(program, dim)
        if args.json:
            print(json.dumps(report.as_dict(), indent=2))
        else:
            for line in report.as_lines():
                print(line)
        return 0
    if args.mode == "admissible":
        result = check_admissible(program, dim)
    elif args.mode == "safe":
        result = check_safe(program, dim)
    elif args.mode == "splitting":
        status = check_splitting_safe(program, dim)
        print(f"splitting_safe={status.status}")
        if status.witness is not None:
            print(f"splitting_witness={status.witness}")
        return 0
    elif args.mode == "loop":
        tri = check_loop_admissible(program, dim)
        print(f"loop_admissible={tri.status}")
        for item in tri.evidence:
            print(f"evidence={item}")
        return 0
    else:  # eloop
        tri = check_elementary_loop_admissible(program, dim)
        print(f"elementary_loop_admissible={tri.status}")
        for item in tri.evidence:
            print(f"evidence={item}")
        return 0
    print(f"{args.mode}={'true' if result.holds else 'false'}")
    if result.witness is not None:
        print(f"{args.mode}_witness={atom_set_to_text(result.witness)}")
    return 0


def _cmd_lift(args) -> int:
    program = _read_program(args.file)
    lifted = dom_lift(program)
    for constant, (var, pred) in sorted(lifted.introduced.items()):
        print(f"% lifted {constant} -> variable {var}, guard {pred}/1")
    sys.stdout.write(program_to_text(lifted.lifted))
    return 0


def _cmd_guard(args) -> int:
    program = _read_program(args.file)
    guarded = guard(program, parse_dim_argument(args.dim))
    sys.stdout.write(program_to_text(guarded.program))
    return 0


def _cmd_bench(args) -> int:
    family = FAMILY_LONG[args.family]
    defaults = {"f1": 0.34, "f2": 10.0, "f3": 8.0}
    param = args.param if args.param is not None else defaults[args.heuristic]
    spec_kwargs = {}
    if family == "hamiltonian":
        spec_kwargs["chords_per_node"] = args.chords_per_node
    specs = [InstanceSpec(family, args.n, args.seed, **spec_kwargs)]
    heuristics = [HeuristicSpec(args.heuristic, param)]
    rows = run_benchmark(specs, heuristics, budget=args.budget)
    table = stats_table(rows)
    if args.stats_out:
        with open(args.stats_out, "w", encoding="utf-8") as fh:
            fh.write(table)
    sys.stdout.write(table)
    print(summarize(rows), file=sys.stderr)
    return 0


def _cmd_enginebench(args) -> int:
    family = FAMILY_LONG[args.family]
    spec = InstanceSpec(family, args.n, args.seed)
    heuristic = HeuristicSpec(args.heuristic, args.param) if args.heuristic else None
    rows = compare_engines(spec, heuristic)
    print("engine\tground_time_s\tground_rules")
    for engine, elapsed, rules in rows:
        print(f"{engine}\t{elapsed:.6f}\t{rules}")
    if len(rows) == 2:
        pure = next(t for e, t, _ in rows if e == "pure")
        compiled = next(t for e, t, _ in rows if e == "compiled")
        if compiled > 0:
            print(f"speedup\t{pure / compiled:.2f}x")
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="aspdim",
        description="Diminution-aware grounding and desk-scale answer-set checking.",
    )
    top.add_argument("--version", action="version", version=f"aspdim {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", help="ground a program, optionally over a diminution")
    p.add_argument("file")
    p.add_argument("--dim", help="diminution file or comma-separated constants")
    p.add_argument("--out", help="write the ground text here instead of stdout")
    p.set_defaults(func=_cmd_ground)

    p = sub.add_parser("solve", help="enumerate answer sets (exit 10 if any, 20 if none)")
    p.add_argument("file")
    p.add_argument("--dim", help="diminution file or comma-separated constants")
    p.add_argument("--max-atoms", type=int, default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="classify a diminution")
    p.add_argument("file")
    p.add_argument("--dim", required=True)
    p.add_argument("--preserve", help="preserved predicates, e.g. color/2,arc/2")
    p.add_argument(
        "--mode",
        choices=("all", "admissible", "safe", "splitting", "loop", "eloop"),
        default="all",
    )
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("lift", help="rewrite constants into guarded domain predicates")
    p.add_argument("file")
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("guard", help="emit the D-guarded program")
    p.add_argument("file")
    p.add_argument("--dim", required=True)
    p.set_defaults(func=_cmd_guard)

    p = sub.add_parser("bench", help="run the reduction benchmark")
    p.add_argument("--family", choices=("hc", "sm", "coloring"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--heuristic", choices=("f1", "f2", "f3"), required=True)
    p.add_argument("--param", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=float, default=None, help="per-run seconds")
    p.add_argument("--stats-out", help="write the TSV table here")
    p.add_argument("--chords-per-node", type=int, default=8)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser(
        "enginebench", help="compare the pure and compiled match kernels"
    )
    p.add_argument("--family", choices=("hc", "sm", "coloring"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--heuristic", choices=("f1", "f2", "f3"))
    p.add_argument("--param", type=float, default=8.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_enginebench)
    return top


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.func(args)
    except AspdimError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
