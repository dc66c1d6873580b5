"""Command-line driver: replay modification scripts, run oracle checks, benchmark updates."""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Sequence, TextIO

from .errors import DynPathsError, ParseError
from .fuzz import SUITES, Mismatch, random_modification, trial_seed
from .graphstore import LabeledGraph, Modification, apply_mod, load_graph
from .programs import PROGRAMS, Options, Program, Step, build_program
from .prodreach import REGIMES
from .specs.dfa import compile_dfa
from .specs.grammar import to_cnf
from .specs.queries import EcrpqQuery, parse_ecrpq, parse_neps
from .specs.sync import parse_sync

EXIT_OK, EXIT_CHECK_FAILED, EXIT_ERROR = 0, 1, 2


def format_tuple(t: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def format_answer(lineno: int, answer) -> list[str]:
    if isinstance(answer, bool):
        return [f"{lineno}: {'true' if answer else 'false'}"]
    if not answer:
        return [f"{lineno}: none"]
    return [f"{lineno}: {format_tuple(t)}" for t in sorted(answer)]


def _ints(tokens: Sequence[str], what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"{what} must be integers, got {' '.join(tokens)!r}") from None


def parse_step(tokens: Sequence[str]) -> Step:
    head, *rest = tokens
    if head in ("ins", "del"):
        if len(rest) not in (3, 4):
            raise ParseError(f"expected '{head} <symbol> <u> <v> [factor]'")
        sym = rest[0]
        nums = _ints(rest[1:], "node ids and factor")
        mod = Modification.ins(sym, nums[0], nums[1]) if head == "ins" else Modification.delete(sym, nums[0], nums[1])
        return Step(mod=mod, factor=nums[2] if len(nums) == 3 else None)
    if head == "flip":
        if len(rest) != 2:
            raise ParseError("expected 'flip <rule> <bit>'")
        j, i = _ints(rest, "rule and bit")
        return Step(flip=(j, i))
    raise ParseError(f"unknown command {head!r}")


def execute_script(program: Program, text: str, out: TextIO, err: TextIO) -> tuple[int, Program]:
    """Replay ``text`` line by line; on failure keep the state before the line and stop."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "query":
                answer = program.answer(_ints(tokens[1:], "query arguments"))
                out.write("\n".join(format_answer(lineno, answer)) + "\n")
                out.flush()
            else:
                program = program.apply(parse_step(tokens))
        except (DynPathsError, ValueError, IndexError) as exc:
            err.write(f"line {lineno}: {type(exc).__name__}: {exc}\n")
            return EXIT_ERROR, program
    return EXIT_OK, program


# -- loading --------------------------------------------------------------------

def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_options(args: argparse.Namespace, graphs: Sequence[LabeledGraph]) -> Options:
    alphabet = graphs[0].alphabet
    opts = Options(lmax=args.lmax, regime=args.regime,
                   blocks=tuple(args.blocks) if args.blocks else None)
    if args.dfa:
        opts = _with(opts, dfa=compile_dfa(_read(args.dfa), alphabet))
    if args.grammar:
        opts = _with(opts, grammar=to_cnf(_read(args.grammar)))
    if args.ecrpq:
        base = Path(args.ecrpq).parent
        opts = _with(opts, query=parse_ecrpq(_read(args.ecrpq), alphabet, base_dir=base))
    elif args.sync:
        rel = parse_sync(_read(args.sync))
        xs = tuple(f"x{i}" for i in range(rel.arity))
        ys = tuple(f"y{i}" for i in range(rel.arity))
        paths = tuple(f"p{i}" for i in range(rel.arity))
        try:
            query = EcrpqQuery(xs + ys, xs + ys, tuple(zip(xs, paths, ys)), ((rel, paths),), alphabet)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        opts = _with(opts, query=query)
    if args.neps:
        try:
            opts = _with(opts, neps=parse_neps(_read(args.neps)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return opts


def _with(opts: Options, **changes) -> Options:
    return replace(opts, **changes)


def load_program(args: argparse.Namespace) -> Program:
    graphs = [load_graph(p) for p in args.graph]
    return build_program(args.program, graphs, load_options(args, graphs))


# -- subcommands ----------------------------------------------------------------

def cmd_run(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    try:
        program = load_program(args)
        script = _read(args.script)
    except (DynPathsError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    code, _ = execute_script(program, script, out, err)
    return code


def cmd_check(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        err.write(f"error: unknown suites {', '.join(unknown)}; choose from {', '.join(SUITES)}\n")
        return EXIT_ERROR
    tally = {n: [0, 0] for n in names}
    for i in range(args.trials):
        name = names[i % len(names)]
        tally[name][1] += 1
        rng = random.Random(trial_seed(args.seed, i))
        try:
            SUITES[name].run(rng, args.max_nodes)
        except (Mismatch, DynPathsError) as exc:
            out.write(f"FAIL {name} trial {i}: {exc}\n")
            continue
        tally[name][0] += 1
    for name, (ok, total) in tally.items():
        if total:
            out.write(f"{name}: {ok}/{total}\n")
    passed = sum(ok for ok, _ in tally.values())
    out.write(f"{'OK' if passed == args.trials else 'FAIL'} {passed}/{args.trials}\n")
    return EXIT_OK if passed == args.trials else EXIT_CHECK_FAILED


def _script_steps(text: str) -> list[Step]:
    steps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line and not line.startswith("query"):
            steps.append(parse_step(line.split()))
    return steps


def _timed(args, program: Program, index: int, step: Step, out_rows, err: TextIO) -> Program | None:
    kind = "flip" if step.flip is not None else step.mod.kind
    try:
        t0 = time.perf_counter()
        after = program.apply(step)
        t1 = time.perf_counter()
        after.rebuild()
        t2 = time.perf_counter()
    except DynPathsError as exc:
        err.write(f"step {index} skipped: {type(exc).__name__}: {exc}\n")
        return None
    out_rows.writerow([args.program, index, kind, round((t1 - t0) * 1e6), round((t2 - t1) * 1e6)])
    return after


def cmd_bench(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    try:
        program = load_program(args)
        graphs = [load_graph(p) for p in args.graph]
        steps = _script_steps(_read(args.script)) if args.script else None
    except (DynPathsError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["program", "step", "kind", "incremental_us", "recompute_us"])
    if steps is not None:
        for index, step in enumerate(steps, 1):
            program = _timed(args, program, index, step, writer, err) or program
        return EXIT_OK
    # random steps drawn against the graphs as they evolve
    rng = random.Random(args.seed)
    name_factor = args.program in ("product", "neps") or len(graphs) > 1
    for index in range(1, args.trials + 1):
        i = rng.randrange(len(graphs)) if name_factor else 0
        m = random_modification(rng, graphs[i], 0.3, forward_bias=0.8)
        after = _timed(args, program, index, Step(mod=m, factor=i if name_factor else None), writer, err)
        if after is not None:
            program = after
            graphs[i] = apply_mod(graphs[i], m)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------

def _program_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", action="append", required=True, help="graph file; repeat once per factor")
    p.add_argument("--program", required=True, choices=sorted(PROGRAMS))
    p.add_argument("--dfa", help="DFA file or bare regular expression file (rpq)")
    p.add_argument("--grammar", help="grammar file (cfl)")
    p.add_argument("--ecrpq", help="query file (crpq, ecrpq)")
    p.add_argument("--sync", help="single synchronous relation over all paths (ecrpq)")
    p.add_argument("--neps", help="rule file (neps)")
    p.add_argument("--blocks", nargs="+", help="block symbols for the blocks program, default a b c")
    p.add_argument("--lmax", type=int, help="length bound for length-tracking programs")
    p.add_argument("--regime", choices=REGIMES + ("labeled",), help="factor regime for product and neps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynpaths", description="Dynamic path query maintenance.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a modification script and print query answers")
    _program_flags(run)
    run.add_argument("--script", required=True)

    check = sub.add_parser("check", help="compare engines with the oracles on random instances")
    check.add_argument("--trials", type=int, default=200)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--max-nodes", type=int, default=None)
    check.add_argument("--suite", action="append", help=f"repeatable; one of {', '.join(SUITES)}")

    bench = sub.add_parser("bench", help="time incremental updates against recomputation (CSV)")
    _program_flags(bench)
    bench.add_argument("--script")
    bench.add_argument("--trials", type=int, default=20, help="random steps when no script is given")
    bench.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args, out, err)
    if args.command == "check":
        return cmd_check(args, out, err)
    return cmd_bench(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
