"""End-to-end acceptance: randomized oracle agreement at full size, with time budgets.

Each criterion prints one ``criterion N: PASS|FAIL`` line (collected into the
terminal summary under pytest; printed directly when run as a script).
"""

from __future__ import annotations

import io
import random
import time
from pathlib import Path
from typing import Callable, Sequence

from dynpaths.blockquery import block_query_answer, block_query_from_graph
from dynpaths.cli import main
from dynpaths.fuzz import (Mismatch, in_abc_blocks, trial_blocks, trial_cfl, trial_cfl_relation, trial_crpq,
                           trial_crpq_stability, trial_dist_acyclic, trial_dist_ins, trial_dist_undirected,
                           trial_ecrpq, trial_gf2, trial_labeled_product, trial_neps, trial_palindrome,
                           trial_parikh, trial_product, trial_rpq, trial_rpq_locality, trial_seed, trial_tc)
from dynpaths.graphstore import LabeledGraph

DATA = Path(__file__).parent / "data"
RESULTS: list[str] = []

Batch = tuple[str, Callable[[random.Random], object], int]


def run_batches(seed: int, batches: Sequence[Batch]) -> tuple[list[str], float]:
    failures = []
    start = time.perf_counter()
    for b, (label, trial, count) in enumerate(batches):
        for i in range(count):
            rng = random.Random(trial_seed(seed * 100 + b, i))
            try:
                trial(rng)
            except Mismatch as exc:
                failures.append(f"{label} trial {i}: {exc}")
    return failures, time.perf_counter() - start


def report(number: int, title: str, failures: list[str], elapsed: float, budget: float, trials: int) -> None:
    ok = not failures and elapsed < budget
    line = (f"criterion {number}: {'PASS' if ok else 'FAIL'} {title}: {trials - len(failures)}/{trials} trials "
            f"agree, {elapsed:.1f}s (budget {budget:.0f}s)")
    RESULTS.append(line)
    print(line)
    assert not failures, "\n".join(failures[:5])
    assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"


def check(number: int, title: str, seed: int, budget: float, batches: Sequence[Batch]) -> None:
    failures, elapsed = run_batches(seed, batches)
    report(number, title, failures, elapsed, budget, sum(c for _, _, c in batches))


def test_criterion_1_acyclic_transitive_closure():
    check(1, "acyclic transitive closure", 1, 10, [("tc", trial_tc, 500)])


def test_criterion_2_regular_path_queries():
    check(2, "regular path queries under insertions", 2, 30,
          [("rpq", trial_rpq, 300), ("locality", trial_rpq_locality, 100)])


def test_criterion_3_context_free_paths_on_dags():
    check(3, "context-free paths on DAGs", 3, 60,
          [("cfl", trial_cfl, 200), ("relations", trial_cfl_relation, 20)])


def _abc_chains(rng: random.Random) -> None:
    # chains a^k b^k c^k for k <= 5 and their one-off near misses
    for k in range(6):
        for word in ("a" * k + "b" * k + "c" * k, "a" * k + "b" * (k + 1) + "c" * k, "a" * (k + 1) + "b" * k + "c" * k):
            g = LabeledGraph(len(word) + 1, ("a", "b", "c"), True,
                             frozenset((i, s, i + 1) for i, s in enumerate(word)))
            got = block_query_answer(block_query_from_graph(g, "abc"))
            want = {(x, y) for x in range(g.n) for y in range(x, g.n) if in_abc_blocks(word[x:y])}
            if got != want:
                raise Mismatch(f"a^k b^k c^k differs on chain {word}")


def test_criterion_4_distances():
    check(4, "distances (insert-only, acyclic, undirected, a^k b^k c^k)", 4, 60,
          [("insert-only", trial_dist_ins, 200), ("acyclic", trial_dist_acyclic, 200),
           ("undirected", trial_dist_undirected, 200), ("abc chains", _abc_chains, 1),
           ("abc random", trial_blocks, 50)])


def test_criterion_5_parikh():
    check(5, "Parikh vectors", 5, 30, [("parikh", trial_parikh, 150)])


def test_criterion_6_crpq_with_constraints():
    check(6, "CRPQ with linear constraints under insertions", 6, 60,
          [("crpq", trial_crpq, 100), ("bound doubling", trial_crpq_stability, 30)])


def test_criterion_7_ecrpq_on_acyclic_copies():
    check(7, "ECRPQ with linear constraints on acyclic copies", 7, 60, [("ecrpq", trial_ecrpq, 100)])


def test_criterion_8_products_and_neps():
    batches: list[Batch] = []
    for regime in ("insert-only", "acyclic", "undirected"):
        batches.append((f"product {regime}", lambda rng, r=regime: trial_product(rng, regime=r), 150))
        batches.append((f"neps {regime}", lambda rng, r=regime: trial_neps(rng, r), 150))
    batches += [("labeled product", trial_labeled_product, 150), ("gf2", trial_gf2, 200),
                ("palindrome", trial_palindrome, 100)]
    check(8, "products, NEPS, GF(2) rank, palindromes", 8, 60, batches)


# -- criterion 9 -----------------------------------------------------------------------

SCRIPTED = [
    ["--graph", "chain.graph", "--program", "rpq", "--dfa", "astar.dfa", "--script", "rpq.script"],
    ["--graph", "dyck.graph", "--program", "cfl", "--grammar", "dyck.grammar", "--script", "dyck.script"],
    ["--graph", "dyck.graph", "--program", "cfl", "--grammar", "dyck.grammar", "--script", "cycle.script"],
    ["--graph", "edge.graph", "--graph", "edge.graph", "--program", "neps", "--neps", "diagonal.neps",
     "--script", "neps.script"],
    ["--graph", "abc.graph", "--program", "blocks", "--script", "abc.script"],
    ["--graph", "two.graph", "--program", "ecrpq", "--ecrpq", "eqlen.ecrpq", "--script", "ecrpq.script"],
]
FILE_FLAGS = {"--graph", "--dfa", "--grammar", "--ecrpq", "--neps", "--script"}


def _resolve(args: list[str], script: Path | None = None) -> list[str]:
    out = []
    for prev, arg in zip([None] + args[:-1], args):
        if prev == "--script" and script is not None:
            out.append(str(script))
        else:
            out.append(str(DATA / arg) if prev in FILE_FLAGS else arg)
    return ["run"] + out


def _run(argv: list[str]) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def _random_script(rng: random.Random, n: int, symbols: str, bad_line: int, length: int) -> list[str]:
    lines = []
    for i in range(1, length + 1):
        if i == bad_line:
            lines.append(rng.choice(["ins z 0 1", f"ins {symbols[0]} 0 {n + 3}", "warp 1 2", "ins a x 1"]))
        elif rng.random() < 0.35:
            lines.append("query")
        else:
            u, v = sorted(rng.sample(range(n), 2))
            lines.append(f"ins {rng.choice(symbols)} {u} {v}")
    return lines


def _determinism_and_rollback(tmp: Path) -> tuple[list[str], int]:
    failures, checks = [], 0
    for args in SCRIPTED:
        checks += 1
        first, second = _run(_resolve(args)), _run(_resolve(args))
        if first != second:
            failures.append(f"replay differs for {args[-1]}")
    rng = random.Random(9)
    programs = [("rpq", ["--graph", "chain.graph", "--program", "rpq", "--dfa", "astar.dfa"], 3, "ab"),
                ("cfl", ["--graph", "dyck.graph", "--program", "cfl", "--grammar", "dyck.grammar"], 4, "()"),
                ("dist-acyclic", ["--graph", "chain.graph", "--program", "dist-acyclic"], 3, "ab"),
                ("palindrome", ["--graph", "chain.graph", "--program", "palindrome"], 3, "ab")]
    for t in range(40):
        name, base, n, symbols = programs[t % len(programs)]
        length = rng.randint(4, 12)
        bad = rng.randint(1, length)
        lines = _random_script(rng, n, symbols, bad, length)
        full, prefix = tmp / f"full{t}.script", tmp / f"prefix{t}.script"
        full.write_text("\n".join(lines) + "\n")
        prefix.write_text("\n".join(lines[:bad - 1]) + "\n")
        argv_full = _resolve(base + ["--script", "x"], full)
        code, out, err = _run(argv_full)
        checks += 1
        if (code, out, err) != _run(argv_full):
            failures.append(f"{name} script {t}: replay differs")
        p_code, p_out, _ = _run(_resolve(base + ["--script", "x"], prefix))
        if code != 2 or not err.startswith(f"line {bad}:") or out != p_out or p_code != 0:
            failures.append(f"{name} script {t}: failing line {bad} changed earlier output")
    return failures, checks


def test_criterion_9_determinism_and_rollback(tmp_path):
    start = time.perf_counter()
    failures, checks = _determinism_and_rollback(tmp_path)
    report(9, "determinism and rollback of run scripts", failures, time.perf_counter() - start, 60, checks)


def pytest_terminal_summary_lines() -> list[str]:
    return list(RESULTS)


if __name__ == "__main__":
    import tempfile

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
