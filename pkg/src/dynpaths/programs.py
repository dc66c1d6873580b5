"""Uniform wrappers that let the command line drive every engine the same way.

A program holds an immutable engine state.  ``apply`` returns a new
program, so a failed step leaves the previous one untouched.  ``answer``
returns either a set of tuples or a boolean for a single-tuple question,
and ``rebuild`` recomputes the state from the current graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Any, Sequence

from .blockquery import block_query_answer, block_query_init, block_query_update
from .dyncfl import cfl_init, cfl_query, cfl_update
from .dynecrpq import (crpq_eval, crpq_init, crpq_update, ecrpq_compile, ecrpq_eval, ecrpq_recompute,
                       ecrpq_update, ecrpq_update_all)
from .dyndist import (acydist_init, acydist_update, insdist_init, insdist_update, parikh_init, parikh_update,
                      undir_has_length, undir_init, undir_update)
from .dynrpq import rpq_init, rpq_query, rpq_update
from .errors import InvalidModification
from .graphstore import LabeledGraph, Modification, TcState, apply_mod, tc_update
from .prodreach import (FactorMod, NepsChange, RuleFlip, labeled_product_from_graphs, labeled_product_reach,
                        labeled_product_update, neps_from_graphs, neps_reach, neps_update, palindrome_init,
                        palindrome_reach, palindrome_update, product_reach)
from .specs.dfa import Dfa
from .specs.grammar import CnfGrammar
from .specs.queries import EcrpqQuery, NepsSpec


@dataclass(frozen=True)
class Step:
    """One parsed modification: an edge change (optionally on one factor) or a rule-bit flip."""

    mod: Modification | None = None
    factor: int | None = None
    flip: tuple[int, int] | None = None


@dataclass(frozen=True)
class Options:
    dfa: Dfa | None = None
    grammar: CnfGrammar | None = None
    query: EcrpqQuery | None = None
    neps: NepsSpec | None = None
    blocks: tuple[str, ...] | None = None
    lmax: int | None = None
    regime: str | None = None


class Program:
    name = ""
    flips = False
    factored = False

    def apply(self, step: Step) -> "Program":
        raise NotImplementedError

    def answer(self, args: Sequence[int]) -> Any:
        raise NotImplementedError

    def rebuild(self) -> "Program":
        raise NotImplementedError

    def _edge_only(self, step: Step) -> Modification:
        if step.flip is not None:
            raise InvalidModification(f"program {self.name} has no rules to flip")
        if step.factor is not None and not self.factored:
            raise InvalidModification(f"program {self.name} works on a single graph")
        return step.mod


def _select(answers: set[tuple[int, ...]], args: Sequence[int]) -> Any:
    return tuple(args) in answers if args else answers


def _need_directed(name: str, g: LabeledGraph) -> None:
    if not g.directed:
        raise InvalidModification(f"program {name} needs a directed graph ('mode directed')")


@dataclass(frozen=True)
class TcProgram(Program):
    graph: LabeledGraph
    tc: TcState
    name = "tc"

    @classmethod
    def build(cls, graphs: Sequence[LabeledGraph], opts: Options) -> "TcProgram":
        g0 = graphs[0]
        _need_directed(cls.name, g0)
        p = cls(LabeledGraph.empty(g0.n, g0.alphabet), TcState.initial(g0.n))
        for u, sym, v in g0.sorted_edges():
            p = p.apply(Step(Modification.ins(sym, u, v)))
        return p

    def apply(self, step):
        m = self._edge_only(step)
        return TcProgram(apply_mod(self.graph, m), tc_update(self.tc, self.graph, m))

    def answer(self, args):
        return _select(self.tc.pairs(), args)

    def rebuild(self):
        return TcProgram.build([self.graph], Options())


@dataclass(frozen=True)
class EngineProgram(Program):
    """Single-graph engines: ``state`` with an update function and an answer function."""

    graph: LabeledGraph
    state: Any
    opts: Options

    def apply(self, step):
        m = self._edge_only(step)
        g_after = apply_mod(self.graph, m)
        if g_after is self.graph:
            return self
        return replace(self, graph=g_after, state=self._update(self.state, m))

    def rebuild(self):
        return type(self).build([self.graph], self.opts)

    @classmethod
    def build(cls, graphs: Sequence[LabeledGraph], opts: Options) -> "EngineProgram":
        g0 = graphs[0]
        p = cls(LabeledGraph.empty(g0.n, g0.alphabet, g0.directed), cls._init(g0, opts), opts)
        for u, sym, v in g0.sorted_edges():
            if not g0.directed and u > v:
                continue
            p = p.apply(Step(Modification.ins(sym, u, v)))
        return p


class RpqProgram(EngineProgram):
    name = "rpq"

    @staticmethod
    def _init(g, opts):
        _need_directed("rpq", g)
        if opts.dfa is None:
            raise InvalidModification("program rpq needs --dfa")
        return rpq_init(opts.dfa.with_alphabet(g.alphabet), g.n)

    @staticmethod
    def _update(s, m):
        return rpq_update(s, m)

    def answer(self, args):
        return _select(rpq_query(self.state), args)


class CflProgram(EngineProgram):
    name = "cfl"

    @staticmethod
    def _init(g, opts):
        _need_directed("cfl", g)
        if opts.grammar is None:
            raise InvalidModification("program cfl needs --grammar")
        return cfl_init(opts.grammar.with_terminals(g.alphabet), g.n, g.alphabet)

    @staticmethod
    def _update(s, m):
        return cfl_update(s, m)

    def answer(self, args):
        return _select(cfl_query(self.state), args)


class DistInsProgram(EngineProgram):
    name = "dist-ins"

    @staticmethod
    def _init(g, opts):
        return insdist_init(g.n, opts.lmax, g.alphabet, g.directed)

    @staticmethod
    def _update(s, m):
        return insdist_update(s, m)

    def answer(self, args):
        return _select(self.state.lengths(), args)


class DistAcyclicProgram(EngineProgram):
    name = "dist-acyclic"

    @staticmethod
    def _init(g, opts):
        _need_directed("dist-acyclic", g)
        return acydist_init(g.n, g.alphabet)

    @staticmethod
    def _update(s, m):
        return acydist_update(s, m)

    def answer(self, args):
        return _select(self.state.lengths(), args)


class DistUndirectedProgram(EngineProgram):
    name = "dist-undirected"

    @staticmethod
    def _init(g, opts):
        if g.directed:
            raise InvalidModification("program dist-undirected needs 'mode undirected'")
        return undir_init(g.n, g.alphabet)

    @staticmethod
    def _update(s, m):
        return undir_update(s, m)

    def answer(self, args):
        if len(args) == 3:
            return undir_has_length(self.state, *args)
        top = self.opts.lmax if self.opts.lmax is not None else 2 * self.graph.n + 2
        n = self.graph.n
        found = {(x, y, l) for x in range(n) for y in range(n) for l in range(top + 1)
                 if undir_has_length(self.state, x, y, l)}
        return _select(found, args)


class ParikhProgram(EngineProgram):
    name = "parikh"

    @staticmethod
    def _init(g, opts):
        _need_directed("parikh", g)
        return parikh_init(g.n, g.alphabet, opts.lmax)

    @staticmethod
    def _update(s, m):
        return parikh_update(s, m)

    def answer(self, args):
        return _select({(x, y) + tuple(vec) for x, y, vec in self.state.vectors()}, args)


class CrpqProgram(EngineProgram):
    name = "crpq"

    @staticmethod
    def _init(g, opts):
        _need_directed("crpq", g)
        if opts.query is None:
            raise InvalidModification("program crpq needs --ecrpq")
        return crpq_init(opts.query, g.n, opts.lmax, g.alphabet)

    @staticmethod
    def _update(s, m):
        return crpq_update(s, m)

    def answer(self, args):
        return _select(crpq_eval(self.state), args)


class BlocksProgram(EngineProgram):
    name = "blocks"

    @staticmethod
    def _init(g, opts):
        _need_directed("blocks", g)
        return block_query_init(g.n, opts.blocks or ("a", "b", "c"), g.alphabet)

    @staticmethod
    def _update(s, m):
        return block_query_update(s, m)

    def answer(self, args):
        return _select(block_query_answer(self.state), args)


class PalindromeProgram(EngineProgram):
    name = "palindrome"

    @staticmethod
    def _init(g, opts):
        _need_directed("palindrome", g)
        return palindrome_init(g.n, g.alphabet)

    @staticmethod
    def _update(s, m):
        return palindrome_update(s, m)

    def answer(self, args):
        if len(args) == 2:
            return palindrome_reach(self.state, *args)
        n = self.graph.n
        return _select({(x, y) for x in range(n) for y in range(n) if palindrome_reach(self.state, x, y)}, args)


@dataclass(frozen=True)
class EcrpqProgram(Program):
    """Copies start as the loaded graph; a step without a copy index changes every copy."""

    state: Any
    opts: Options
    name = "ecrpq"
    factored = True

    @classmethod
    def build(cls, graphs, opts):
        if opts.query is None:
            raise InvalidModification("program ecrpq needs --ecrpq")
        plan = ecrpq_compile(opts.query)
        copies = list(graphs) if len(graphs) == plan.m else [graphs[0]] * plan.m
        if len(graphs) not in (1, plan.m):
            raise InvalidModification(f"give one graph or {plan.m} graphs for this query")
        for g in copies:
            _need_directed(cls.name, g)
        n = max(g.n for g in copies)
        copies = [LabeledGraph(n, g.alphabet, True, g.edges) for g in copies]
        return cls(ecrpq_recompute(plan, copies), opts)

    def apply(self, step):
        m = self._edge_only(step)
        if step.factor is None:
            return EcrpqProgram(ecrpq_update_all(self.state, m), self.opts)
        return EcrpqProgram(ecrpq_update(self.state, step.factor, m), self.opts)

    def answer(self, args):
        return _select(ecrpq_eval(self.state), args)

    def rebuild(self):
        return EcrpqProgram(ecrpq_recompute(self.state.plan, self.state.copies), self.opts)


def _pairs_answer(sizes: Sequence[int], reach, args: Sequence[int]) -> Any:
    m = len(sizes)
    if args:
        if len(args) != 2 * m:
            raise InvalidModification(f"query needs {2 * m} node ids (sources then targets)")
        return reach(args[:m], args[m:])
    nodes = list(product(*[range(n) for n in sizes]))
    return {xs + ys for xs in nodes for ys in nodes if reach(xs, ys)}


@dataclass(frozen=True)
class NepsProgram(Program):
    """Products and NEPS over several factor graphs; steps name the factor."""

    state: Any
    opts: Options
    name = "neps"
    flips = True
    factored = True

    @classmethod
    def build(cls, graphs, opts):
        if opts.neps is None:
            raise InvalidModification("program neps needs --neps")
        return cls(neps_from_graphs(opts.neps, _regime(opts, graphs), graphs, opts.lmax), opts)

    def apply(self, step):
        if step.flip is not None:
            change: NepsChange = RuleFlip(*step.flip)
        elif step.factor is None:
            raise InvalidModification("name the factor: ins <symbol> <u> <v> <factor>")
        else:
            change = FactorMod(step.factor, step.mod)
        return replace(self, state=neps_update(self.state, change))

    def answer(self, args):
        return _pairs_answer([f.graph.n for f in self.state.factors],
                             lambda xs, ys: neps_reach(self.state, xs, ys), args)

    def rebuild(self):
        # flips live in the state, so rebuild from its current rules
        return NepsProgram.build(self.state.graphs, replace(self.opts, neps=self.state.spec))


def _regime(opts: Options, graphs: Sequence[LabeledGraph]) -> str:
    if opts.regime is not None:
        return opts.regime
    return "undirected" if all(not g.directed for g in graphs) else "insert-only"


class ProductProgram(NepsProgram):
    """Plain products: every factor moves at every step.  ``--regime labeled`` requires equal labels."""

    name = "product"
    flips = False

    @classmethod
    def build(cls, graphs, opts):
        if opts.regime == "labeled":
            return cls(labeled_product_from_graphs(graphs), opts)
        spec = NepsSpec(len(graphs), ((1,) * len(graphs),))
        return cls(neps_from_graphs(spec, _regime(opts, graphs), graphs, opts.lmax), opts)

    def apply(self, step):
        if step.flip is not None:
            raise InvalidModification("plain products have no rules to flip")
        if step.factor is None:
            raise InvalidModification("name the factor: ins <symbol> <u> <v> <factor>")
        if self.opts.regime == "labeled":
            return replace(self, state=labeled_product_update(self.state, step.factor, step.mod))
        return replace(self, state=neps_update(self.state, FactorMod(step.factor, step.mod)))

    def _graphs(self) -> tuple[LabeledGraph, ...]:
        if self.opts.regime == "labeled":
            return tuple(LabeledGraph(n, g.alphabet, True, g.edges)
                         for n, g in zip(self.state.sizes, self.state.inner.copies))
        return self.state.graphs

    def answer(self, args):
        if self.opts.regime == "labeled":
            return _pairs_answer(self.state.sizes, lambda xs, ys: labeled_product_reach(self.state, xs, ys), args)
        return _pairs_answer([f.graph.n for f in self.state.factors],
                             lambda xs, ys: product_reach(self.state.factors, xs, ys), args)

    def rebuild(self):
        return ProductProgram.build(self._graphs(), self.opts)


PROGRAMS: dict[str, type] = {
    "tc": TcProgram,
    "rpq": RpqProgram,
    "cfl": CflProgram,
    "dist-ins": DistInsProgram,
    "dist-acyclic": DistAcyclicProgram,
    "dist-undirected": DistUndirectedProgram,
    "parikh": ParikhProgram,
    "crpq": CrpqProgram,
    "ecrpq": EcrpqProgram,
    "product": ProductProgram,
    "neps": NepsProgram,
    "palindrome": PalindromeProgram,
    "blocks": BlocksProgram,
}


def build_program(name: str, graphs: Sequence[LabeledGraph], opts: Options) -> Program:
    try:
        cls = PROGRAMS[name]
    except KeyError:
        raise InvalidModification(f"unknown program {name!r}") from None
    if not graphs:
        raise InvalidModification("no graph given")
    if len(graphs) > 1 and not cls.factored:
        raise InvalidModification(f"program {name} takes a single graph")
    return cls.build(list(graphs), opts)
