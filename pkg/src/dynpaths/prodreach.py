"""Reachability in graph products built from maintained per-factor data.

A product node ``(x_1, ..., x_m)`` reaches ``(y_1, ..., y_m)`` exactly when
every factor has a path ``x_i -> y_i`` of the length forced by how often
each rule moved that factor.  Plain products force one common length; NEPS
rule sets force ``d = sum_j n_j a_j`` for multiplicities ``n_j``.  On
undirected factors only parities matter once lengths are large, which turns
the question into a linear system over Z2.

Labeled products and palindrome queries run on acyclic graphs through the
ECRPQ engine with the letter-by-letter equality relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence, Union

import numpy as np

from .dynecrpq import EcrpqState, ecrpq_compile, ecrpq_init, ecrpq_recompute, ecrpq_update
from .dyndist import (AcyDistState, InsDistState, UndirDistState, acydist_init, acydist_update,
                      insdist_has_length, insdist_init, insdist_update, undir_has_length, undir_init,
                      undir_update)
from .errors import BoundExceeded, ComplexityGuard, InvalidModification
from .gf2 import Gf2Matrix, gf2_solvable
from .graphstore import LabeledGraph, Modification
from .specs.queries import EcrpqQuery, NepsSpec
from .specs.sync import equality

DistState = Union[InsDistState, AcyDistState, UndirDistState]

REGIMES = ("insert-only", "acyclic", "undirected")
MAX_RULES = 6               # multiplicity enumeration in the directed regimes
MAX_DIRECTED_FACTORS = 4    # general directed factors
MAX_ENUMERATION = 1 << 22


# -- per-factor length queries ---------------------------------------------------

def has_length(state: DistState, x: int, y: int, length: int) -> bool:
    if isinstance(state, InsDistState):
        return insdist_has_length(state, x, y, length)
    if isinstance(state, AcyDistState):
        return 0 <= length < state.D.shape[2] and bool(state.D[x, y, length])
    return undir_has_length(state, x, y, length)


def length_vector(state: DistState, x: int, y: int, upto: int) -> np.ndarray:
    """Boolean vector over ``0..upto`` marking realizable path lengths."""
    out = np.zeros(upto + 1, dtype=bool)
    if isinstance(state, InsDistState):
        if upto > state.lmax:
            raise BoundExceeded(f"lengths up to {upto} needed, maintained bound is {state.lmax}")
        out[:] = state.A[x, y, 1, :upto + 1]
    elif isinstance(state, AcyDistState):
        row = state.D[x, y]
        out[:min(len(row), upto + 1)] = row[:upto + 1]
    else:
        for length in range(upto + 1):
            out[length] = undir_has_length(state, x, y, length)
    return out


def _check_bound(state: DistState, needed: int) -> None:
    if isinstance(state, InsDistState) and state.lmax < needed:
        raise BoundExceeded(f"factor keeps lengths up to {state.lmax}, the product needs {needed}")


def _check_nodes(states: Sequence[DistState], xs: Sequence[int], ys: Sequence[int]) -> None:
    if not len(states) == len(xs) == len(ys):
        raise ValueError("one source and one target per factor expected")
    for st, x, y in zip(states, xs, ys):
        if not (0 <= x < st.graph.n and 0 <= y < st.graph.n):
            raise InvalidModification(f"node out of range for a factor with {st.graph.n} nodes")


def product_reach(dists: Sequence[DistState], xs: Sequence[int], ys: Sequence[int]) -> bool:
    """Reachability in the product where every factor moves at every step."""
    _check_nodes(dists, xs, ys)
    bound = prod(st.graph.n for st in dists)
    for st in dists:
        _check_bound(st, bound)
    common = np.ones(bound + 1, dtype=bool)
    for st, x, y in zip(dists, xs, ys):
        common &= length_vector(st, x, y, bound)
        if not common.any():
            return False
    return bool(common.any())


# -- NEPS ------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorMod:
    factor: int
    mod: Modification


@dataclass(frozen=True)
class RuleFlip:
    rule: int
    bit: int


NepsChange = Union[FactorMod, RuleFlip]


@dataclass(frozen=True)
class NepsState:
    spec: NepsSpec
    regime: str
    factors: tuple[DistState, ...]

    @property
    def graphs(self) -> tuple[LabeledGraph, ...]:
        return tuple(f.graph for f in self.factors)


def _guard(spec: NepsSpec, regime: str) -> None:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {', '.join(REGIMES)}")
    if regime == "undirected":
        return
    if len(spec.rules) > MAX_RULES:
        raise ComplexityGuard(f"{len(spec.rules)} rules over directed factors (at most {MAX_RULES})")
    if regime == "insert-only" and spec.m > MAX_DIRECTED_FACTORS:
        raise ComplexityGuard(f"{spec.m} general directed factors (at most {MAX_DIRECTED_FACTORS})")


def neps_init(spec: NepsSpec, regime: str, sizes: Sequence[int], lmax: int | None = None,
              alphabet: tuple[str, ...] = ("e",)) -> NepsState:
    """Edgeless factors of the given sizes; ``lmax`` defaults to the product size."""
    _guard(spec, regime)
    if len(sizes) != spec.m:
        raise ValueError(f"{spec.m} factors declared, {len(sizes)} sizes given")
    if regime == "insert-only":
        lmax = prod(sizes) if lmax is None else lmax
        factors = tuple(insdist_init(n, lmax, alphabet) for n in sizes)
    elif regime == "acyclic":
        factors = tuple(acydist_init(n, alphabet) for n in sizes)
    else:
        factors = tuple(undir_init(n, alphabet) for n in sizes)
    return NepsState(spec, regime, factors)


def neps_from_graphs(spec: NepsSpec, regime: str, graphs: Sequence[LabeledGraph],
                     lmax: int | None = None) -> NepsState:
    alphabet = graphs[0].alphabet if graphs else ("e",)
    s = neps_init(spec, regime, [g.n for g in graphs], lmax, alphabet)
    for i, g in enumerate(graphs):
        for u, sym, v in g.sorted_edges():
            if regime == "undirected" and u > v:
                continue
            s = neps_update(s, FactorMod(i, Modification.ins(sym, u, v)))
    return s


_UPDATE = {"insert-only": insdist_update, "acyclic": acydist_update, "undirected": undir_update}


def neps_update(s: NepsState, change: NepsChange) -> NepsState:
    if isinstance(change, RuleFlip):
        return NepsState(s.spec.flip(change.rule, change.bit), s.regime, s.factors)
    i = change.factor
    if not 0 <= i < len(s.factors):
        raise InvalidModification(f"no factor {i}")
    updated = _UPDATE[s.regime](s.factors[i], change.mod)
    return NepsState(s.spec, s.regime, s.factors[:i] + (updated,) + s.factors[i + 1:])


def _reach_by_multiplicities(s: NepsState, xs: Sequence[int], ys: Sequence[int]) -> bool:
    rules = [r for r in s.spec.rules if any(r)]
    if s.regime == "insert-only":
        needed = prod(f.graph.n for f in s.factors)
        for f in s.factors:
            _check_bound(f, needed)
        bounds = [needed] * len(s.factors)
    else:
        bounds = [max(f.graph.n - 1, 0) for f in s.factors]
    caps = [min(bounds[i] for i, bit in enumerate(r) if bit) for r in rules]
    if prod(c + 1 for c in caps) > MAX_ENUMERATION:
        raise ComplexityGuard("too many rule multiplicities to enumerate")
    k = len(rules)
    ok = np.ones((1,) * k, dtype=bool)
    for i, (f, x, y) in enumerate(zip(s.factors, xs, ys)):
        d = np.zeros((1,) * k, dtype=np.int64)
        for j, (r, cap) in enumerate(zip(rules, caps)):
            if r[i]:
                d = d + np.arange(cap + 1).reshape((1,) * j + (cap + 1,) + (1,) * (k - j - 1))
        lengths = length_vector(f, x, y, bounds[i])
        padded = np.zeros(int(d.max()) + 1, dtype=bool)
        padded[:min(len(padded), len(lengths))] = lengths[:len(padded)]
        ok = ok & padded[d]
        if not ok.any():
            return False
    return bool(ok.any())


def _walk_bounds(f: UndirDistState, x: int, y: int) -> tuple[bool, bool]:
    """(y reachable from x, x's component is bipartite)."""
    reach = x == y or (x, y) in f.d_even or (x, y) in f.d_odd
    return reach, (x, x) not in f.d_odd


def neps_system(s: NepsState, xs: Sequence[int], ys: Sequence[int]) -> tuple[Gf2Matrix, list[int], bool]:
    """Parity system ``B n = d`` for undirected factors.

    Rules that move a factor sitting on an isolated node can never be used
    and are dropped.  The flag is false when some factor cannot reach its
    target at all or has to move but no usable rule moves it.
    """
    if s.regime != "undirected":
        raise ValueError("parity systems exist for undirected factors only")
    _check_nodes(s.factors, xs, ys)
    usable = [r for r in s.spec.rules
              if not any(bit and x in f.isolated for bit, f, x in zip(r, s.factors, xs))]
    feasible = True
    rows, d = [], []
    for i, (f, x, y) in enumerate(zip(s.factors, xs, ys)):
        reach, bipartite = _walk_bounds(f, x, y)
        if not reach or (x != y and not any(r[i] for r in usable)):
            feasible = False
        if bipartite:
            rows.append([r[i] for r in usable])
            d.append(0 if (x, y) in f.d_even else 1)
        else:
            rows.append([0] * len(usable))
            d.append(0)
    return Gf2Matrix.from_lists(rows, len(usable)), d, feasible


def neps_reach(s: NepsState, xs: Sequence[int], ys: Sequence[int]) -> bool:
    _check_nodes(s.factors, xs, ys)
    if s.regime != "undirected":
        return _reach_by_multiplicities(s, xs, ys)
    B, d, feasible = neps_system(s, xs, ys)
    return feasible and gf2_solvable(B, d)


# -- labeled acyclic products ------------------------------------------------------

def _pad(g: LabeledGraph, n: int) -> LabeledGraph:
    return g if g.n == n else LabeledGraph(n, g.alphabet, g.directed, g.edges)


def _equality_plan(alphabet: tuple[str, ...], m: int):
    xs = tuple(f"x{i}" for i in range(m))
    ys = tuple(f"y{i}" for i in range(m))
    paths = tuple(f"p{i}" for i in range(m))
    q = EcrpqQuery(xs + ys, xs + ys, tuple(zip(xs, paths, ys)),
                   ((equality(alphabet, m), paths),), alphabet)
    return ecrpq_compile(q)


@dataclass(frozen=True)
class LabeledProductState:
    """Equally labeled paths in ``m`` acyclic factors, smaller factors padded with isolated nodes."""

    sizes: tuple[int, ...]
    inner: EcrpqState

    def ends(self, xs: Sequence[int]) -> set[tuple[int, ...]]:
        a = self.inner.plan.automaton
        xs = tuple(xs)
        return {ys for f in a.finals for x2, ys, _ in self.inner.entries(a.start, f) if x2 == xs}


def labeled_product_init(sizes: Sequence[int], alphabet: Sequence[str]) -> LabeledProductState:
    plan = _equality_plan(tuple(alphabet), len(sizes))
    return LabeledProductState(tuple(sizes), ecrpq_init(plan, max(sizes, default=0), alphabet))


def labeled_product_from_graphs(graphs: Sequence[LabeledGraph]) -> LabeledProductState:
    n = max((g.n for g in graphs), default=0)
    alphabet = graphs[0].alphabet if graphs else ()
    plan = _equality_plan(alphabet, len(graphs))
    inner = ecrpq_recompute(plan, [_pad(g, n) for g in graphs])
    return LabeledProductState(tuple(g.n for g in graphs), inner)


def labeled_product_update(s: LabeledProductState, factor: int, m: Modification) -> LabeledProductState:
    if not 0 <= factor < len(s.sizes):
        raise InvalidModification(f"no factor {factor}")
    if not (0 <= m.u < s.sizes[factor] and 0 <= m.v < s.sizes[factor]):
        raise InvalidModification(f"edge {m.u}->{m.v} outside factor {factor}")
    return LabeledProductState(s.sizes, ecrpq_update(s.inner, factor, m))


def labeled_product_reach(s: LabeledProductState, xs: Sequence[int], ys: Sequence[int]) -> bool:
    if not len(xs) == len(ys) == len(s.sizes):
        raise ValueError("one source and one target per factor expected")
    return tuple(ys) in s.ends(xs)


def labeled_acyclic_product_reach(graphs: Sequence[LabeledGraph], xs: Sequence[int], ys: Sequence[int]) -> bool:
    return labeled_product_reach(labeled_product_from_graphs(graphs), xs, ys)


# -- palindromes ------------------------------------------------------------------

@dataclass(frozen=True)
class PalindromeState:
    """Tape 0 reads the graph, tape 1 its reverse; equal words meet in the middle."""

    inner: EcrpqState

    @property
    def graph(self) -> LabeledGraph:
        return self.inner.copies[0]


def palindrome_init(n: int, alphabet: Sequence[str]) -> PalindromeState:
    return PalindromeState(ecrpq_init(_equality_plan(tuple(alphabet), 2), n, alphabet))


def palindrome_update(s: PalindromeState, m: Modification) -> PalindromeState:
    inner = ecrpq_update(s.inner, 0, m)
    return PalindromeState(ecrpq_update(inner, 1, m.reversed()))


def palindrome_from_graph(g: LabeledGraph) -> PalindromeState:
    s = palindrome_init(g.n, g.alphabet)
    for u, sym, v in g.sorted_edges():
        s = palindrome_update(s, Modification.ins(sym, u, v))
    return s


def palindrome_reach(s: PalindromeState, x: int, y: int) -> bool:
    if x == y:
        return True
    a = s.inner.plan.automaton
    adj = s.graph.adjacency()
    for f in a.finals:
        for xs, (z, z2), _ in s.inner.entries(a.start, f):
            # even length: both halves end in z; odd: a middle edge z -> z2
            if xs == (x, y) and (z == z2 or adj[z, z2]):
                return True
    return False


def palindrome_query_acyclic(g: LabeledGraph, x: int, y: int) -> bool:
    return palindrome_reach(palindrome_from_graph(g), x, y)
