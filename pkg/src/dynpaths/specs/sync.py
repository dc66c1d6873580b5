"""Synchronous multi-tape automata recognizing regular relations.

A tape symbol of ``None`` is the padding symbol; in files it is written ``_``.
Automata may be nondeterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from ..errors import ParseError, PaddingViolation
from .dfa import Dfa

PAD = None
PAD_TEXT = "_"

Column = tuple  # tuple[str | None, ...]


@dataclass(frozen=True)
class SyncAutomaton:
    arity: int
    n_states: int
    start: int
    finals: frozenset[int]
    transitions: frozenset[tuple[int, Column, int]]

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.n_states:
            raise ValueError("start state out of range")
        for p, col, q in self.transitions:
            if len(col) != self.arity:
                raise ValueError(f"column {col} does not have arity {self.arity}")
            if not (0 <= p < self.n_states and 0 <= q < self.n_states):
                raise ValueError("transition references unknown state")

    def symbols(self) -> set[str]:
        return {s for _, col, _ in self.transitions for s in col if s is not PAD}

    def out(self, p: int) -> list[tuple[Column, int]]:
        return [(col, q) for a, col, q in self.transitions if a == p]

    def accepts(self, words: Sequence[Sequence[str]]) -> bool:
        """Membership of a word tuple, padded to a common length."""
        if len(words) != self.arity:
            raise ValueError("wrong number of tapes")
        length = max((len(w) for w in words), default=0)
        cols = [tuple(w[t] if t < len(w) else PAD for w in words) for t in range(length)]
        current = {self.start}
        for col in cols:
            current = {q for p, c, q in self.transitions if p in current and c == col}
            if not current:
                return False
        return bool(current & self.finals)


def validate_sync(a: SyncAutomaton) -> None:
    """Raise PaddingViolation if some run reads a letter on a tape after padding on it."""
    for tape in range(a.arity):
        # states entered after padding was read on this tape
        padded = {q for _, col, q in a.transitions if col[tape] is PAD}
        stack = list(padded)
        while stack:
            p = stack.pop()
            for col, q in a.out(p):
                if col[tape] is not PAD:
                    raise PaddingViolation(tape, p)
                if q not in padded:
                    padded.add(q)
                    stack.append(q)


def from_dfa(dfa: Dfa) -> SyncAutomaton:
    trans = frozenset((p, (s,), q) for p, s, q in dfa.transitions())
    return SyncAutomaton(1, dfa.n_states, dfa.start, dfa.finals, trans)


def equal_length(alphabet: Sequence[str], arity: int = 2) -> SyncAutomaton:
    trans = frozenset((0, col, 0) for col in product(alphabet, repeat=arity))
    return SyncAutomaton(arity, 1, 0, frozenset({0}), trans)


def equality(alphabet: Sequence[str], arity: int = 2) -> SyncAutomaton:
    trans = frozenset((0, (s,) * arity, 0) for s in alphabet)
    return SyncAutomaton(arity, 1, 0, frozenset({0}), trans)


def prefix_relation(alphabet: Sequence[str]) -> SyncAutomaton:
    """Pairs ``(w1, w2)`` with ``w1`` a prefix of ``w2``."""
    trans = {(0, (s, s), 0) for s in alphabet}
    trans |= {(p, (PAD, s), 1) for s in alphabet for p in (0, 1)}
    return SyncAutomaton(2, 2, 0, frozenset({0, 1}), frozenset(trans))


def universal(alphabet: Sequence[str]) -> SyncAutomaton:
    return SyncAutomaton(1, 1, 0, frozenset({0}), frozenset((0, (s,), 0) for s in alphabet))


def parse_sync(text: str) -> SyncAutomaton:
    arity = n_states = start = None
    finals: list[int] = []
    trans: set[tuple[int, Column, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        try:
            if head == "arity":
                (a_text,) = args
                arity = int(a_text)
            elif head == "states":
                (n_text,) = args
                n_states = int(n_text)
            elif head == "start":
                (s_text,) = args
                start = int(s_text)
            elif head == "final":
                finals.extend(int(x) for x in args)
            elif head == "trans":
                p_text, col_text, q_text = args
                col = tuple(PAD if s == PAD_TEXT else s for s in col_text.split(","))
                if arity is not None and len(col) != arity:
                    raise ParseError(f"column {col_text!r} does not have arity {arity}", lineno)
                trans.add((int(p_text), col, int(q_text)))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno)
        except ValueError as exc:
            raise ParseError(f"malformed {head!r} line: {exc}", lineno) from None
    if arity is None or n_states is None or start is None:
        raise ParseError("sync automaton needs 'arity', 'states' and 'start' lines")
    try:
        return SyncAutomaton(arity, n_states, start, frozenset(finals), frozenset(trans))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def dump_sync(a: SyncAutomaton) -> str:
    lines = [f"arity {a.arity}", f"states {a.n_states}", f"start {a.start}",
             "final " + " ".join(map(str, sorted(a.finals)))]
    for p, col, q in sorted(a.transitions, key=lambda t: (t[0], [c or "" for c in t[1]], t[2])):
        lines.append(f"trans {p} {','.join(PAD_TEXT if s is PAD else s for s in col)} {q}")
    return "\n".join(lines) + "\n"


def columns(alphabet: Iterable[str], arity: int) -> list[Column]:
    """Every column over ``alphabet`` plus padding, except the all-padding one."""
    cols = list(product(list(alphabet) + [PAD], repeat=arity))
    return [c for c in cols if any(s is not PAD for s in c)]
