"""Exception hierarchy shared by all dynamic programs."""

from __future__ import annotations


class DynPathsError(Exception):
    """Base class for every error raised by the engine."""


class InvalidModification(DynPathsError):
    """A modification references an unknown node or symbol."""


class DeleteAbsentEdge(DynPathsError):
    pass


class CycleWouldForm(DynPathsError):
    pass


class UnsupportedModification(DynPathsError):
    """The dynamic program has no update rule for this kind of modification."""


class BoundExceeded(DynPathsError):
    pass


class ArityUnsupported(DynPathsError):
    pass


class ComplexityGuard(DynPathsError):
    """Configuration falls into a regime the engine refuses (NP-hard in general)."""


class BudgetExceeded(DynPathsError):
    pass


class ParseError(DynPathsError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NondeterministicSpec(ParseError):
    pass


class PaddingViolation(DynPathsError):
    def __init__(self, tape: int, state: int) -> None:
        self.tape = tape
        self.state = state
        super().__init__(f"padding symbol followed by a letter on tape {tape} (state {state})")
