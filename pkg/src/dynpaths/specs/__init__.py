from .dfa import Dfa, compile_dfa, parse_dfa, regex_to_dfa
from .grammar import CnfGrammar, RawGrammar, cnf_from_rules, parse_grammar, to_cnf
from .queries import EcrpqQuery, NepsSpec, parse_ecrpq, parse_neps, satisfies
from .sync import (PAD, SyncAutomaton, equal_length, equality, from_dfa, parse_sync,
                   prefix_relation, universal, validate_sync)

__all__ = [
    "Dfa", "compile_dfa", "parse_dfa", "regex_to_dfa",
    "CnfGrammar", "RawGrammar", "cnf_from_rules", "parse_grammar", "to_cnf",
    "EcrpqQuery", "NepsSpec", "parse_ecrpq", "parse_neps", "satisfies",
    "PAD", "SyncAutomaton", "equal_length", "equality", "from_dfa", "parse_sync",
    "prefix_relation", "universal", "validate_sync",
]
