"""Multi-shot grounding and solving of normal logic programs."""
from importlib.resources import files

from .control import (
    Control, Ledger, SystemState, UnknownProgram, add, assign_external, cleanup, create, ground,
    release_external, solve,
)
from .language import Atom, ParseError, parse_atom, parse_program, parse_term
from .modules import Module, NotCompositional, check_compositional, join, module_from_grounding, module_stable_models
from .solver import (
    Assumptions, ExternalAssignment, SolveResult, brute_force_stable, enumerate_stable, optimize,
)


def corpus_path(name: str):
    """Path of a bundled example program, e.g. corpus_path("simple.lp")."""
    return files(__name__) / "corpus" / name


def corpus_text(*names: str) -> str:
    return "\n".join(corpus_path(n).read_text() for n in names)
