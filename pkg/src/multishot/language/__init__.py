from .ast import (
    AggregateElement, ChoiceElement, ChoiceRule, Comparison, Constraint, CountAggregate,
    ExternalDecl, Literal, MinimizeDecl, NormalRule, ParsedProgram, ProgramDecl, ShowDecl,
)
from .parser import ParseError, UnsafeError, check_safety, parse_atom, parse_program, parse_term
from .program import ArityError, Subprogram, SubprogramTable, split_subprograms, substitute, substitute_statement
from .render import render
from .terms import (
    Atom, BinaryOp, Function, Interval, Number, Pool, SymbolicConst, Term, UnaryMinus, Variable,
    sorted_atoms,
)
