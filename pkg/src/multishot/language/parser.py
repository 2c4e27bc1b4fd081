"""Recursive-descent parser for the supported clingo subset."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    CMP_OPS, MIRROR, NEGATE, AggregateElement, ChoiceElement, ChoiceRule, Comparison,
    Constraint, CountAggregate, ExternalDecl, Literal, MinimizeDecl, NormalRule,
    ParsedProgram, ProgramDecl, ShowDecl,
)
from .terms import (
    Atom, BinaryOp, Function, Interval, Number, Pool, SymbolicConst, Term, UnaryMinus, Variable,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class UnsafeError(ParseError):
    pass


RESERVED_PREFIX = "__"

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<bcomment>%\*.*?\*%)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[a-z]+)
  | (?P<number>[0-9]+)
  | (?P<variable>_*[A-Z][A-Za-z0-9_']*|_)
  | (?P<ident>_*[a-z][A-Za-z0-9_']*)
  | (?P<op>:-|\.\.|!=|<=|>=|==|<>|[.,;:(){}@<>=+\-*/\\])
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment", "bcomment"):
            if kind == "op" and s == "==":
                s = "="
            elif kind == "op" and s == "<>":
                s = "!="
            tokens.append(Token(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.anon = 0
        self.incmode = False
        self.constants: dict = {}

    # token helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("op", "directive") and t.text == text

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            self.error(f"expected {text!r} but found {t.text or 'end of input'!r}")
        return self.next()

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            self.error(f"expected identifier but found {t.text or 'end of input'!r}")
        if t.text.startswith(RESERVED_PREFIX):
            self.error(f"identifier {t.text!r} uses the reserved prefix {RESERVED_PREFIX!r}")
        return self.next().text

    # program
    def program(self) -> ParsedProgram:
        stmts = []
        params_of: dict[str, tuple] = {"base": ()}
        while self.peek().kind != "eof":
            start = self.peek()
            for st in self.statement():
                if isinstance(st, ProgramDecl):
                    known = params_of.setdefault(st.name, st.params)
                    if known != st.params:
                        raise ParseError(
                            f"program {st.name!r} redeclared with parameters {st.params}, previously {known}",
                            start.line, start.col)
                else:
                    check_safety(st, start.line, start.col)
                stmts.append(st)
        return ParsedProgram(stmts, self.incmode, self.constants)

    def statement(self) -> list:
        t = self.peek()
        if t.kind == "directive":
            return self.directive()
        if self.at(":-"):
            self.next()
            body = self.body()
            self.expect(".")
            return [Constraint(tuple(body))]
        head = self.head()
        body = []
        if self.at(":-"):
            self.next()
            body = self.body()
        self.expect(".")
        if isinstance(head, ChoiceRule):
            return [ChoiceRule(head.lb, head.elements, head.ub, tuple(body))]
        return [NormalRule(head, tuple(body))]

    def directive(self) -> list:
        tok = self.next()
        d = tok.text
        if d == "#program":
            name = self.ident()
            params = []
            if self.at("("):
                self.next()
                params.append(self.ident())
                while self.at(","):
                    self.next()
                    params.append(self.ident())
                self.expect(")")
            self.expect(".")
            return [ProgramDecl(name, tuple(params))]
        if d == "#external":
            atom = self.atom()
            body = []
            if self.at(":"):
                self.next()
                body = self.literals()
            self.expect(".")
            return [ExternalDecl(atom, tuple(body))]
        if d == "#show":
            if self.at("."):
                self.error("only the '#show p/n.' form is supported", tok)
            name = self.ident()
            self.expect("/")
            n = self.peek()
            if n.kind != "number":
                self.error("expected arity after '/'")
            self.next()
            self.expect(".")
            return [ShowDecl(name, int(n.text))]
        if d == "#minimize":
            self.expect("{")
            out = []
            if not self.at("}"):
                out.append(self.minimize_element())
                while self.at(";"):
                    self.next()
                    out.append(self.minimize_element())
            self.expect("}")
            self.expect(".")
            return out
        if d == "#include":
            self.expect("<")
            name = self.peek()
            if name.kind != "ident" or name.text != "incmode":
                self.error("only '#include <incmode>.' is supported")
            self.next()
            self.expect(">")
            self.expect(".")
            self.incmode = True
            return []
        if d == "#const":
            name = self.ident()
            self.expect("=")
            value = self.term()
            self.expect(".")
            if any(True for _ in value.variables()):
                self.error("constant definitions must be variable-free", tok)
            # the first definition wins, as for command-line overrides
            self.constants.setdefault(name, value)
            return []
        if d == "#script":
            self.error("#script blocks are not supported; use the control-script mode instead", tok)
        self.error(f"unsupported directive {d}", tok)

    def minimize_element(self) -> MinimizeDecl:
        weight = self.term()
        prio = Number(0)
        if self.at("@"):
            self.next()
            prio = self.term()
        terms = []
        while self.at(","):
            self.next()
            terms.append(self.term())
        cond = []
        if self.at(":"):
            self.next()
            cond = self.literals()
        return MinimizeDecl(weight, prio, tuple(terms), tuple(cond))

    def head(self):
        # choice with optional lower bound
        if self.at("{") or (self.peek().kind == "number" and self.peek(1).text == "{"):
            lb = None
            if self.peek().kind == "number":
                lb = int(self.next().text)
            self.expect("{")
            elems = []
            if not self.at("}"):
                elems.append(self.choice_element())
                while self.at(";"):
                    self.next()
                    elems.append(self.choice_element())
            self.expect("}")
            ub = None
            if self.peek().kind == "number":
                ub = int(self.next().text)
            return ChoiceRule(lb, tuple(elems), ub)
        return self.atom()

    def choice_element(self) -> ChoiceElement:
        atom = self.atom()
        cond = []
        if self.at(":"):
            self.next()
            cond = self.literals()
        return ChoiceElement(atom, tuple(cond))

    def literals(self) -> list:
        out = [self.literal()]
        while self.at(","):
            self.next()
            out.append(self.literal())
        return out

    def body(self) -> list:
        out = [self.body_element()]
        while self.at(","):
            self.next()
            out.append(self.body_element())
        return out

    def body_element(self):
        negated = False
        if self.peek().kind == "ident" and self.peek().text == "not":
            self.next()
            negated = True
        if self.at("#count"):
            agg = self.count_aggregate()
            if negated:
                agg = CountAggregate(NEGATE[agg.op], agg.bound, agg.elements)
            return agg
        # bound-first aggregate:  b op #count{...}
        save, anon = self.i, self.anon
        lhs = self.term()
        if self.peek().kind == "op" and self.peek().text in CMP_OPS and self.peek(1).text == "#count":
            op = self.next().text
            agg = self.count_aggregate(bound_given=(MIRROR[op], lhs))
            if negated:
                agg = CountAggregate(NEGATE[agg.op], agg.bound, agg.elements)
            return agg
        self.i, self.anon = save, anon
        lit = self.literal(allow_not=False)
        if negated:
            if lit.is_comparison:
                c = lit.content
                return Literal(Comparison(NEGATE[c.op], c.lhs, c.rhs))
            return Literal(lit.content, True)
        return lit

    def count_aggregate(self, bound_given=None) -> CountAggregate:
        self.expect("#count")
        self.expect("{")
        elems = []
        if not self.at("}"):
            elems.append(self.aggregate_element())
            while self.at(";"):
                self.next()
                elems.append(self.aggregate_element())
        self.expect("}")
        if bound_given is not None:
            op, bound = bound_given
            return CountAggregate(op, bound, tuple(elems))
        t = self.peek()
        if not (t.kind == "op" and t.text in CMP_OPS):
            self.error("expected comparison after #count{...}")
        op = self.next().text
        bound = self.term()
        return CountAggregate(op, bound, tuple(elems))

    def aggregate_element(self) -> AggregateElement:
        terms = [self.term()]
        while self.at(","):
            self.next()
            terms.append(self.term())
        cond = []
        if self.at(":"):
            self.next()
            cond = self.literals()
        return AggregateElement(tuple(terms), tuple(cond))

    def literal(self, allow_not: bool = True) -> Literal:
        negated = False
        if allow_not and self.peek().kind == "ident" and self.peek().text == "not":
            self.next()
            negated = True
        start = self.peek()
        lhs = self.term()
        t = self.peek()
        if t.kind == "op" and t.text in CMP_OPS:
            op = self.next().text
            rhs = self.term()
            if negated:
                op = NEGATE[op]
            return Literal(Comparison(op, lhs, rhs))
        return Literal(self._to_atom(lhs, start), negated)

    def atom(self) -> Atom:
        start = self.peek()
        return self._to_atom(self.term(), start)

    def _to_atom(self, t: Term, tok: Token) -> Atom:
        if isinstance(t, SymbolicConst):
            return Atom(t.name, ())
        if isinstance(t, Function):
            return Atom(t.name, t.args)
        raise ParseError(f"expected an atom but found term {t}", tok.line, tok.col)

    # terms
    def term(self) -> Term:
        lo = self.additive()
        if self.at(".."):
            self.next()
            hi = self.additive()
            return Interval(lo, hi)
        return lo

    def additive(self) -> Term:
        t = self.multiplicative()
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.next().text
            t = BinaryOp(op, t, self.multiplicative())
        return t

    def multiplicative(self) -> Term:
        t = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/", "\\"):
            op = self.next().text
            t = BinaryOp(op, t, self.unary())
        return t

    def unary(self) -> Term:
        if self.at("-"):
            self.next()
            arg = self.unary()
            if isinstance(arg, Number):
                return Number(-arg.value)
            return UnaryMinus(arg)
        return self.primary()

    def primary(self) -> Term:
        t = self.peek()
        if t.kind == "number":
            self.next()
            return Number(int(t.text))
        if t.kind == "variable":
            self.next()
            if t.text == "_":
                self.anon += 1
                return Variable(f"_Anon{self.anon}")
            return Variable(t.text)
        if t.kind == "ident":
            if t.text == "not":
                self.error("unexpected 'not'")
            name = self.ident()
            if self.at("("):
                self.next()
                args = self.arguments(t)
                self.expect(")")
                return Function(name, tuple(args))
            return SymbolicConst(name)
        if self.at("("):
            self.next()
            first = self.term()
            if self.at(";"):
                alts = [first]
                while self.at(";"):
                    self.next()
                    alts.append(self.term())
                self.expect(")")
                return Pool(tuple(alts))
            if self.at(","):
                self.error("tuple terms are not supported")
            self.expect(")")
            return first
        self.error(f"unexpected token {t.text or 'end of input'!r}")

    def arguments(self, tok: Token) -> list:
        args = [self.term()]
        if self.at(";"):
            alts = [args[0]]
            while self.at(";"):
                self.next()
                alts.append(self.term())
            if self.at(","):
                self.error("pools of argument tuples are not supported; pool a single argument instead")
            return [Pool(tuple(alts))]
        while self.at(","):
            self.next()
            args.append(self.term())
            if self.at(";"):
                self.error("pools of argument tuples are not supported; pool a single argument instead")
        return args


def parse_program(text: str) -> ParsedProgram:
    """Parse source text into an ordered statement list."""
    return _Parser(text).program()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek().kind != "eof":
        p.error("trailing input after term")
    return t


def parse_atom(text: str) -> Atom:
    p = _Parser(text)
    a = p.atom()
    if p.peek().kind != "eof":
        p.error("trailing input after atom")
    return a


# safety

def _binding_vars(t: Term) -> set:
    """Variables bound by matching: those outside arithmetic and intervals."""
    if isinstance(t, Variable):
        return {t.name}
    if isinstance(t, Function):
        out = set()
        for a in t.args:
            out |= _binding_vars(a)
        return out
    if isinstance(t, Pool):
        sets = [_binding_vars(a) for a in t.alternatives]
        return set.intersection(*sets) if sets else set()
    return set()


def atom_binding_vars(a: Atom) -> set:
    out = set()
    for t in a.args:
        out |= _binding_vars(t)
    return out


def _positive_binders(lits) -> set:
    out = set()
    for lit in lits:
        if isinstance(lit, Literal) and not lit.negated and not lit.is_comparison:
            out |= atom_binding_vars(lit.atom)
    return out


def _vars(x) -> set:
    return set(x.variables())


def _check(needed: set, bound: set, what: str, line: int, col: int):
    missing = needed - bound
    if missing:
        names = ", ".join(sorted(v if not v.startswith("_Anon") else "_" for v in missing))
        raise UnsafeError(f"unsafe variables in {what}: {names}", line, col)


def check_safety(st, line: int = 0, col: int = 0) -> None:
    """Raise UnsafeError if some variable is not bound by a positive body atom."""
    if isinstance(st, (ProgramDecl, ShowDecl)):
        return
    if isinstance(st, MinimizeDecl):
        bound = _positive_binders(st.condition)
        needed = _vars(st.weight) | _vars(st.priority)
        for t in st.tuple:
            needed |= _vars(t)
        for lit in st.condition:
            needed |= _vars(lit)
        _check(needed, bound, "#minimize element", line, col)
        return
    if isinstance(st, ExternalDecl):
        bound = _positive_binders(st.body)
        needed = _vars(st.atom)
        for lit in st.body:
            needed |= _vars(lit)
        _check(needed, bound, "#external declaration", line, col)
        return
    body = st.body
    bound = _positive_binders(body)
    needed = set()
    for b in body:
        if isinstance(b, Literal):
            needed |= _vars(b)
    what = "rule"
    if isinstance(st, NormalRule):
        needed |= _vars(st.head)
    for b in body:
        if isinstance(b, CountAggregate):
            needed |= _vars(b.bound)
            for e in b.elements:
                local = set()
                for t in e.terms:
                    local |= _vars(t)
                for lit in e.condition:
                    local |= _vars(lit)
                _check(local, bound | _positive_binders(e.condition), "aggregate element", line, col)
    if isinstance(st, ChoiceRule):
        for e in st.elements:
            local = _vars(e.atom)
            for lit in e.condition:
                local |= _vars(lit)
            _check(local, bound | _positive_binders(e.condition), "choice element", line, col)
    _check(needed, bound, what, line, col)
