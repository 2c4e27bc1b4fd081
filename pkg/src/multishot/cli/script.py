"""Line-oriented control scripts.

Commands, one per line (`#` starts a comment):

    ground base succ(1)
    assign p(3) true            # true | false | free (also t, f, u)
    release p(3)
    solve [limit N] [assume A ... [not B ...]]
    cleanup
    echo any text
    let NAME = A B ...
    capture NAME p/3 from p/4 at horizon
    dump

Wherever atoms are expected, `$NAME` expands to the atoms bound by `let`
or `capture`.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..control import _resolve
from ..grounder import dump_rules
from ..language import Atom, Function, Number, ParseError, SymbolicConst, parse_atom, parse_term


class ScriptError(Exception):
    def __init__(self, msg: str, line: int = 0):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass(frozen=True)
class Ground:
    parts: tuple


@dataclass(frozen=True)
class Assign:
    atoms: tuple
    value: str


@dataclass(frozen=True)
class Release:
    atoms: tuple


@dataclass(frozen=True)
class Solve:
    limit: int | None = None
    must_true: tuple = ()
    must_false: tuple = ()


@dataclass(frozen=True)
class Cleanup:
    pass


@dataclass(frozen=True)
class Echo:
    text: str


@dataclass(frozen=True)
class Let:
    name: str
    atoms: tuple


@dataclass(frozen=True)
class Capture:
    name: str
    target: tuple      # (predicate, arity)
    source: tuple
    at: str            # integer literal or constant name


@dataclass(frozen=True)
class Dump:
    pass


VALUES = {"true": "t", "t": "t", "false": "f", "f": "f", "free": "u", "undef": "u", "u": "u"}


def split_top(text: str) -> list:
    """Split on whitespace that is not nested inside parentheses."""
    out, cur, depth = [], [], 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def _atom_ref(tok: str):
    # `$NAME` stays symbolic until run time
    if tok.startswith("$"):
        return tok
    a = parse_atom(tok)
    if not a.is_ground():
        raise ParseError(f"atom {tok} is not ground")
    return a


def _sig(tok: str) -> tuple:
    name, _, arity = tok.partition("/")
    if not name or not arity.isdigit():
        raise ParseError(f"expected a signature like p/3, got {tok!r}")
    return name, int(arity)


def _part(tok: str) -> tuple:
    t = parse_term(tok)
    if isinstance(t, SymbolicConst):
        return t.name, ()
    if isinstance(t, Function) and t.name and t.is_ground():
        return t.name, t.args
    raise ParseError(f"expected a program name with ground arguments, got {tok!r}")


def parse_command(line: str):
    toks = split_top(line)
    cmd, args = toks[0], toks[1:]
    if cmd == "ground":
        if not args:
            raise ParseError("ground needs at least one program")
        return Ground(tuple(_part(t) for t in args))
    if cmd == "assign":
        if len(args) < 2 or args[-1].lower() not in VALUES:
            raise ParseError("usage: assign ATOM... true|false|free")
        return Assign(tuple(_atom_ref(t) for t in args[:-1]), VALUES[args[-1].lower()])
    if cmd == "release":
        if not args:
            raise ParseError("usage: release ATOM...")
        return Release(tuple(_atom_ref(t) for t in args))
    if cmd == "solve":
        return _solve(args)
    if cmd == "cleanup" and not args:
        return Cleanup()
    if cmd == "dump" and not args:
        return Dump()
    if cmd == "echo":
        return Echo(line.strip()[4:].strip())
    if cmd == "let":
        if len(args) < 2 or args[1] != "=":
            raise ParseError("usage: let NAME = ATOM...")
        return Let(args[0], tuple(_atom_ref(t) for t in args[2:]))
    if cmd == "capture":
        if len(args) != 6 or args[2] != "from" or args[4] != "at":
            raise ParseError("usage: capture NAME p/n from p/m at VALUE")
        target, source = _sig(args[1]), _sig(args[3])
        if source[1] != target[1] + 1:
            raise ParseError("the source signature needs exactly one more argument")
        return Capture(args[0], target, source, args[5])
    raise ParseError(f"unknown command {cmd!r}")


def _solve(args) -> Solve:
    limit = None
    i = 0
    if i < len(args) and args[i] == "limit":
        if i + 1 >= len(args) or not args[i + 1].isdigit():
            raise ParseError("limit needs a non-negative integer")
        limit = int(args[i + 1])
        i += 2
    pos, negs = [], []
    if i < len(args):
        if args[i] != "assume":
            raise ParseError(f"unexpected {args[i]!r} in solve")
        i += 1
        negate = False
        for t in args[i:]:
            if t == "not":
                negate = True
                continue
            (negs if negate else pos).append(_atom_ref(t))
            negate = False
    return Solve(limit, tuple(pos), tuple(negs))


def parse_script(text: str) -> list:
    """Returns (line number, command) pairs."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("echo") else raw.strip()
        if not line:
            continue
        try:
            out.append((n, parse_command(line)))
        except ParseError as e:
            raise ScriptError(str(e), n) from None
    return out


class ScriptRunner:
    """Executes parsed commands against a Control."""

    def __init__(self, ctl, printer, default_limit: int = 0):
        self.ctl = ctl
        self.printer = printer
        self.default_limit = default_limit
        self.vars: dict = {}
        self.last_model = None

    def atoms(self, refs) -> list:
        out = []
        for r in refs:
            if isinstance(r, str):
                if r[1:] not in self.vars:
                    raise ScriptError(f"unbound variable {r}")
                out.extend(self.vars[r[1:]])
            else:
                out.append(r)
        return out

    def run(self, commands) -> None:
        for n, cmd in commands:
            try:
                self.execute(cmd)
            except ScriptError as e:
                raise ScriptError(str(e), n) from None

    def execute(self, cmd) -> None:
        ctl = self.ctl
        if isinstance(cmd, Ground):
            ctl.ground(list(cmd.parts))
        elif isinstance(cmd, Assign):
            for a in self.atoms(cmd.atoms):
                ctl.assign_external(a, cmd.value)
        elif isinstance(cmd, Release):
            for a in self.atoms(cmd.atoms):
                ctl.release_external(a)
        elif isinstance(cmd, Solve):
            limit = self.default_limit if cmd.limit is None else cmd.limit
            res = ctl.solve((self.atoms(cmd.must_true), self.atoms(cmd.must_false)), limit=limit)
            self.printer.result(res, ctl.shows)
            self.last_model = res.models[-1] if res.models else None
        elif isinstance(cmd, Cleanup):
            ctl.cleanup()
        elif isinstance(cmd, Echo):
            self.printer.write(cmd.text)
        elif isinstance(cmd, Let):
            self.vars[cmd.name] = self.atoms(cmd.atoms)
        elif isinstance(cmd, Capture):
            self.vars[cmd.name] = self.capture(cmd)
        elif isinstance(cmd, Dump):
            self.printer.out.write(dump_ground(ctl.state))

    def capture(self, cmd: Capture) -> list:
        if self.last_model is None:
            raise ScriptError("capture needs a model from the previous solve")
        at = self.value(cmd.at)
        src, arity = cmd.source
        got = []
        for a in self.last_model.atoms:
            if a.predicate == src and len(a.args) == arity and a.args[-1] == at:
                got.append(Atom(cmd.target[0], a.args[:-1]))
        return sorted(got, key=Atom.key)

    def value(self, tok: str):
        if tok.lstrip("-").isdigit():
            return Number(int(tok))
        consts = _resolve(dict(self.ctl.state.constants))
        if tok not in consts:
            raise ScriptError(f"unknown constant {tok!r}")
        return consts[tok]


def dump_ground(state) -> str:
    """Rules of the current module, then its inputs as #external lines."""
    m = state.module
    return dump_rules(m.rules, externals=m.inputs)
