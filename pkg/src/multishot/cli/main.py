"""Command-line entry point."""
from __future__ import annotations

import argparse
import logging
import sys

from ..control import Control, add
from ..grounder import GroundingError
from ..language import ParseError, UnsafeError, parse_program, parse_term
from ..modules import NotCompositional
from .incmode import IncmodeConfig, run_incmode
from .output import Printer
from .script import ScriptError, ScriptRunner, dump_ground, parse_script

log = logging.getLogger("multishot")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multishot", description="Multi-shot grounding and solving of logic programs.")
    p.add_argument("files", nargs="*", help="program files ('-' reads stdin); a trailing integer is the model count")
    p.add_argument("-c", "--const", action="append", default=[], metavar="NAME=VALUE",
                   help="define a constant (overrides #const)")
    p.add_argument("--mode", choices=("single", "incmode", "script"),
                   help="default: script with --script, incmode with '#include <incmode>.', else single")
    p.add_argument("--script", metavar="FILE", help="control script to run")
    p.add_argument("--dump-ground", action="store_true",
                   help="print the ground module (single mode: instead of solving)")
    p.add_argument("--lax-composition", action="store_true", help="warn instead of failing on non-compositional joins")
    p.add_argument("--simplify-facts", action="store_true", help="simplify ground rules with known facts")
    p.add_argument("--trace", metavar="FILE", help="write the operation trace to FILE")
    p.add_argument("--imin", type=int, default=0)
    p.add_argument("--imax", type=int, default=None)
    p.add_argument("--istop", choices=("SAT", "UNSAT", "UNKNOWN"), default="SAT")
    return p


def _constants(defs) -> dict:
    out = {}
    for d in defs:
        name, eq, value = d.partition("=")
        name = name.strip()
        if not eq or not name:
            raise ValueError(f"bad constant definition {d!r}, expected NAME=VALUE")
        out[name] = parse_term(value.strip())
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def _split_files(items) -> tuple:
    # a trailing integer is the number of models, as in `prog file.lp 0`
    files, count = [], None
    for it in items:
        if it.isdigit() and not _is_file(it):
            count = int(it)
        else:
            files.append(it)
    return files, count


def _is_file(path: str) -> bool:
    try:
        open(path).close()
        return True
    except OSError:
        return False


def load(texts, constants, args) -> Control:
    """Each text starts in the base program, like separate input files."""
    ctl = Control(texts[0] if texts else "", constants, lax=args.lax_composition, simplify=args.simplify_facts)
    for t in texts[1:]:
        ctl.state = add(ctl.state, t)
    return ctl


def run(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    out = out or sys.stdout
    printer = Printer(out)
    try:
        constants = _constants(args.const)
        files, count = _split_files(args.files)
        texts = [_read(f) for f in files]
        mode = args.mode or ("script" if args.script else None)
        if mode is None:
            mode = "incmode" if any(parse_program(t).incmode for t in texts) else "single"
        ctl = load(texts, constants, args)
        if mode == "single":
            ctl.ground(["base"])
            if args.dump_ground:
                out.write(dump_ground(ctl.state))
            else:
                printer.result(ctl.solve(limit=1 if count is None else count), ctl.shows)
        elif mode == "incmode":
            cfg = IncmodeConfig(args.imin, args.imax, args.istop)
            run_incmode(ctl, cfg, lambda res: printer.result(res, ctl.shows), limit=1 if count is None else count)
            if args.dump_ground:
                out.write(dump_ground(ctl.state))
        else:
            if not args.script:
                raise ScriptError("script mode needs --script FILE")
            commands = parse_script(_read(args.script))
            ScriptRunner(ctl, printer, default_limit=1 if count is None else count).run(commands)
            if args.dump_ground:
                out.write(dump_ground(ctl.state))
        printer.summary()
        for w in dict.fromkeys(ctl.warnings):
            log.warning(w)
        if args.trace:
            with open(args.trace, "w") as f:
                f.write("\n".join(ctl.trace) + "\n")
    except (OSError, ParseError, UnsafeError, ScriptError, GroundingError, NotCompositional, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return printer.exit_code()


def main(argv=None) -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run(argv))
