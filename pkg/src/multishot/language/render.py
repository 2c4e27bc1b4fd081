"""Source rendering; parse_program(render(s)) reproduces s."""
from __future__ import annotations


def render(stmts) -> str:
    lines = [f"#const {k}={v}." for k, v in getattr(stmts, "constants", {}).items()]
    lines += [str(s) for s in stmts]
    if getattr(stmts, "incmode", False):
        lines.insert(0, "#include <incmode>.")
    return "\n".join(lines) + ("\n" if lines else "")
