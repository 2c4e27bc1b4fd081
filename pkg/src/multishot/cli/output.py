"""Text protocol for solver output."""
from __future__ import annotations

import sys

from ..language.terms import sorted_atoms
from ..solver import project


def format_cost(cost: dict) -> str:
    return " ".join(str(cost[p]) for p in sorted(cost, reverse=True))


class Printer:
    """Writes `Solving...` blocks and the closing summary.

    Answers are numbered per solve call.  The summary is only written when
    at least one solve call happened.
    """

    def __init__(self, out=None):
        self.out = out or sys.stdout
        self.calls = 0
        self.models = 0
        self.sat = False
        self.optimum = False
        self.more = False

    def write(self, line: str = "") -> None:
        self.out.write(line + "\n")

    def result(self, res, shows) -> None:
        self.calls += 1
        self.write("Solving...")
        for i, m in enumerate(res.models, 1):
            self.write(f"Answer: {i}")
            self.write(" ".join(str(a) for a in sorted_atoms(project(m.atoms, shows))))
            if m.cost:
                self.write(f"Optimization: {format_cost(m.cost)}")
        self.models += len(res.models)
        if res.satisfiable:
            self.sat = True
            self.optimum = self.optimum or res.optimal
        if not res.exhausted:
            self.more = True

    def status(self) -> str:
        if not self.sat:
            return "UNSATISFIABLE"
        return "OPTIMUM FOUND" if self.optimum else "SATISFIABLE"

    def summary(self) -> None:
        if not self.calls:
            return
        self.write(self.status())
        self.write()
        self.write(f"Models : {self.models}{'+' if self.more else ''}")
        self.write(f"Calls : {self.calls}")

    def exit_code(self) -> int:
        return 0 if self.sat or not self.calls else 1
