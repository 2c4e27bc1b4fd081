"""Optional removal of certainly-true atoms from rule bodies."""
from __future__ import annotations

from .ground import GroundProgramWithExternals, GroundRule


def simplify_with_facts(p: GroundProgramWithExternals, facts) -> GroundProgramWithExternals:
    facts = frozenset(facts)
    if not facts:
        return p
    rules = []
    seen = set()
    for r in p.rules:
        if any(a in facts for a in r.pos):
            r = GroundRule(r.head, tuple(a for a in r.pos if a not in facts), r.neg, r.choice)
        if r not in seen:
            seen.add(r)
            rules.append(r)
    return GroundProgramWithExternals(tuple(rules), p.externals, p.base_out)
