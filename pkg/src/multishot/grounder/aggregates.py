"""Sequential-counter compilation of count aggregates and choice bounds."""
from __future__ import annotations

from ..language.terms import Atom, Number
from .ground import AUX_PREDICATE, make_rule


class AuxFactory:
    """Hands out fresh atoms in the reserved namespace."""

    def __init__(self, start: int = 1):
        self.next_id = start

    def fresh(self) -> Atom:
        a = Atom(AUX_PREDICATE, (Number(self.next_id),))
        self.next_id += 1
        return a


_REQUIRE = {
    ">=": lambda b: [[(b, True)]],
    ">": lambda b: [[(b + 1, True)]],
    "<=": lambda b: [[(b + 1, False)]],
    "<": lambda b: [[(b, False)]],
    "=": lambda b: [[(b, True), (b + 1, False)]],
    "!=": lambda b: [[(b, False)], [(b + 1, True)]],
}


def at_least_literals(op: str, bound: int, n: int):
    """Express `#count{..} op bound` over n elements via at-least-k literals.

    Returns alternatives (a disjunction); each is a list of (k, positive)
    meaning "at least k elements hold" or its negation.  Trivially true
    literals are removed; None means the aggregate can never hold.
    """
    out = []
    for alt in _REQUIRE[op](bound):
        kept, possible = [], True
        for k, positive in alt:
            if k <= 0:
                if positive:
                    continue
                possible = False
            elif k > n:
                if not positive:
                    continue
                possible = False
            else:
                kept.append((k, positive))
        if possible:
            out.append(kept)
    return out or None


def counter_rules(elements, K: int, aux: AuxFactory):
    """c(i,j) holds iff at least j of the first i element atoms hold (j <= K)."""
    n = len(elements)
    rules = []
    prev: dict = {}
    for i, e in enumerate(elements, 1):
        cur = {}
        for j in range(1, min(i, K) + 1):
            c = aux.fresh()
            cur[j] = c
            if j <= i - 1:
                rules.append(make_rule(c, (prev[j],)))
            if j == 1:
                rules.append(make_rule(c, (e,)))
            else:
                rules.append(make_rule(c, (e, prev[j - 1])))
        prev = cur
    return {j: prev[j] for j in prev} if n else {}, rules
