"""Dependency graphs and strongly connected components."""
from __future__ import annotations


def tarjan(graph: dict) -> list:
    """Iterative Tarjan; components come out dependencies-first.

    `graph` maps every node to its successors.  A node's successors are what
    it depends on, so each component is listed after all components it can
    reach.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph.get(nxt, ()))))
                    advanced = True
                    break
                if nxt in on_stack and index[nxt] < low[node]:
                    low[node] = index[nxt]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def dependency_graph(rules) -> dict:
    """Positive atom dependency graph: head -> positive body atoms."""
    g: dict = {}
    for r in rules:
        for a in r.atoms():
            g.setdefault(a, set())
        if r.head is not None:
            g[r.head].update(r.pos)
    return g
