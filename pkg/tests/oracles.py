"""Independent reference implementations used by the test-suite.

Nothing here imports the package's grounder or solver.
"""
import re
from collections import deque


def count_queens(n: int) -> int:
    """Plain backtracking over rows."""
    cols, d1, d2 = set(), set(), set()

    def place(r):
        if r == n:
            return 1
        total = 0
        for c in range(n):
            if c in cols or r + c in d1 or r - c in d2:
                continue
            cols.add(c); d1.add(r + c); d2.add(r - c)
            total += place(r + 1)
            cols.discard(c); d1.discard(r + c); d2.discard(r - c)
        return total

    return place(0)


def valid_queens(cells, n: int) -> bool:
    cells = list(cells)
    if len(cells) != n:
        return False
    for i, (x1, y1) in enumerate(cells):
        for x2, y2 in cells[i + 1:]:
            if x1 == x2 or y1 == y2 or abs(x1 - x2) == abs(y1 - y2):
                return False
    return True


# Towers of Hanoi: a larger disk number means a smaller disk

def hanoi_play(disks, init, goal, moves):
    """Replay (disk, peg, step) moves; returns (ok, reason)."""
    on = dict(init)
    by_step = {}
    for d, p, t in moves:
        if t in by_step:
            return False, f"two moves at step {t}"
        by_step[t] = (d, p)
    for t in sorted(by_step):
        d, p = by_step[t]
        src = on[d]
        if src == p:
            return False, f"disk {d} stays on {p} at step {t}"
        if any(on[e] == src and e > d for e in disks):
            return False, f"disk {d} is covered at step {t}"
        if any(on[e] == p and e > d for e in disks):
            return False, f"disk {d} lands on a smaller disk at step {t}"
        on[d] = p
    if on != dict(goal):
        return False, "goal not reached"
    return True, ""


def hanoi_shortest(n_disks: int) -> int:
    """Breadth-first search over peg assignments."""
    pegs = "abc"
    start = tuple("a" for _ in range(n_disks))
    goal = tuple("c" for _ in range(n_disks))
    dist = {start: 0}
    q = deque([start])
    while q:
        s = q.popleft()
        if s == goal:
            return dist[s]
        for d in range(n_disks):
            # index n_disks-1 is the smallest disk
            if any(s[e] == s[d] for e in range(d + 1, n_disks)):
                continue
            for p in pegs:
                if p == s[d] or any(s[e] == p for e in range(d + 1, n_disks)):
                    continue
                nxt = s[:d] + (p,) + s[d + 1:]
                if nxt not in dist:
                    dist[nxt] = dist[s] + 1
                    q.append(nxt)
    return -1


# Ricochet Robots

DIRS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def read_board(text: str):
    """dim and barrier/4 facts from a board file."""
    dim = int(re.search(r"#const\s+dim\s*=\s*(\d+)", text).group(1))
    bars = [tuple(int(v) for v in m) for m in re.findall(r"barrier\((-?\d+),(-?\d+),(-?\d+),(-?\d+)\)", text)]
    return dim, bars


def read_targets(text: str) -> dict:
    """goal number -> (robot, x, y)."""
    out = {}
    for r, x, y, g in re.findall(r"target\((\w+),(\d+),(\d+)\)\s*:-\s*goal\((\d+)\)", text):
        out[int(g)] = (r, int(x), int(y))
    return out


def stops(bars) -> set:
    s = set()
    for x, y, dx, dy in bars:
        s.add((dx, dy, x, y))
        s.add((-dx, -dy, x + dx, y + dy))
    return s


def slide(pos, robot, d, st, dim):
    x, y = pos[robot]
    dx, dy = d
    occ = {p for r, p in pos.items() if r != robot}
    while True:
        nx, ny = x + dx, y + dy
        if not (1 <= nx <= dim and 1 <= ny <= dim) or (dx, dy, x, y) in st or (nx, ny) in occ:
            return x, y
        x, y = nx, ny


def ricochet_distance(start, robot, target, bars, dim, limit):
    """Fewest moves bringing `robot` onto `target`, or None beyond `limit`."""
    st = stops(bars)
    names = sorted(start)
    key = lambda p: tuple(p[r] for r in names)
    if start[robot] == target:
        return 0
    frontier, seen = [dict(start)], {key(start)}
    for depth in range(1, limit + 1):
        nxt = []
        for p in frontier:
            for r in names:
                for d in DIRS:
                    q = dict(p)
                    q[r] = slide(p, r, d, st, dim)
                    k = key(q)
                    if k in seen:
                        continue
                    if q[robot] == target:
                        return depth
                    seen.add(k)
                    nxt.append(q)
        frontier = nxt
    return None


def ricochet_play(start, moves, bars, dim):
    """Replay (robot, dx, dy, t) moves; returns the positions after every step."""
    st = stops(bars)
    pos = dict(start)
    trace = [dict(pos)]
    for r, dx, dy, _ in sorted(moves, key=lambda m: m[3]):
        pos[r] = slide(pos, r, (dx, dy), st, dim)
        trace.append(dict(pos))
    return trace


def _least(definite):
    out = set()
    changed = True
    while changed:
        changed = False
        for h, pos in definite:
            if h not in out and all(a in out for a in pos):
                out.add(h)
                changed = True
    return out


def stable_models(rules, true=(), undef=()):
    """Stable models of (head, pos, neg, choice) tuples by reduct checking.

    head None is a constraint.  Atoms in `true` are facts, atoms in `undef`
    are free choices.  Only atoms under negation or in choice heads are
    guessed; the rest follow from the least model of the reduct.
    """
    rules = [tuple(r) for r in rules]
    rules += [(a, (), (), False) for a in true]
    rules += [(a, (), (), True) for a in undef]
    guess = sorted({a for r in rules for a in r[2]} | {r[0] for r in rules if r[3]}, key=repr)
    found = set()
    for mask in range(1 << len(guess)):
        g = {a for i, a in enumerate(guess) if mask >> i & 1}
        definite = [(h, pos) for h, pos, neg, ch in rules
                    if h is not None and not g & set(neg) and (not ch or h in g)]
        x = _least(definite)
        # x must reproduce the guess on the guessed atoms
        if {a for a in guess if a in x} != g:
            continue
        if any(h is None and all(a in x for a in pos) and not any(a in x for a in neg)
               for h, pos, neg, _ in rules):
            continue
        found.add(frozenset(x))
    return found
