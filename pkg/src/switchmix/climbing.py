"""Two climbers on a piecewise-linear range, always at equal height.

A range is a sequence of node heights y_1..y_n with y_1 = y_n at the bottom.
Ties between interior nodes are broken symbolically: a node with equal
height but smaller index counts as higher, and interior nodes are above the
two end nodes.  This is the order obtained by adding a vanishing eps**i to
y_i.

The range graph has one vertex per potential event ``p_i L_j`` (node i on
one side of the summit level with the interior of slope j on the other
side), plus the start ``p_1 p_n`` and the finish ``p_s p_s``.  Every vertex
but those two has degree 2, so the start lies on a unique path to the
finish.  Walking that path is the climb.
"""

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import BadBoundary, TooShort

START = "start"
SUMMIT = "summit"


@dataclass(frozen=True)
class Range:
    heights: tuple
    keys: tuple  # symbolic heights, index 0 unused
    summit: int  # 1-based
    kinds: tuple  # 'peak' / 'valley' / 'monotone' / 'end', index 0 unused

    @property
    def n(self) -> int:
        return len(self.heights)

    def y(self, i: int):
        return self.heights[i - 1]

    def peaks(self) -> list:
        return [i for i in range(2, self.n) if self.kinds[i] == "peak"]

    def valleys(self) -> list:
        return [i for i in range(2, self.n) if self.kinds[i] == "valley"]

    def crosses(self, i: int, j: int) -> bool:
        """Does the level of node i meet the interior of slope j?"""
        lo, hi = sorted((self.keys[j], self.keys[j + 1]))
        return lo < self.keys[i] < hi


def build_range(heights) -> Range:
    h = tuple(heights)
    n = len(h)
    if n < 3:
        raise TooShort(f"a range needs at least 3 nodes, got {n}", n=n)
    if h[0] != h[-1] or any(v < h[0] for v in h):
        raise BadBoundary("end heights must be equal and minimal")
    keys = [None] * (n + 1)
    for i in range(1, n + 1):
        keys[i] = (h[i - 1], 0 if i in (1, n) else n + 1 - i)
    s = max(range(2, n), key=lambda i: keys[i])
    kinds = [None] * (n + 1)
    kinds[1] = kinds[n] = "end"
    for i in range(2, n):
        up_l = keys[i] > keys[i - 1]
        up_r = keys[i] > keys[i + 1]
        kinds[i] = "peak" if up_l and up_r else "valley" if not (up_l or up_r) else "monotone"
    return Range(h, tuple(keys), s, tuple(kinds))


def vertex_name(v) -> str:
    if v[0] == START:
        return f"p1p{v[2]}"
    if v[0] == SUMMIT:
        return f"p{v[1]}p{v[1]}"
    return f"p{v[1]}L{v[2]}"


@dataclass
class RangeGraph:
    rng: Range
    vertices: list
    adj: dict

    @property
    def start(self):
        return (START, 1, self.rng.n)

    @property
    def finish(self):
        s = self.rng.summit
        return (SUMMIT, s, s)

    def degree(self, v) -> int:
        return len(self.adj[v])

    def components(self) -> list:
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = []
            q = deque([v])
            seen.add(v)
            while q:
                u = q.popleft()
                comp.append(u)
                for w in self.adj[u]:
                    if w not in seen:
                        seen.add(w)
                        q.append(w)
            comps.append(comp)
        return comps

    def path(self) -> list:
        """Walk from the start; with every inner degree 2 there is no choice."""
        out = [self.start]
        prev = None
        cur = self.start
        while cur != self.finish:
            nxt = [w for w in self.adj[cur] if w != prev]
            if len(nxt) != 1:
                raise AssertionError(f"branching at {vertex_name(cur)}")
            prev, cur = cur, nxt[0]
            out.append(cur)
        return out


def build_range_graph(r: Range) -> RangeGraph:
    n, s = r.n, r.summit
    verts = []
    for i in range(2, s):
        for j in range(s, n):
            if r.crosses(i, j):
                verts.append(("L", i, j))
    for i in range(s + 1, n):
        for j in range(1, s):
            if r.crosses(i, j):
                verts.append(("L", i, j))
    vset = set(verts)
    adj = {v: [] for v in verts}

    def link(a, b):
        adj[a].append(b)
        adj[b].append(a)

    for a in verts:
        _, i, j = a
        # the climber at node i moves on along slope j's level
        for k in (i - 1, i + 1):
            b = ("L", k, j)
            if b in vset and a < b:
                link(a, b)
        # the climber on slope j reaches one of its ends
        for k in (j, j + 1):
            for rr in (i - 1, i):
                b = ("L", k, rr)
                if b in vset and a < b:
                    link(a, b)
    start = (START, 1, n)
    finish = (SUMMIT, s, s)
    adj[start] = []
    adj[finish] = []
    if n == 3:
        link(start, finish)
    else:
        # first event: the lower of p_2 and p_{n-1}
        for v in (("L", 2, n - 1), ("L", n - 1, 1)):
            if v in vset:
                link(start, v)
        # last event: the higher of p_{s-1} and p_{s+1}
        for v in (("L", s - 1, s), ("L", s + 1, s - 1)):
            if v in vset:
                link(v, finish)
        if not adj[start] or not adj[finish]:
            link(start, finish)
    for v in adj:
        adj[v].sort(key=str)
    return RangeGraph(r, [start] + verts + [finish], adj)


@dataclass(frozen=True)
class ClimbEvent:
    """Locations are ('node', i) or ('slope', j), both 1-based."""
    alpha: tuple
    beta: tuple
    level: int  # node whose height both climbers share

    def point(self, r: Range, who: str):
        loc = self.alpha if who == "alpha" else self.beta
        y = r.y(self.level)
        if loc[0] == "node":
            return float(loc[1]), float(r.y(loc[1]))
        j = loc[1]
        y0, y1 = r.y(j), r.y(j + 1)
        t = 0.5 if y0 == y1 else (y - y0) / (y1 - y0)
        return float(j + t), float(y)


def _event(r: Range, v) -> ClimbEvent:
    if v[0] == START:
        return ClimbEvent(("node", 1), ("node", r.n), 1)
    if v[0] == SUMMIT:
        return ClimbEvent(("node", r.summit), ("node", r.summit), r.summit)
    _, i, j = v
    if i < r.summit:
        return ClimbEvent(("node", i), ("slope", j), i)
    return ClimbEvent(("slope", j), ("node", i), i)


def climb(r: Range, graph: Optional[RangeGraph] = None) -> list:
    """Climber positions at the start and at every event up to the summit."""
    g = graph or build_range_graph(r)
    return [_event(r, v) for v in g.path()]


def climb_csv_rows(r: Range) -> list:
    rows = []
    for t, ev in enumerate(climb(r)):
        ax, ay = ev.point(r, "alpha")
        bx, by = ev.point(r, "beta")
        rows.append((t, ax, ay, bx, by))
    return rows


def vertex_bound(n: int) -> float:
    return (n - 1) ** 2 / 4 + 1


def gen_lambda(k: int) -> Range:
    """Worst-case family on n = 2k+1 nodes.

    Even positions are peaks at height min(k+i-1, 3k-i+2), odd interior
    positions are valleys at max(k-i+2, i-k-1); the summit has height 2k.
    Left peaks rise and left valleys fall toward the summit, and the right
    side interleaves with them.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = 2 * k + 1
    h = [0] * n
    for i in range(2, n):
        if i % 2 == 0:
            h[i - 1] = min(k + i - 1, 3 * k - i + 2)
        else:
            h[i - 1] = max(k - i + 2, i - k - 1)
    return build_range(h)
