"""Bipartite graphs stored as row bitsets, and perfect matchings.

Rows are ``0..m-1`` and columns ``0..n-1`` internally.  Bit ``j`` of
``rows[i]`` is set when row ``i`` is adjacent to column ``j``.  Reports use
1-based indices with a prime on columns.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (EmptySelection, IsolatedVertex, RaggedInput, TooLarge,
                     UnbalancedGraph)

# Python ints are arbitrary width, so this is a sanity cap, not a word size.
MAX_SIDE = 4096


def _popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class BipartiteGraph:
    m: int
    n: int
    rows: tuple
    allow_isolated: bool = False
    cols: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (1 <= self.m <= MAX_SIDE and 1 <= self.n <= MAX_SIDE):
            raise TooLarge(f"sides must lie in 1..{MAX_SIDE}", m=self.m, n=self.n)
        if len(self.rows) != self.m:
            raise RaggedInput("row count does not match m")
        full = (1 << self.n) - 1
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            if r & ~full:
                raise RaggedInput(f"row {i + 1} has bits beyond column {self.n}")
            for j in bits(r):
                cols[j] |= 1 << i
        object.__setattr__(self, "cols", tuple(cols))
        if not self.allow_isolated:
            for i, r in enumerate(self.rows):
                if r == 0:
                    raise IsolatedVertex(f"row {i + 1} is isolated", vertex=f"{i + 1}")
            for j, c in enumerate(cols):
                if c == 0:
                    raise IsolatedVertex(f"column {j + 1}' is isolated", vertex=f"{j + 1}'")

    # construction -------------------------------------------------------

    @classmethod
    def from_matrix(cls, rows: Sequence[str], allow_isolated: bool = False) -> "BipartiteGraph":
        if not rows:
            raise RaggedInput("empty matrix")
        n = len(rows[0])
        masks = []
        for i, s in enumerate(rows):
            if len(s) != n:
                raise RaggedInput(f"row {i + 1} has length {len(s)}, expected {n}", row=i + 1)
            mask = 0
            for j, ch in enumerate(s):
                if ch == "1":
                    mask |= 1 << j
                elif ch != "0":
                    raise RaggedInput(f"bad character {ch!r} in row {i + 1}", row=i + 1)
            masks.append(mask)
        return cls(len(rows), n, tuple(masks), allow_isolated)

    @classmethod
    def from_sets(cls, m: int, n: int, adj: Iterable[Iterable[int]],
                  allow_isolated: bool = False) -> "BipartiteGraph":
        masks = []
        for nb in adj:
            mask = 0
            for j in nb:
                mask |= 1 << j
            masks.append(mask)
        return cls(m, n, tuple(masks), allow_isolated)

    # queries ------------------------------------------------------------

    @property
    def balanced(self) -> bool:
        return self.m == self.n

    def has_edge(self, i: int, j: int) -> bool:
        return (self.rows[i] >> j) & 1 == 1

    def neighbors(self, i: int) -> list:
        return list(bits(self.rows[i]))

    def col_neighbors(self, j: int) -> list:
        return list(bits(self.cols[j]))

    def num_edges(self) -> int:
        return sum(_popcount(r) for r in self.rows)

    def row_degree(self, i: int) -> int:
        return _popcount(self.rows[i])

    def col_degree(self, j: int) -> int:
        return _popcount(self.cols[j])

    def to_matrix(self) -> list:
        return ["".join("1" if (r >> j) & 1 else "0" for j in range(self.n)) for r in self.rows]

    def to_numpy(self):
        import numpy as np
        a = np.zeros((self.m, self.n), dtype=np.int64)
        for i, r in enumerate(self.rows):
            for j in bits(r):
                a[i, j] = 1
        return a

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.m, self.cols, self.allow_isolated)

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "BipartiteGraph":
        """New graph whose row ``k`` is old row ``row_order[k]`` and whose
        column ``l`` is old column ``col_order[l]``."""
        masks = []
        for old_i in row_order:
            r = self.rows[old_i]
            mask = 0
            for l, old_j in enumerate(col_order):
                if (r >> old_j) & 1:
                    mask |= 1 << l
            masks.append(mask)
        return BipartiteGraph(len(row_order), len(col_order), tuple(masks), self.allow_isolated)

    def row_interval(self, i: int):
        """(first, last) neighbor column of row ``i``."""
        r = self.rows[i]
        return (r & -r).bit_length() - 1, r.bit_length() - 1

    def col_interval(self, j: int):
        c = self.cols[j]
        return (c & -c).bit_length() - 1, c.bit_length() - 1

    def __str__(self):
        return "\n".join(self.to_matrix())


@dataclass(frozen=True)
class IntervalPresentation:
    row_intervals: tuple
    col_intervals: Optional[tuple] = None


def interval_presentation(g: BipartiteGraph, with_cols: bool = True) -> IntervalPresentation:
    rows = tuple(g.row_interval(i) for i in range(g.m))
    cols = tuple(g.col_interval(j) for j in range(g.n)) if with_cols else None
    return IntervalPresentation(rows, cols)


@dataclass(frozen=True)
class PerfectMatching:
    pi: tuple

    @property
    def sigma(self) -> tuple:
        """Inverse permutation: ``sigma[j]`` is the row matched to column ``j``."""
        s = [0] * len(self.pi)
        for i, j in enumerate(self.pi):
            s[j] = i
        return tuple(s)

    def edges(self) -> list:
        return list(enumerate(self.pi))

    def report(self) -> str:
        return " ".join(f"({i + 1},{j + 1}')" for i, j in enumerate(self.pi))


def _require_balanced(g: BipartiteGraph):
    if g.m != g.n:
        raise UnbalancedGraph(f"graph is {g.m}x{g.n}", m=g.m, n=g.n)


def validate_matching(g: BipartiteGraph, mt) -> bool:
    _require_balanced(g)
    pi = mt.pi if isinstance(mt, PerfectMatching) else tuple(mt)
    if len(pi) != g.n or sorted(pi) != list(range(g.n)):
        return False
    return all(g.has_edge(i, j) for i, j in enumerate(pi))


def find_perfect_matching(g: BipartiteGraph) -> Optional[PerfectMatching]:
    """Augmenting-path matching.  Rows are processed in order and each search
    tries columns lowest index first, so the result depends only on ``g``."""
    _require_balanced(g)
    n = g.n
    match_col = [-1] * n  # column -> row
    match_row = [-1] * n
    adj = [g.neighbors(i) for i in range(n)]

    for root in range(n):
        # iterative DFS over alternating paths
        seen = [False] * n
        parent_col = {}
        stack = [(root, 0)]
        found = -1
        while stack and found < 0:
            i, k = stack[-1]
            if k >= len(adj[i]):
                stack.pop()
                continue
            stack[-1] = (i, k + 1)
            j = adj[i][k]
            if seen[j]:
                continue
            seen[j] = True
            parent_col[j] = i
            if match_col[j] < 0:
                found = j
            else:
                stack.append((match_col[j], 0))
        if found < 0:
            return None
        j = found
        while True:
            i = parent_col[j]
            prev = match_row[i]
            match_col[j] = i
            match_row[i] = j
            if i == root:
                break
            j = prev
    return PerfectMatching(tuple(match_row))


def diagonal_matching_exists(g: BipartiteGraph) -> bool:
    _require_balanced(g)
    return all(g.has_edge(i, i) for i in range(g.n))


def degree_stats(g: BipartiteGraph):
    r = max(g.row_degree(i) for i in range(g.m))
    c = max(g.col_degree(j) for j in range(g.n))
    return r, c


def induced_subgraph(g: BipartiteGraph, rows: Iterable[int], cols: Iterable[int]) -> BipartiteGraph:
    rs = sorted(set(rows))
    cs = sorted(set(cols))
    if not rs or not cs:
        raise EmptySelection("row and column selections must be non-empty")
    sub = BipartiteGraph(g.m, g.n, g.rows, True).permute(rs, cs)
    return sub


# text format ------------------------------------------------------------

def parse_matrix_text(text: str, allow_isolated: bool = False) -> BipartiteGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise RaggedInput("no header line")
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise RaggedInput(f"bad header {lines[0]!r}")
    m, n = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != m:
        raise RaggedInput(f"expected {m} rows, found {len(body)}")
    for i, s in enumerate(body):
        if len(s) != n:
            raise RaggedInput(f"row {i + 1} has length {len(s)}, expected {n}", row=i + 1)
    return BipartiteGraph.from_matrix(body, allow_isolated)


def format_matrix_text(g: BipartiteGraph, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"{g.m} {g.n}")
    out.extend(g.to_matrix())
    return "\n".join(out) + "\n"
