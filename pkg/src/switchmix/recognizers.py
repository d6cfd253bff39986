"""Recognizers for the class hierarchy

    Chain < Monotone < Biconvex < Convex < ChordalBipartite < OtherBipartite

Each constructive recognizer returns a :class:`Presentation` (row and column
orders) that has been re-checked against the class definition before it is
returned, or ``None``.

Column-order search
-------------------
Convexity and monotonicity both reduce to finding a column order.  We place
columns left to right.  With ``S`` the set already placed, a row that meets
``S`` but is not contained in it is *open*, and its part inside ``S`` must be
a suffix of the current arrangement.  Whether a column can be appended is
therefore a function of ``S`` alone, and so is the start order of the open
rows (an earlier start means a larger overlap with ``S``).  A depth-first
search over subsets with a dead-set memo is exact.  It is exponential in the
worst case, so a state budget guards it.
"""

from dataclasses import dataclass
from enum import IntEnum
from itertools import permutations
from typing import Optional

from .errors import InvariantViolation, NotMonotonePresentation, TooLarge
from .graph import BipartiteGraph, bits

SEARCH_BUDGET = 400_000


class ClassLabel(IntEnum):
    Chain = 0
    Monotone = 1
    Biconvex = 2
    Convex = 3
    ChordalBipartite = 4
    OtherBipartite = 5


@dataclass(frozen=True)
class Presentation:
    row_order: tuple
    col_order: tuple

    def apply(self, g: BipartiteGraph) -> BipartiteGraph:
        return g.permute(self.row_order, self.col_order)

    def inverse(self) -> "Presentation":
        def inv(p):
            out = [0] * len(p)
            for k, v in enumerate(p):
                out[v] = k
            return tuple(out)
        return Presentation(inv(self.row_order), inv(self.col_order))


def identity_presentation(g: BipartiteGraph) -> Presentation:
    return Presentation(tuple(range(g.m)), tuple(range(g.n)))


@dataclass(frozen=True)
class SubmatrixWitness:
    rows: tuple
    cols: tuple
    shape: str

    def report(self):
        (i, j), (k, l) = self.rows, self.cols
        return {"rows": [i + 1, j + 1], "cols": [f"{k + 1}'", f"{l + 1}'"], "shape": self.shape}


# 2x2 patterns as (top-left, top-right, bottom-left, bottom-right)
SHAPES = {
    "Gamma": (1, 1, 1, 0),
    "BackwardsL": (0, 1, 1, 1),
    "Slash": (0, 1, 1, 0),
    "TwoK2": (1, 0, 0, 1),
}


def find_submatrix(g: BipartiteGraph, shape: str) -> Optional[SubmatrixWitness]:
    """Lexicographically first (i, j, k, l), i<j and k<l, whose 2x2 submatrix
    equals ``shape``."""
    tl, tr, bl, br = SHAPES[shape]
    full = (1 << g.n) - 1
    for i in range(g.m):
        ri = g.rows[i]
        for j in range(i + 1, g.m):
            rj = g.rows[j]
            a = (ri if tl else ~ri) & (rj if bl else ~rj) & full  # candidates for k
            b = (ri if tr else ~ri) & (rj if br else ~rj) & full  # candidates for l
            for k in bits(a):
                above = b >> (k + 1)
                if above:
                    l = k + 1 + ((above & -above).bit_length() - 1)
                    return SubmatrixWitness((i, j), (k, l), shape)
    return None


def gamma_free_check(g: BipartiteGraph) -> Optional[SubmatrixWitness]:
    return find_submatrix(g, "Gamma")


def monotone_witness(g: BipartiteGraph) -> Optional[SubmatrixWitness]:
    """First excluded staircase shape found in the given presentation."""
    best = None
    for shape in ("Gamma", "BackwardsL", "Slash"):
        w = find_submatrix(g, shape)
        if w is not None and (best is None or (w.rows, w.cols) < (best.rows, best.cols)):
            best = w
    return best


# doubly lexical ordering -------------------------------------------------
#
# Convention: a vector is compared from its last entry backwards (the last
# entry is most significant).  The matrix is doubly lexical when rows are
# non-decreasing top to bottom and columns non-decreasing left to right under
# that comparison.  Totally balanced matrices are then exactly the ones with
# no Gamma submatrix.

def _row_key(g, i):
    r = g.rows[i]
    return tuple((r >> j) & 1 for j in range(g.n - 1, -1, -1))


def is_doubly_lexical(g: BipartiteGraph) -> bool:
    rk = [_row_key(g, i) for i in range(g.m)]
    gt = g.transpose()
    ck = [_row_key(gt, j) for j in range(g.n)]
    return all(rk[i] <= rk[i + 1] for i in range(g.m - 1)) and \
        all(ck[j] <= ck[j + 1] for j in range(g.n - 1))


def doubly_lexical_order(g: BipartiteGraph) -> Presentation:
    """Alternately sort rows and columns by the reversed-lexicographic key until
    the result verifies.  A handful of passes suffices on every input we have
    tried; the cap only turns a hypothetical non-convergence into an error."""
    rows = list(range(g.m))
    cols = list(range(g.n))
    base = BipartiteGraph(g.m, g.n, g.rows, True)
    for _ in range(4 * (g.m + g.n) + 16):
        cur = base.permute(rows, cols)
        order = sorted(range(g.m), key=lambda i: _row_key(cur, i))
        rows = [rows[i] for i in order]
        cur = base.permute(rows, cols)
        ct = cur.transpose()
        corder = sorted(range(g.n), key=lambda j: _row_key(ct, j))
        cols = [cols[j] for j in corder]
        cur = base.permute(rows, cols)
        if is_doubly_lexical(cur):
            return Presentation(tuple(rows), tuple(cols))
    raise InvariantViolation("doubly lexical sorting did not converge")


def is_chordal_bipartite(g: BipartiteGraph) -> bool:
    p = doubly_lexical_order(g)
    return gamma_free_check(p.apply(BipartiteGraph(g.m, g.n, g.rows, True))) is None


# interval checks ---------------------------------------------------------

def _is_interval(mask: int) -> bool:
    if mask == 0:
        return True
    low = mask & -mask
    return ((mask // low) & ((mask // low) + 1)) == 0


def rows_are_intervals(g: BipartiteGraph) -> bool:
    return all(_is_interval(r) for r in g.rows)


def cols_are_intervals(g: BipartiteGraph) -> bool:
    return all(_is_interval(c) for c in g.cols)


def is_staircase(g: BipartiteGraph) -> bool:
    """Rows are intervals whose left and right ends are both non-decreasing."""
    if not rows_are_intervals(g):
        return False
    prev = (-1, -1)
    for i in range(g.m):
        if g.rows[i] == 0:
            continue
        cur = g.row_interval(i)
        if cur[0] < prev[0] or cur[1] < prev[1]:
            return False
        prev = cur
    return True


# exact column-order search ------------------------------------------------

def _column_search(g: BipartiteGraph, staircase: bool, budget: int = SEARCH_BUDGET):
    """Column order making rows intervals; with ``staircase`` also forbid a row
    strictly nested inside another on both ends.  Returns a list or None."""
    n = g.n
    rows = [r for r in g.rows if r]
    sizes = [bin(r).count("1") for r in rows]
    dead = set()
    count = [0]

    def extend(S, order):
        if len(order) == n:
            return order
        if S in dead:
            return None
        count[0] += 1
        if count[0] > budget:
            raise TooLarge("column-order search exceeded its state budget", budget=budget)
        # open rows: meet S but are not contained in it
        must = (1 << n) - 1
        overlaps = []
        for r, sz in zip(rows, sizes):
            inside = bin(r & S).count("1")
            if 0 < inside < sz:
                must &= r
                overlaps.append((r, inside, sz))
        cand = must & ~S
        for c in bits(cand):
            S2 = S | (1 << c)
            if staircase and not _closing_ok(rows, sizes, S, S2, c):
                continue
            res = extend(S2, order + [c])
            if res is not None:
                return res
        dead.add(S)
        return None

    return extend(0, [])


def _closing_ok(rows, sizes, S, S2, c):
    # rows that close at c must not have started after a row that stays open
    close_min = None
    open_max = -1
    for r, sz in zip(rows, sizes):
        if not (r >> c) & 1:
            continue
        before = bin(r & S).count("1")
        if bin(r & S2).count("1") == sz:
            close_min = before if close_min is None else min(close_min, before)
        else:
            open_max = max(open_max, before)
    return close_min is None or close_min >= open_max


def _sort_rows_by_interval(g: BipartiteGraph, col_order) -> list:
    h = BipartiteGraph(g.m, g.n, g.rows, True).permute(range(g.m), col_order)
    return sorted(range(g.m), key=lambda i: (h.row_interval(i), i))


def _components(g: BipartiteGraph):
    """Connected components as (row list, column list), ordered by first row."""
    seen_r, seen_c = set(), set()
    comps = []
    for start in range(g.m):
        if start in seen_r:
            continue
        rs, cs = [], []
        stack = [("r", start)]
        seen_r.add(start)
        while stack:
            side, v = stack.pop()
            if side == "r":
                rs.append(v)
                for j in bits(g.rows[v]):
                    if j not in seen_c:
                        seen_c.add(j)
                        stack.append(("c", j))
            else:
                cs.append(v)
                for i in bits(g.cols[v]):
                    if i not in seen_r:
                        seen_r.add(i)
                        stack.append(("r", i))
        comps.append((sorted(rs), sorted(cs)))
    lone = [j for j in range(g.n) if j not in seen_c]
    if lone:
        comps.append(([], lone))
    return comps


def _search_by_components(g: BipartiteGraph, staircase: bool):
    """Run the column search per connected component and concatenate."""
    col_order = []
    base = BipartiteGraph(g.m, g.n, g.rows, True)
    for rs, cs in _components(g):
        if not rs:
            col_order.extend(cs)
            continue
        sub = base.permute(rs, cs)
        order = _column_search(sub, staircase)
        if order is None:
            return None
        col_order.extend(cs[k] for k in order)
    return col_order


def check_convex(g: BipartiteGraph) -> Optional[Presentation]:
    """Column order under which every row neighborhood is an interval."""
    ident = identity_presentation(g)
    if rows_are_intervals(g):
        return ident
    order = _search_by_components(g, staircase=False)
    if order is None:
        return None
    p = Presentation(ident.row_order, tuple(order))
    assert rows_are_intervals(p.apply(g))
    return p


def check_biconvex(g: BipartiteGraph) -> Optional[Presentation]:
    pc = check_convex(g)
    if pc is None:
        return None
    pr = check_convex(g.transpose())
    if pr is None:
        return None
    p = Presentation(pr.col_order, pc.col_order)
    h = p.apply(g)
    assert rows_are_intervals(h) and cols_are_intervals(h)
    return p


def _monotone_heuristic(g: BipartiteGraph) -> Presentation:
    # sort rows by their (leftmost, rightmost) column, then columns by their
    # (top, bottom) row, and repeat until stable
    rows = list(range(g.m))
    cols = list(range(g.n))
    base = BipartiteGraph(g.m, g.n, g.rows, True)
    for _ in range(2 * (g.m + g.n)):
        cur = base.permute(rows, cols)
        ro = sorted(range(g.m), key=lambda i: (cur.row_interval(i), i))
        rows = [rows[i] for i in ro]
        cur = base.permute(rows, cols)
        co = sorted(range(g.n), key=lambda j: (cur.col_interval(j), j))
        new_cols = [cols[j] for j in co]
        if ro == list(range(g.m)) and new_cols == cols:
            break
        cols = new_cols
    return Presentation(tuple(rows), tuple(cols))


def check_monotone(g: BipartiteGraph) -> Optional[Presentation]:
    """Presentation with no Gamma, backwards-L or slash 2x2 submatrix."""
    if monotone_witness(g) is None:
        return identity_presentation(g)
    p = _monotone_heuristic(g)
    if monotone_witness(p.apply(g)) is None:
        return p
    p = _monotone_search(g)
    if p is not None:
        assert monotone_witness(p.apply(g)) is None
    return p


def _monotone_search(g: BipartiteGraph) -> Optional[Presentation]:
    h = g if g.n <= g.m else g.transpose()
    order = _search_by_components(h, staircase=True)
    if order is None:
        return None
    p = Presentation(tuple(_sort_rows_by_interval(h, order)), tuple(order))
    if h is not g:
        p = Presentation(p.col_order, p.row_order)
    if monotone_witness(p.apply(g)) is not None:
        return None
    return p


def monotone_bruteforce(g: BipartiteGraph) -> Optional[Presentation]:
    """Reference search over every order of the smaller side."""
    # the other side's order is then forced
    h = g if g.n <= g.m else g.transpose()
    for cols in permutations(range(h.n)):
        hh = BipartiteGraph(h.m, h.n, h.rows, True).permute(range(h.m), cols)
        if not rows_are_intervals(hh):
            continue
        rows = _sort_rows_by_interval(h, cols)
        p = Presentation(tuple(rows), tuple(cols))
        if monotone_witness(p.apply(h)) is None:
            if h is not g:
                p = Presentation(p.col_order, p.row_order)
            return p
    return None


def check_chain(g: BipartiteGraph) -> Optional[Presentation]:
    """Rows by degree ascending, columns by degree descending; chain iff every
    row is then a prefix."""
    rows = sorted(range(g.m), key=lambda i: (g.row_degree(i), i))
    cols = sorted(range(g.n), key=lambda j: (-g.col_degree(j), j))
    p = Presentation(tuple(rows), tuple(cols))
    h = p.apply(g)
    for i in range(h.m):
        d = h.row_degree(i)
        if h.rows[i] != (1 << d) - 1:
            return None
    return p


def chain_degrees(g: BipartiteGraph) -> Optional[tuple]:
    """Sorted row degrees (a_1 <= ... <= a_m) when ``g`` is a chain graph."""
    p = check_chain(g)
    if p is None:
        return None
    return tuple(sorted(g.row_degree(i) for i in range(g.m)))


def verify_monotone_column_property(g: BipartiteGraph, p: Optional[Presentation] = None) -> bool:
    h = g if p is None else p.apply(g)
    if monotone_witness(h) is not None:
        raise NotMonotonePresentation("presentation contains an excluded 2x2 submatrix",
                                      witness=monotone_witness(h).report())
    return is_staircase(h.transpose())


def classify(g: BipartiteGraph) -> ClassLabel:
    """Most specific label; a graph counts as (bi)convex if either side can be
    ordered as intervals."""
    checks = [
        check_chain(g) is not None,
        check_monotone(g) is not None,
        check_biconvex(g) is not None,
        check_convex(g) is not None or check_convex(g.transpose()) is not None,
        is_chordal_bipartite(g),
    ]
    label = ClassLabel.OtherBipartite
    for k, ok in enumerate(checks):
        if ok:
            label = ClassLabel(k)
            break
    # the hierarchy must be downward closed
    for k in range(label, len(checks)):
        if not checks[k]:
            raise AssertionError(f"{label.name} recognized but {ClassLabel(k).name} failed")
    return label
