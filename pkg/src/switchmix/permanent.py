"""Exact permanents and exact uniform samplers.

Four independent routes: backtracking enumeration, Ryser's formula, the
product formula for chain graphs and a windowed dynamic program for convex
graphs.  All counts are Python ints.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .errors import NoPerfectMatching, NotChainGraph, NotConvexPresentation, TooLarge, UnbalancedGraph
from .graph import BipartiteGraph, PerfectMatching, bits, find_perfect_matching

ENUMERATE_CAP = 12
RYSER_CAP = 30
# warn when the clipped state bound min(2r, n)! times n exceeds this
DP_WORK_WARNING = 5_000_000


def _balanced(g: BipartiteGraph):
    if g.m != g.n:
        raise UnbalancedGraph(f"graph is {g.m}x{g.n}", m=g.m, n=g.n)


# enumeration -------------------------------------------------------------

def enumerate_matchings(g: BipartiteGraph, cap: int = ENUMERATE_CAP) -> list:
    """All perfect matchings as ``pi`` tuples, in lexicographic order."""
    _balanced(g)
    if g.n > cap:
        raise TooLarge(f"enumeration is capped at n={cap}", n=g.n, cap=cap)
    n = g.n
    out = []
    pi = [0] * n

    def rec(i, used):
        if i == n:
            out.append(tuple(pi))
            return
        for j in bits(g.rows[i] & ~used):
            pi[i] = j
            rec(i + 1, used | (1 << j))

    rec(0, 0)
    return out


def permanent_enumerate(g: BipartiteGraph, cap: int = ENUMERATE_CAP) -> int:
    _balanced(g)
    if g.n > cap:
        raise TooLarge(f"enumeration is capped at n={cap}", n=g.n, cap=cap)
    n = g.n
    memo = {}

    # counting only needs the set of used columns, so memoize on it
    def rec(i, used):
        if i == n:
            return 1
        key = used
        if key in memo:
            return memo[key]
        total = 0
        for j in bits(g.rows[i] & ~used):
            total += rec(i + 1, used | (1 << j))
        memo[key] = total
        return total

    return rec(0, 0)


# Ryser -------------------------------------------------------------------

def permanent_ryser(g: BipartiteGraph) -> int:
    """Inclusion-exclusion over column subsets, visited in Gray-code order so
    each step updates the row sums by a single column."""
    _balanced(g)
    n = g.n
    if n > RYSER_CAP:
        raise TooLarge(f"Ryser is capped at n={RYSER_CAP}", n=n, cap=RYSER_CAP)
    cols = [list(bits(g.cols[j])) for j in range(n)]
    sums = [0] * n
    zeros = n  # rows whose current sum is zero
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        step = 1 if (gray >> j) & 1 else -1
        for i in cols[j]:
            before = sums[i]
            sums[i] = before + step
            if before == 0:
                zeros -= 1
            elif sums[i] == 0:
                zeros += 1
        if zeros == 0:
            prod = 1
            for s in sums:
                prod *= s
            # subset of size |S| contributes (-1)^(n-|S|)
            if (n - bin(gray).count("1")) & 1:
                total -= prod
            else:
                total += prod
    return total


# chain graphs ------------------------------------------------------------

def chain_permanent(a) -> int:
    """Product of (a_i - i + 1) over rows sorted by degree; 0 if some a_i < i."""
    a = sorted(a)
    out = 1
    for i, ai in enumerate(a, start=1):
        if ai < i:
            return 0
        out *= ai - i + 1
    return out


def chain_graph(a) -> BipartiteGraph:
    """Graph whose row ``i`` is adjacent to the first ``a[i]`` columns."""
    n = max(a)
    return BipartiteGraph(len(a), n, tuple((1 << ai) - 1 for ai in a))


def chain_sample(a, rng) -> PerfectMatching:
    """Uniform matching of the prefix graph with sorted degree vector ``a``.

    Row ``i`` (after sorting) sees ``a_i - i + 1`` free columns whatever the
    earlier rows chose, so choosing uniformly row by row is exactly uniform.
    The matching refers to the sorted row order.
    """
    a = sorted(a)
    n = len(a)
    if chain_permanent(a) == 0 or max(a) != n:
        raise NoPerfectMatching("chain graph has no perfect matching")
    free = []  # free columns among the first a_i, kept in order
    nxt = 0
    pi = [0] * n
    for i, ai in enumerate(a):
        while nxt < ai:
            free.append(nxt)
            nxt += 1
        k = int(rng.integers(len(free)))
        pi[i] = free[k]
        free[k] = free[-1]
        free.pop()
    return PerfectMatching(tuple(pi))


@dataclass(frozen=True)
class ChainOrder:
    """Sorted degrees of a chain graph and the orders that make rows prefixes."""
    degrees: tuple
    row_order: tuple
    col_order: tuple


def chain_order(g: BipartiteGraph) -> ChainOrder:
    from .recognizers import check_chain
    _balanced(g)
    p = check_chain(g)
    if p is None:
        raise NotChainGraph("rows are not nested prefixes in any order")
    return ChainOrder(tuple(g.row_degree(i) for i in p.row_order), p.row_order, p.col_order)


def chain_sample_graph(g: BipartiteGraph, rng, order: Optional[ChainOrder] = None) -> PerfectMatching:
    """:func:`chain_sample` on a chain graph given in any row/column order.

    Pass ``order`` from :func:`chain_order` to skip recognition on repeated draws.
    """
    if order is None:
        order = chain_order(g)
    m = chain_sample(order.degrees, rng)
    pi = [0] * g.n
    for k, c in enumerate(m.pi):
        pi[order.row_order[k]] = order.col_order[c]
    return PerfectMatching(tuple(pi))


# convex windowed DP ------------------------------------------------------

@dataclass
class WindowTables:
    """Retained sweep data for traceback sampling.

    ``layers[t]`` maps a state to its count; ``preds[t]`` maps a state of
    layer ``t`` to ``(previous state, removed edge)`` pairs.  Row and column
    indices refer to the graph after ``row_order`` is applied.
    """
    n: int
    r: int
    row_order: tuple
    col_order: tuple
    layers: list = field(default_factory=list)
    preds: list = field(default_factory=list)
    permanent: int = 0


def _prepare(g: BipartiteGraph, presentation):
    _balanced(g)
    h = g
    col_order = tuple(range(g.n))
    if presentation is not None:
        h = presentation.apply(g)
        col_order = tuple(presentation.col_order)
        row_base = tuple(presentation.row_order)
    else:
        row_base = tuple(range(g.m))
    for i in range(h.m):
        r = h.rows[i]
        low = r & -r
        if r and ((r // low) & ((r // low) + 1)) != 0:
            raise NotConvexPresentation(f"row {i + 1} is not an interval", row=i + 1)
    pm = find_perfect_matching(h)
    if pm is None:
        return None, None, row_base, col_order
    # put the matching on the diagonal: new row j is the row matched to column j
    sig = pm.sigma
    h = h.permute(sig, range(h.n))
    row_order = tuple(row_base[k] for k in sig)
    return h, pm, row_order, col_order


def convex_dp(g: BipartiteGraph, presentation=None, retain: bool = False) -> WindowTables:
    """Run the window sweep.

    Rows are first permuted so that some perfect matching is the diagonal;
    then every edge (a, b) satisfies |a - b| < r.  Window ``i`` holds the
    entries with row >= i and column <= i + r (clipped at n).  A state is the
    part of a partial matching inside the window, stored as a sorted tuple
    of (row, column) pairs; its count is the number of partial matchings
    that agree with it there.
    """
    h, pm, row_order, col_order = _prepare(g, presentation)
    n = g.n
    if h is None:
        return WindowTables(n, 0, row_order, col_order, permanent=0)
    r = max(h.row_degree(i) for i in range(n))
    if 2 * r >= n and math.factorial(min(2 * r, n)) * n > DP_WORK_WARNING:
        warnings.warn(f"convex DP with r={r}, n={n} approaches full enumeration",
                      RuntimeWarning, stacklevel=2)
    bound = math.factorial(2 * r)
    tables = WindowTables(n, r, row_order, col_order)

    # first window: match every column <= r (0-based) into distinct rows
    first_cols = min(r + 1, n)
    layer = {}

    def init(j, used, acc):
        if j == first_cols:
            key = tuple(sorted(acc))
            layer[key] = layer.get(key, 0) + 1
            return
        for a in bits(h.cols[j] & ~used):
            acc.append((a, j))
            init(j + 1, used | (1 << a), acc)
            acc.pop()

    init(0, 0, [])
    assert len(layer) < bound or bound == 1 and len(layer) <= 1, "window state bound exceeded"
    if retain:
        tables.layers.append(layer)
        tables.preds.append({})

    last = max(n - r, 1)  # 1-based index of the final window
    for i in range(last - 1):  # 0-based row being removed
        new_col = i + r + 1
        nxt = {}
        preds = {} if retain else None
        for state, cnt in layer.items():
            edge = next((e for e in state if e[0] == i), None)
            if edge is None:
                continue
            rest = tuple(e for e in state if e[0] != i)
            used = 0
            for a, _ in rest:
                used |= 1 << a
            # rows below i in the window that are adjacent to the new column
            cand = h.cols[new_col] & ~used & ~((1 << (i + 1)) - 1)
            for a in bits(cand):
                key = tuple(sorted(rest + ((a, new_col),)))
                nxt[key] = nxt.get(key, 0) + cnt
                if retain:
                    preds.setdefault(key, []).append((state, edge))
        layer = nxt
        assert len(layer) < bound or bound == 1 and len(layer) <= 1, "window state bound exceeded"
        if retain:
            tables.layers.append(layer)
            tables.preds.append(preds)
    tables.permanent = sum(layer.values())
    if not retain:
        tables.layers = [layer]
    return tables


def convex_dp_permanent(g: BipartiteGraph, presentation=None) -> int:
    return convex_dp(g, presentation).permanent


def convex_dp_sample(g: BipartiteGraph, tables: Optional[WindowTables], rng,
                     presentation=None) -> PerfectMatching:
    """Uniform perfect matching by traceback through retained window tables."""
    if tables is None or (tables.permanent > 0 and len(tables.layers) != len(tables.preds)):
        tables = convex_dp(g, presentation, retain=True)
    if tables.permanent == 0:
        raise NoPerfectMatching("graph has no perfect matching")
    layer = tables.layers[-1]
    states = list(layer)
    state = states[_weighted_index(rng, [layer[s] for s in states], tables.permanent)]
    edges = list(state)
    for t in range(len(tables.layers) - 1, 0, -1):
        options = tables.preds[t][state]
        prev = tables.layers[t - 1]
        weights = [prev[s] for s, _ in options]
        k = _weighted_index(rng, weights, sum(weights))
        state, edge = options[k]
        edges.append(edge)
    n = tables.n
    pi = [0] * n
    for a, b in edges:
        pi[tables.row_order[a]] = tables.col_order[b]
    return PerfectMatching(tuple(pi))


def _weighted_index(rng, weights, total) -> int:
    # exact for big-integer weights: draw an integer in [0, total)
    x = _randbelow(rng, total)
    acc = 0
    for k, w in enumerate(weights):
        acc += w
        if x < acc:
            return k
    raise AssertionError("weights do not sum to total")


def _randbelow(rng, total: int) -> int:
    if total < (1 << 62):
        return int(rng.integers(total))
    nbits = total.bit_length()
    while True:
        x = 0
        for _ in range((nbits + 61) // 62):
            x = (x << 62) | int(rng.integers(1 << 62))
        x >>= (-nbits) % 62
        if x < total:
            return x


def permanent(g: BipartiteGraph, method: str = "auto") -> int:
    """Dispatch by method name: enumerate, ryser, chain, convex-dp or auto."""
    from .recognizers import check_chain, check_convex, chain_degrees
    if method == "enumerate":
        return permanent_enumerate(g)
    if method == "ryser":
        return permanent_ryser(g)
    if method == "chain":
        _balanced(g)
        a = chain_degrees(g)
        if a is None:
            raise NotChainGraph("rows are not nested prefixes in any order")
        return chain_permanent(a)
    if method == "convex-dp":
        p = check_convex(g)
        if p is None:
            raise NotConvexPresentation("no column order makes every row an interval")
        return convex_dp_permanent(g, p)
    if method == "auto":
        _balanced(g)
        a = chain_degrees(g)
        if a is not None:
            return chain_permanent(a)
        p = check_convex(g)
        if p is not None:
            return convex_dp_permanent(g, p)
        if g.n <= ENUMERATE_CAP:
            return permanent_enumerate(g)
        return permanent_ryser(g)
    raise ValueError(f"unknown method {method!r}")
