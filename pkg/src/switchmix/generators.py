"""Named graph families and seeded random instances per class.

Random instances are verified by the recognizers before they are returned.
They cover each class but are not uniform over it.
"""

from typing import Optional

import numpy as np

from .errors import GenerationFailed, NotMonotone
from .graph import BipartiteGraph
from .recognizers import ClassLabel, classify, gamma_free_check, monotone_witness

RETRY_BUDGET = 1000


def _from_intervals(n_cols: int, intervals) -> BipartiteGraph:
    rows = tuple(((1 << (b + 1)) - 1) ^ ((1 << a) - 1) for a, b in intervals)
    return BipartiteGraph(len(intervals), n_cols, rows)


def gen_dgh_6cycle() -> BipartiteGraph:
    return BipartiteGraph.from_matrix(["011", "101", "110"])


def gen_monotone_5() -> BipartiteGraph:
    """The 5x5 staircase with ten matchings used throughout the tests."""
    return BipartiteGraph.from_matrix(["11000", "11100", "11110", "00111", "00011"])


def gen_Gk(k: int) -> BipartiteGraph:
    """n = 2k-1.  Row i < k sees columns k..k+i, row k sees everything and
    row i > k sees columns i-k..k (1-based)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = 2 * k - 1
    iv = []
    for i in range(1, n + 1):
        if i < k:
            iv.append((k - 1, k + i - 1))
        elif i == k:
            iv.append((0, n - 1))
        else:
            iv.append((i - k - 1, k - 1))
    return _from_intervals(n, iv)


def gen_ladder(n: int) -> BipartiteGraph:
    if n < 2:
        raise ValueError("n must be at least 2")
    return _from_intervals(n, [(max(i - 1, 0), min(i + 1, n - 1)) for i in range(n)])


def gen_lower_triangular(n: int) -> BipartiteGraph:
    """Row i is adjacent to columns 1..i, so the unique matching is the diagonal."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return _from_intervals(n, [(0, i) for i in range(n)])


def gen_chain(a) -> BipartiteGraph:
    """Prefix graph: row i sees the first a[i] columns."""
    return _from_intervals(max(a), [(0, ai - 1) for ai in a])


def has_spanning_ladder(g: BipartiteGraph) -> bool:
    """True iff the diagonal, both off-diagonals and the last corner are edges."""
    w = monotone_witness(g)
    if w is not None:
        raise NotMonotone("presentation is not monotone", witness=w.report())
    if g.m != g.n:
        return False
    n = g.n
    for i in range(n):
        if not g.has_edge(i, i):
            return False
        if i + 1 < n and not (g.has_edge(i, i + 1) and g.has_edge(i + 1, i)):
            return False
    return True


# random instances --------------------------------------------------------

def _shuffle(g: BipartiteGraph, rng) -> BipartiteGraph:
    return g.permute(list(rng.permutation(g.m)), list(rng.permutation(g.n)))


def _random_chain(n, rng, density, require_matching):
    # non-decreasing a with a_i >= i (1-based) and a_n = n
    a = []
    lo = 1
    for i in range(1, n + 1):
        floor = max(lo, i if require_matching else 1)
        extra = rng.binomial(n - floor, density * 0.5) if n > floor else 0
        ai = floor + int(extra)
        a.append(ai)
        lo = ai
    a[-1] = n
    return gen_chain(a)


def _random_staircase(n, rng, density, require_matching):
    # alpha, beta non-decreasing; the diagonal is kept inside when required
    alpha, beta = [], []
    a_prev, b_prev = 0, 0
    for i in range(n):
        a_hi = i if require_matching else max(a_prev, min(b_prev + 1, n - 1))
        a_hi = max(a_hi, a_prev)
        a = a_prev + int(rng.binomial(a_hi - a_prev, 1 - density)) if a_hi > a_prev else a_prev
        if i == 0:
            a = 0
        b_lo = max(b_prev, a, i if require_matching else a)
        b = b_lo + int(rng.binomial(n - 1 - b_lo, density * 0.5)) if n - 1 > b_lo else b_lo
        alpha.append(a)
        beta.append(b)
        a_prev, b_prev = a, b
    beta[-1] = n - 1
    # rows must overlap or touch so that no column is isolated
    for i in range(1, n):
        if alpha[i] > beta[i - 1] + 1:
            alpha[i] = beta[i - 1] + 1
    return _from_intervals(n, list(zip(alpha, beta)))


def _random_convex(n, rng, density, require_matching):
    width = max(2, int(round(2 * density * n)))
    iv = []
    for i in range(n):
        if require_matching:
            a = max(0, i - int(rng.integers(width)))
            b = min(n - 1, i + int(rng.integers(width)))
        else:
            a = int(rng.integers(n))
            b = min(n - 1, a + int(rng.integers(width)))
        iv.append((a, b))
    order = rng.permutation(n)
    iv = [iv[k] for k in order]
    return _from_intervals(n, iv)


def _random_chordal(n, rng, density, require_matching):
    rows = [1 << i for i in range(n)]
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    order = rng.permutation(len(cells))
    target = int(density * len(cells))
    added = 0
    for k in order:
        if added >= target:
            break
        i, j = cells[k]
        trial = list(rows)
        trial[i] |= 1 << j
        if gamma_free_check(BipartiteGraph(n, n, tuple(trial))) is None:
            rows = trial
            added += 1
    return BipartiteGraph(n, n, tuple(rows))


def _random_any(n, rng, density, require_matching):
    a = rng.random((n, n)) < density
    if require_matching:
        a[np.arange(n), rng.permutation(n)] = True
    return BipartiteGraph.from_matrix(["".join("1" if x else "0" for x in row) for row in a])


_BUILDERS = {
    ClassLabel.Chain: _random_chain,
    ClassLabel.Monotone: _random_staircase,
    ClassLabel.Biconvex: _random_convex,
    ClassLabel.Convex: _random_convex,
    ClassLabel.ChordalBipartite: _random_chordal,
    ClassLabel.OtherBipartite: _random_any,
}


def gen_random(label, n: int, seed: Optional[int] = None, density: float = 0.5,
               require_matching: bool = True, shuffle: bool = False,
               exact: bool = False) -> BipartiteGraph:
    """Random instance whose class is at least as specific as ``label``.

    With ``exact`` the class must equal ``label``.  With ``shuffle`` rows and
    columns are randomly permuted before verification.  Raises
    GenerationFailed after RETRY_BUDGET rejected draws.
    """
    from .permanent import permanent_enumerate
    from .graph import find_perfect_matching
    label = ClassLabel[label] if isinstance(label, str) else ClassLabel(label)
    rng = np.random.default_rng(seed)
    build = _BUILDERS[label]
    for _ in range(RETRY_BUDGET):
        try:
            g = build(n, rng, density, require_matching)
        except Exception:
            continue
        if shuffle:
            g = _shuffle(g, rng)
        if require_matching and find_perfect_matching(g) is None:
            continue
        got = classify(g)
        if got > label or (exact and got != label):
            continue
        return g
    raise GenerationFailed(f"no {label.name} instance with n={n} after {RETRY_BUDGET} draws",
                           label=label.name, n=n)
