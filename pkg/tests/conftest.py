"""Shared instances and independent oracles for the test suite."""

import itertools
import random

import networkx as nx
from hypothesis import settings

from switchmix import BipartiteGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# 4x4 convex example with a hand-checked permanent of 4
CONVEX4 = ["0011", "1100", "0101", "1111"]
# 5x5 chain graph, degrees (2,3,4,5,5), permanent 2*2*2*2*1 = 16
CHAIN5 = ["11000", "11100", "11110", "11111", "11111"]
# biconvex "armchair" in a shuffled order
ARMCHAIR = ["00010", "00111", "01110", "11100", "01100"]
# convex with the identity order but not biconvex
CONVEX_NOT_BI = ["1000", "1110", "0100", "0011"]


def graph(rows):
    return BipartiteGraph.from_matrix(rows)


def brute_permanent(g):
    """Sum over all n! permutations; an oracle for n <= 8."""
    n = g.n
    return sum(all(g.has_edge(i, p[i]) for i in range(n))
               for p in itertools.permutations(range(n)))


def brute_matchings(g):
    n = g.n
    return sorted(p for p in itertools.permutations(range(n))
                  if all(g.has_edge(i, p[i]) for i in range(n)))


def nx_has_perfect_matching(g):
    """Hopcroft-Karp from networkx, independent of the package's matcher."""
    b = nx.Graph()
    top = [("r", i) for i in range(g.m)]
    b.add_nodes_from(top)
    b.add_nodes_from(("c", j) for j in range(g.n))
    b.add_edges_from((("r", i), ("c", j)) for i in range(g.m) for j in g.neighbors(i))
    m = nx.bipartite.hopcroft_karp_matching(b, top_nodes=top)
    return len(m) // 2 == g.n


def brute_hamiltonian(g):
    """Hamilton cycle search on the bipartite graph, rows alternate with columns."""
    n = g.n
    if n == 1:
        return False
    # fix row 0 first; try every column order and row order interleaving
    for rows in itertools.permutations(range(1, n)):
        rs = (0,) + rows
        # columns between consecutive rows: col k joins rs[k] and rs[k+1]
        ok_cols = [set(g.neighbors(rs[k])) & set(g.neighbors(rs[(k + 1) % n])) for k in range(n)]
        if _distinct_rep(ok_cols):
            return True
    return False


def _distinct_rep(sets):
    def rec(k, used):
        if k == len(sets):
            return True
        return any(rec(k + 1, used | {c}) for c in sets[k] if c not in used)
    return rec(0, frozenset())


def random_range(rnd: random.Random, n: int):
    """Heights with equal minimal ends; interior values may repeat."""
    inner = [rnd.randint(1, n) for _ in range(n - 2)]
    return [0] + inner + [0]


# acceptance report -------------------------------------------------------

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, title, secs, note = ACCEPTANCE[k]
        line = f"{status} criterion {k:2d}: {title} ({secs:.1f}s)"
        if note:
            line += f" -- {note}"
        terminalreporter.write_line(line)
