"""The switch chain on perfect matchings and exact small-instance analysis.

One step draws an ordered pair (i, j) uniformly from the n^2 possibilities.
If i != j and both (i, pi[j]) and (j, pi[i]) are edges, rows i and j swap
their columns; otherwise the chain stays put.  So two matchings that differ
by a switch are joined with probability 2/n^2, and every state keeps a loop
probability of at least 1/n.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .errors import Disconnected, NotGammaFree, TooLarge
from .graph import BipartiteGraph, PerfectMatching, validate_matching
from .permanent import enumerate_matchings, permanent_enumerate

STATE_CAP = 100_000
TRANSITION_N_CAP = 16
EXACT_MIXING_CAP = 5000


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """The library's random source: numpy's PCG64 (64-bit output)."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SwitchMove:
    i: int
    j: int

    def apply(self, pi: tuple) -> tuple:
        p = list(pi)
        p[self.i], p[self.j] = p[self.j], p[self.i]
        return tuple(p)

    def is_legal(self, g: BipartiteGraph, pi) -> bool:
        return self.i != self.j and g.has_edge(self.i, pi[self.j]) and g.has_edge(self.j, pi[self.i])

    def report(self) -> str:
        return f"{self.i + 1} {self.j + 1}"


def step(g: BipartiteGraph, m: PerfectMatching, rng, pair=None) -> PerfectMatching:
    n = g.n
    if pair is None:
        k = int(rng.integers(n * n))
        i, j = divmod(k, n)
    else:
        i, j = pair
    pi = m.pi
    if i != j and g.has_edge(i, pi[j]) and g.has_edge(j, pi[i]):
        return PerfectMatching(SwitchMove(i, j).apply(pi))
    return m


def run(g: BipartiteGraph, m0: PerfectMatching, t_max: int, rng) -> PerfectMatching:
    n = g.n
    pi = list(m0.pi)
    rows = g.rows
    # draw pairs in blocks; same stream as calling step() t_max times
    done = 0
    while done < t_max:
        block = rng.integers(n * n, size=min(65536, t_max - done))
        for k in block:
            i, j = divmod(int(k), n)
            if i != j and (rows[i] >> pi[j]) & 1 and (rows[j] >> pi[i]) & 1:
                pi[i], pi[j] = pi[j], pi[i]
        done += len(block)
    return PerfectMatching(tuple(pi))


# transition graph --------------------------------------------------------

@dataclass
class TransitionGraph:
    n: int
    states: list
    index: dict
    adj: list  # adj[s] = sorted list of neighbouring state indices
    moves: dict = field(default_factory=dict)  # (s, t) -> SwitchMove with s < t

    @property
    def size(self) -> int:
        return len(self.states)

    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def transition_probability(self, s: int, t: int) -> float:
        if s == t:
            return 1.0 - 2.0 * len(self.adj[s]) / self.n ** 2
        return 2.0 / self.n ** 2 if t in self.adj[s] else 0.0

    def matrix(self, sparse: bool = True):
        N = self.size
        rows, cols, vals = [], [], []
        p = 2.0 / self.n ** 2
        for s in range(N):
            rows.append(s)
            cols.append(s)
            vals.append(1.0 - p * len(self.adj[s]))
            for t in self.adj[s]:
                rows.append(s)
                cols.append(t)
                vals.append(p)
        P = sp.csr_matrix((vals, (rows, cols)), shape=(N, N))
        return P if sparse else P.toarray()

    def step_table(self) -> np.ndarray:
        """``table[s, i*n + j]`` is the state reached from ``s`` by pair (i, j)."""
        n = self.n
        N = self.size
        table = np.repeat(np.arange(N, dtype=np.int64)[:, None], n * n, axis=1)
        for (s, t), mv in self.moves.items():
            table[s, mv.i * n + mv.j] = t
            table[s, mv.j * n + mv.i] = t
            table[t, mv.i * n + mv.j] = s
            table[t, mv.j * n + mv.i] = s
        return table


def build_transition_graph(g: BipartiteGraph, cap: int = STATE_CAP) -> TransitionGraph:
    count = permanent_enumerate(g, cap=TRANSITION_N_CAP)
    if count > cap:
        raise TooLarge(f"state space has {count} > {cap} matchings", size=count, cap=cap)
    states = enumerate_matchings(g, cap=TRANSITION_N_CAP)
    index = {s: k for k, s in enumerate(states)}
    n = g.n
    adj = [[] for _ in states]
    moves = {}
    for s, pi in enumerate(states):
        for i in range(n):
            for j in range(i + 1, n):
                if g.has_edge(i, pi[j]) and g.has_edge(j, pi[i]):
                    mv = SwitchMove(i, j)
                    t = index[mv.apply(pi)]
                    adj[s].append(t)
                    if s < t:
                        moves[(s, t)] = mv
    for a in adj:
        a.sort()
    return TransitionGraph(n, states, index, adj, moves)


def _bfs(tg: TransitionGraph, src: int) -> list:
    dist = [-1] * tg.size
    dist[src] = 0
    q = deque([src])
    while q:
        s = q.popleft()
        for t in tg.adj[s]:
            if dist[t] < 0:
                dist[t] = dist[s] + 1
                q.append(t)
    return dist


def ergodicity_check(tg: TransitionGraph, n: Optional[int] = None):
    """(connected, diameter); the diameter is ``math.inf`` when disconnected."""
    if tg.size == 0:
        return False, math.inf
    diameter = 0
    for s in range(tg.size):
        d = _bfs(tg, s)
        if min(d) < 0:
            return False, math.inf
        diameter = max(diameter, max(d))
    return True, diameter


# constructive connecting path --------------------------------------------

def greedy_connect(g: BipartiteGraph, x: PerfectMatching, y: PerfectMatching) -> list:
    """Switch sequence from ``x`` to ``y`` in a Gamma-free presentation.

    At the first row k where the two current matchings disagree, the one
    with the larger column at k is switched with the row holding the other's
    column, which is an edge by Gamma-freeness.  Moves made on the ``y`` side
    are reversed and appended, so the result walks from ``x`` to ``y``.
    """
    from .recognizers import gamma_free_check
    w = gamma_free_check(g)
    if w is not None:
        raise NotGammaFree("presentation contains a Gamma submatrix", witness=w.report())
    a, b = list(x.pi), list(y.pi)
    front, back = [], []
    n = g.n
    while True:
        k = next((t for t in range(n) if a[t] != b[t]), None)
        if k is None:
            break
        if a[k] > b[k]:
            cur, other, out = a, b, front
        else:
            cur, other, out = b, a, back
        l = cur.index(other[k])
        mv = SwitchMove(k, l)
        assert l > k and mv.is_legal(g, cur)
        cur[k], cur[l] = cur[l], cur[k]
        out.append(mv)
    return front + back[::-1]


def apply_moves(g: BipartiteGraph, x: PerfectMatching, moves) -> list:
    """States visited by ``moves`` from ``x``; raises if a move is illegal."""
    pi = x.pi
    seen = [pi]
    for mv in moves:
        if not mv.is_legal(g, pi):
            raise ValueError(f"illegal switch {mv.report()} at {pi}")
        pi = mv.apply(pi)
        seen.append(pi)
    return seen


# mixing ------------------------------------------------------------------

@dataclass
class MixingReport:
    spectral_gap: float
    tv_curve: list  # (t, worst-case total variation distance)
    t_mix: dict


def spectral_gap(tg: TransitionGraph) -> float:
    if tg.size > EXACT_MIXING_CAP:
        raise TooLarge(f"|Omega| = {tg.size} exceeds {EXACT_MIXING_CAP}", size=tg.size)
    if tg.size == 1:
        return 1.0
    ev = np.linalg.eigvalsh(tg.matrix(sparse=False))
    # eigvalsh sorts ascending; the top one is the stationary eigenvalue 1
    slem = max(abs(ev[0]), abs(ev[-2]))
    return float(1.0 - slem)


def exact_mixing(tg: TransitionGraph, epsilons=(1 / math.e,), t_max: int = 1_000_000) -> MixingReport:
    """Worst-start total variation curve until it falls below every epsilon.

    P is symmetric, so P^t is too, and row x of P^t is the law after t steps
    from x.  We iterate D <- P D starting from the identity.
    """
    if tg.size > EXACT_MIXING_CAP:
        raise TooLarge(f"|Omega| = {tg.size} exceeds {EXACT_MIXING_CAP}", size=tg.size)
    connected, _ = ergodicity_check(tg)
    if not connected:
        raise Disconnected("transition graph is disconnected; mixing is undefined")
    gap = spectral_gap(tg)
    N = tg.size
    P = tg.matrix()
    D = np.eye(N)
    target = min(epsilons)
    eps_sorted = sorted(epsilons, reverse=True)
    t_mix = {}
    curve = []
    t = 0
    while True:
        delta = float(0.5 * np.abs(D - 1.0 / N).sum(axis=1).max())
        curve.append((t, delta))
        while eps_sorted and delta <= eps_sorted[0]:
            t_mix[eps_sorted.pop(0)] = t
        if delta <= target or t >= t_max:
            break
        D = P @ D
        t += 1
    return MixingReport(gap, curve, t_mix)


def theorem_mixing_bound(n: int, epsilon: float) -> float:
    """8 n^6 (n ln n + 2 ln(1/eps)) for monotone graphs."""
    return 8.0 * n ** 6 * (n * math.log(n) + 2.0 * math.log(1.0 / epsilon))


def congestion_mixing_bound(rho: float, omega_size: int, epsilon: float) -> float:
    """2 rho (ln |Omega| + 2 ln(1/eps)) from a canonical-path congestion rho."""
    return 2.0 * rho * (math.log(omega_size) + 2.0 * math.log(1.0 / epsilon))


# replica simulation ------------------------------------------------------

def run_replicas(tg: TransitionGraph, start: int, t_max: int, replicas: int, rng,
                 block: int = 256) -> np.ndarray:
    """Final state indices of ``replicas`` independent runs of ``t_max`` steps.

    Uses the precomputed step table, so one step for all replicas is a single
    gather.  The pair stream is drawn as in :func:`step`.
    """
    n = tg.n
    table = tg.step_table()
    flat = table.ravel()
    width = n * n
    dtype = np.uint8 if width <= 256 else np.uint16
    s = np.full(replicas, start, dtype=np.int64)
    done = 0
    while done < t_max:
        b = min(block, t_max - done)
        pairs = rng.integers(width, size=(b, replicas), dtype=dtype)
        for k in range(b):
            s = flat[s * width + pairs[k]]
        done += b
    return s
