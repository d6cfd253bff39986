"""Canonical switch paths between perfect matchings of a monotone graph.

Each alternating cycle of X (+) Y is drawn on its own board: an X edge
(u, v) becomes the point (x(v), n - u + 1) in local ranks, a Y edge the
point in the column of v and the row of the next cycle vertex.  Walking
the cycle gives the path Pi = p_1, q_1, ..., p_n, q_n through these points,
alternating vertical and horizontal segments.  Two foci climb Pi from its
two ends at equal height (see :mod:`switchmix.climbing`) and the tokens,
which start on the p's, are pushed onto the q's by one or two switches each
time a focus passes a corner.

The board is padded with two virtual rows and two virtual columns so that
the hole-pair invariant already holds at the first and last steps.  Moves
are computed on the padded board and then contracted back to the real
graph; see :func:`_contract`.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .climbing import build_range, climb
from .errors import (InvariantViolation, NotAlternatingCycle, NotMonotone,
                     TooLarge, TransitoryState)
from .graph import BipartiteGraph, PerfectMatching, validate_matching
from .chain import SwitchMove

OMEGA_CAP = 2000


# cycles ------------------------------------------------------------------

def decompose_cycles(x: PerfectMatching, y: PerfectMatching):
    """Alternating cycles of X (+) Y as row lists, plus the shared edges.

    A cycle is listed from its largest row u_1, then u_2 = Y-partner of
    X(u_1) and so on.  Cycles are ordered by their smallest row.
    """
    n = len(x.pi)
    ysig = y.sigma
    seen = [False] * n
    cycles, shared = [], []
    for start in range(n):
        if seen[start]:
            continue
        if x.pi[start] == y.pi[start]:
            seen[start] = True
            shared.append((start, x.pi[start]))
            continue
        rows = []
        r = start
        while not seen[r]:
            seen[r] = True
            rows.append(r)
            r = ysig[x.pi[r]]
        top = max(rows)
        k = rows.index(top)
        cycles.append(rows[k:] + rows[:k])
    cycles.sort(key=min)
    return cycles, shared


# boards ------------------------------------------------------------------

@dataclass
class Board:
    """Padded board of one cycle.

    ``pts`` lists the points of Pi in order as (x, y); segment m joins
    pts[2m] (an X point) and pts[2m+1] (a Y point) vertically.  Real rows
    and columns run 1..n; 0 and n+1 are virtual on both axes.
    """
    n: int
    rows: tuple  # cycle rows, u_1 first (graph indices)
    row_of_y: dict  # board y -> graph row (real rows only)
    col_of_x: dict  # board x -> graph column
    pts: list
    summit_index: int  # position in pts of the raised top point
    h: int  # column of p_1

    @property
    def size(self) -> int:
        return self.n + 2

    def segment_of(self, k: int) -> int:
        return k // 2

    def x_points(self) -> list:
        return self.pts[0::2]

    def y_points(self) -> list:
        return self.pts[1::2]

    def real(self, pt) -> bool:
        return 1 <= pt[0] <= self.n and 1 <= pt[1] <= self.n

    def initial(self) -> dict:
        """Tokens of X on the real board plus the two virtual corners."""
        top = self.n + 1
        tok = {0: top, top: 0}
        xs = self.x_points()
        for pt in xs[1:]:
            if self.real(pt):
                tok[pt[1]] = pt[0]
        tok[1] = self.h
        return tok

    def final(self) -> dict:
        top = self.n + 1
        tok = {0: top, top: 0}
        for pt in self.y_points():
            if self.real(pt):
                tok[pt[1]] = pt[0]
        k = self.summit_index
        tok[self.n] = self.pts[k][0]
        return tok


def build_board(g: BipartiteGraph, x: PerfectMatching, y: PerfectMatching, cycle) -> Board:
    """Board of the alternating cycle whose rows are ``cycle`` (u_1 first)."""
    n = len(cycle)
    ysig = y.sigma
    if n < 2:
        raise NotAlternatingCycle("a cycle needs at least two rows", rows=list(cycle))
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if ysig[x.pi[a]] != b or not g.has_edge(a, x.pi[a]) or not g.has_edge(b, x.pi[a]):
            raise NotAlternatingCycle("rows do not follow X then Y around a cycle",
                                      rows=[r + 1 for r in cycle])
    rows = sorted(cycle)
    cols = sorted(x.pi[r] for r in cycle)
    if cycle[0] != rows[-1]:
        raise NotAlternatingCycle("cycle must start at its largest row", rows=[r + 1 for r in cycle])
    yr = {r: n - k for k, r in enumerate(rows)}  # rank 1 (smallest row) is at the top
    xc = {c: k + 1 for k, c in enumerate(cols)}
    ps, qs = [], []
    for m, u in enumerate(cycle):
        v = x.pi[u]
        nxt = cycle[(m + 1) % n]
        ps.append((xc[v], yr[u]))
        qs.append((xc[v], yr[nxt]))
    top = n + 1
    k = next(m for m in range(n) if qs[m][1] == n)  # q_k sits on the top row
    h = ps[0][0]
    xs = [(h, 0)] + ps[1:k + 1] + [(0, top)] + ps[k + 1:] + [(top, 1)]
    ys = qs[:k] + [(qs[k][0], top), (0, n)] + qs[k + 1:] + [(top, 0)]
    pts = []
    for a, b in zip(xs, ys):
        pts += [a, b]
    return Board(n, tuple(cycle), {v: r for r, v in yr.items()}, {v: c for c, v in xc.items()},
                 pts, 2 * k + 1, h)


# invariant ---------------------------------------------------------------

def _ends(pts, m):
    a, b = 2 * m, 2 * m + 1
    return (a, b) if pts[a][1] < pts[b][1] else (b, a)


def _beyond(pts, frm, at):
    k = 2 * at - frm
    return k if 0 <= k < len(pts) else None


def _hole_pairs(pts, i, j):
    """Index pairs that must be empty with alpha on segment i and beta on j."""
    a1, _ = _ends(pts, i)
    b1, b2 = _ends(pts, j)
    if pts[a1][0] < pts[b1][0]:
        other = _beyond(pts, b1, b2)
        side = (b2, other)
    else:
        other = _beyond(pts, b2, b1)
        side = (b1, other)
    return (2 * i, 2 * i + 1), side


def _force(pts, holes) -> set:
    """Path indices holding tokens when only ``holes`` may be adjacent
    gaps: next to a hole there is a token, then gaps and tokens alternate."""
    inside = set()
    n = len(pts)
    k = 0
    while k < n:
        if k in holes:
            k += 1
            continue
        e = k
        while e + 1 < n and e + 1 not in holes:
            e += 1
        run = list(range(k, e + 1))
        from_left = [(t - k) % 2 == 0 for t in run] if k > 0 else None
        from_right = [(e - t) % 2 == 0 for t in run] if e < n - 1 else None
        if from_left and from_right and from_left != from_right:
            raise InvariantViolation("gaps between the hole-pairs cannot alternate",
                                     span=(k + 1, e + 1))
        pick = from_left or from_right
        inside.update(t for t, f in zip(run, pick) if f)
        k = e + 1
    return inside


def _complete(board: Board, inside) -> dict:
    tok = {}
    for k in inside:
        x, yy = board.pts[k]
        if yy in tok:
            raise InvariantViolation("two forced tokens share a row", row=yy)
        tok[yy] = x
    free_rows = [r for r in range(board.size) if r not in tok]
    used = set(tok.values())
    free_cols = [c for c in range(board.size) if c not in used]
    if len(free_rows) != 1 or len(free_cols) != 1:
        raise InvariantViolation("forced tokens do not leave a single dislocation",
                                 rows=free_rows, cols=free_cols)
    tok[free_rows[0]] = free_cols[0]
    return tok


def invariant_config(board: Board, i: int, j: int) -> dict:
    """The unique configuration allowed by the invariant for foci on
    segments ``i`` and ``j``, as a map board row -> board column."""
    h1, h2 = _hole_pairs(board.pts, i, j)
    holes = set(h1) | {k for k in h2 if k is not None}
    return _complete(board, _force(board.pts, holes))


def invariant_check(board: Board, config: dict, i: int, j: int) -> Optional[str]:
    """None if ``config`` satisfies the invariant for foci on segments i, j;
    otherwise a short description of the first failure."""
    pts = board.pts
    occ = {(x, yy) for yy, x in config.items()}
    filled = [pt in occ for pt in pts]
    h1, h2 = _hole_pairs(pts, i, j)
    if filled[h1[0]] or filled[h1[1]]:
        return "I1: the alpha segment is not a hole-pair"
    if any(k is not None and filled[k] for k in h2):
        return "I2: the beta-side pair is not a hole-pair"
    allowed = {tuple(sorted(h1)), tuple(sorted(k for k in h2 if k is not None))}
    for k in range(len(pts) - 1):
        if not filled[k] and not filled[k + 1] and (k, k + 1) not in allowed:
            return f"I3: extra hole-pair at positions {k + 1},{k + 2} of the path"
    on_path = sum(filled)
    if on_path != board.size - 1:
        return f"|sigma on P| = {on_path}, expected {board.size - 1}"
    lo, hi = sorted((i, j))
    for k, f in enumerate(filled):
        if not f:
            continue
        seg = k // 2
        is_x = k % 2 == 0
        between = lo < seg < hi or (seg == lo and not is_x) or (seg == hi and is_x)
        # points strictly between the foci along Pi form P_U
        if between and not is_x:
            return "P_U holds a token off the X points"
        if not between and is_x:
            return "P_L holds a token off the Y points"
    return None


# case table --------------------------------------------------------------

def _rot(board: Board, pt):
    s = board.n + 1
    return (s - pt[0], s - pt[1])


def case_switches(board: Board, i: int, j: int, up: bool):
    """Case name and switches (pairs of token positions) for the event that
    ends the v-period with foci on segments i, j moving up (or down)."""
    pts = board.pts if up else [_rot(board, p) for p in board.pts]
    a1, a2 = _ends(pts, i)
    b1, b2 = _ends(pts, j)
    a3 = _beyond(pts, a1, a2)
    b3 = _beyond(pts, b1, b2)
    b4 = _beyond(pts, b2, b3) if b3 is not None else None
    X = lambda k: pts[k][0]
    Y = lambda k: pts[k][1]
    left = X(a1) < X(b1)
    d = (X(a1), Y(b2)) if left else (X(a1), Y(b1))
    if Y(a2) < Y(b2):
        if a3 is None:
            raise InvariantViolation("alpha ran off the path", segment=i)
        if left and X(a3) < X(b1):
            name, sw = "I", [(pts[a3], d)]
        elif left:
            name, sw = "I*", [(pts[a3], pts[b1]), (d, (X(b1), Y(a2)))]
        elif X(a3) > X(b1):
            name, sw = "III", [(pts[a3], d)]
        else:
            name, sw = "III*", [(pts[a3], pts[b2]), (d, (X(b1), Y(a2)))]
    else:
        if b4 is None:
            raise InvariantViolation("beta ran off the path", segment=j)
        rising = Y(b4) > Y(b3)
        if left and X(a1) < X(b3):
            name, sw = "II", [(pts[b4], d)] if rising else []
        elif left:
            name, sw = "II*", [(pts[b4], d)] if not rising else []
        elif X(a1) > X(b3):
            name = "IV"
            sw = [(pts[b2], d)] + ([(pts[b4], (X(a1), Y(b2)))] if not rising else [])
        else:
            name = "IV*"
            sw = [(pts[b2], d)] + ([(pts[b4], (X(a1), Y(b2)))] if rising else [])
    if not up:
        sw = [(_rot(board, s), _rot(board, t)) for s, t in sw]
    return name, sw


def _switch(config: dict, s, t):
    if config.get(s[1]) != s[0] or config.get(t[1]) != t[0]:
        raise InvariantViolation("switch names a position without a token", at=[s, t])
    out = dict(config)
    out[s[1]], out[t[1]] = t[0], s[0]
    return out


# climb -------------------------------------------------------------------

def _slope(e0, e1):
    if e1[0] == "slope":
        return e1[1]
    if e0[0] == "slope":
        return e0[1]
    return min(e0[1], e1[1])


def v_periods(board: Board) -> list:
    """(alpha segment, beta segment, moving up) for each v-period in order."""
    r = build_range([p[1] for p in board.pts])
    events = climb(r)
    out = []
    for e0, e1 in zip(events, events[1:]):
        sa = _slope(e0.alpha, e1.alpha)
        sb = _slope(e0.beta, e1.beta)
        if sa % 2 == 0 or sb % 2 == 0:
            continue  # one focus is on a horizontal segment
        up = r.keys[e1.level] > r.keys[e0.level]
        i, j = (sa - 1) // 2, (sb - 1) // 2
        if out and out[-1][:2] == (i, j):
            out[-1] = (i, j, up)
            continue
        out.append((i, j, up))
    return out


# engine ------------------------------------------------------------------

@dataclass
class BoardRun:
    board: Board
    periods: list
    configs: list  # every padded configuration visited, in order
    transitory: list
    period_of: list  # index into periods for non-transitory configs, else -1
    cases: list


def run_board(board: Board) -> BoardRun:
    """Play the token game on one padded board.

    Each step applies the case-table switches, and the configuration reached
    must equal the one the invariant forces for the next v-period.
    """
    periods = v_periods(board)
    if not periods:
        raise InvariantViolation("climb has no v-period")
    cur = board.initial()
    if invariant_config(board, *periods[0][:2]) != cur:
        raise InvariantViolation("padded start does not satisfy the invariant")
    configs, transitory, period_of, cases = [cur], [False], [0], []
    for t in range(len(periods) - 1):
        i, j, up = periods[t]
        i2, j2, _ = periods[t + 1]
        name, sw = case_switches(board, i, j, up)
        cases.append(name)
        for k, (s, u) in enumerate(sw):
            cur = _switch(cur, s, u)
            configs.append(cur)
            last = k == len(sw) - 1
            transitory.append(not last)
            period_of.append(t + 1 if last else -1)
        want = invariant_config(board, i2, j2)
        if cur != want:
            raise InvariantViolation(f"case {name} does not reach the forced configuration",
                                     period=t, segments=(i, j, i2, j2))
        if not sw:
            period_of[-1] = t + 1
    if cur != board.final():
        raise InvariantViolation("padded finish is not the target")
    return BoardRun(board, periods, configs, transitory, period_of, cases)


def _contract(board: Board, config: dict) -> dict:
    """Real graph matching (graph row -> graph column) of a padded
    configuration.  Virtual row 0 pairs with virtual column n+1 and the top
    virtual row with column 0; chains through them are short-circuited."""
    top = board.n + 1
    back = {top: 0, 0: top}  # virtual column -> its row
    out = {}
    for yy in range(1, board.n + 1):
        x = config[yy]
        hops = 0
        while x in back:
            x = config[back[x]]
            hops += 1
            if hops > 2:
                raise InvariantViolation("virtual chain does not close")
        out[board.row_of_y[yy]] = board.col_of_x[x]
    return out


# paths -------------------------------------------------------------------

@dataclass
class CanonicalPath:
    x: PerfectMatching
    y: PerfectMatching
    moves: list = field(default_factory=list)
    states: list = field(default_factory=list)  # pi tuples, len(moves) + 1
    transitory: list = field(default_factory=list)
    cycle_marks: list = field(default_factory=list)  # index into moves where each cycle starts
    invariant_ok: bool = True

    def __len__(self):
        return len(self.moves)


def _diff(a: tuple, b: tuple):
    d = [r for r in range(len(a)) if a[r] != b[r]]
    return d


def build_canonical_path(g: BipartiteGraph, x: PerfectMatching, y: PerfectMatching,
                         check: bool = True) -> CanonicalPath:
    """Switch sequence from x to y on a monotone graph.

    If g is not already in staircase order a monotone presentation is
    found, the path is built there and translated back.
    """
    from .recognizers import check_monotone, monotone_witness
    if check:
        for mt, name in ((x, "x"), (y, "y")):
            if not validate_matching(g, mt):
                raise InvariantViolation(f"{name} is not a perfect matching of the graph")
    if monotone_witness(g) is not None:
        p = check_monotone(g)
        if p is None:
            raise NotMonotone("graph has no monotone presentation")
        h = p.apply(g)
        ri = p.inverse().row_order  # old row -> new row
        ci = p.inverse().col_order
        fwd = lambda m: PerfectMatching(tuple(ci[m.pi[p.row_order[k]]] for k in range(g.n)))
        inner = _build(h, fwd(x), fwd(y))
        back = lambda pi: tuple(p.col_order[pi[ri[r]]] for r in range(g.n))
        out = CanonicalPath(x, y, transitory=inner.transitory, cycle_marks=inner.cycle_marks)
        out.states = [back(s) for s in inner.states]
        out.moves = [SwitchMove(p.row_order[m.i], p.row_order[m.j]) for m in inner.moves]
        return out
    return _build(g, x, y)


def _build(g: BipartiteGraph, x: PerfectMatching, y: PerfectMatching) -> CanonicalPath:
    cycles, _ = decompose_cycles(x, y)
    pi = list(x.pi)
    path = CanonicalPath(x, y, states=[tuple(pi)], transitory=[False])
    for cyc in cycles:
        path.cycle_marks.append(len(path.moves))
        run = run_board(build_board(g, x, y, cyc))
        prev = None
        for k, cfg in enumerate(run.configs):
            local = _contract(run.board, cfg)
            for r, c in local.items():
                pi[r] = c
            cur = tuple(pi)
            if prev is None:
                prev = cur
                continue
            d = _diff(prev, cur)
            if not d:
                if not run.transitory[k]:
                    path.transitory[-1] = False
                continue
            if len(d) != 2:
                raise InvariantViolation("a padded switch is not a single real switch",
                                         rows=[r + 1 for r in d])
            mv = SwitchMove(d[0], d[1])
            if not mv.is_legal(g, prev):
                raise InvariantViolation("emitted switch is not an edge move", move=mv.report())
            path.moves.append(mv)
            path.states.append(cur)
            path.transitory.append(run.transitory[k])
            prev = cur
    if path.states[-1] != y.pi:
        raise InvariantViolation("path does not end at y")
    return path


# near complement ---------------------------------------------------------

def near_complement_config(board: Board, i: int, j: int) -> dict:
    """Configuration of the mirrored game (tokens start on the q's and the
    foci swap names) at the v-period with foci on segments i, j."""
    pts = board.pts
    # hole-pairs of the mirrored game: beta's segment, and the alpha-side pair
    b1, _ = _ends(pts, j)
    a1, a2 = _ends(pts, i)
    if pts[b1][0] < pts[a1][0]:
        side = (a2, _beyond(pts, a1, a2))
    else:
        side = (a1, _beyond(pts, a2, a1))
    holes = {2 * j, 2 * j + 1} | {k for k in side if k is not None}
    return _complete(board, _force(pts, holes))


def eq2_count(board: Board, sigma: dict, sigma2: dict) -> int:
    occ = {(x, yy) for yy, x in sigma.items()} | {(x, yy) for yy, x in sigma2.items()}
    return sum(1 for p in board.pts if p in occ)


@dataclass
class NearComplement:
    board: Board
    sigma: dict
    sigma_prime: dict
    covered: int  # path points holding a token of sigma or sigma'
    matching: PerfectMatching  # W on the whole graph
    real_overlap: int  # |(Z u W) n (X u Y)| counted on the cycle's edges

    @property
    def holds(self) -> bool:
        return self.covered == 2 * self.board.size - 2


def near_complement(g: BipartiteGraph, x: PerfectMatching, y: PerfectMatching,
                    cycle_index: int, t_index: int) -> NearComplement:
    """Near complement of the t-th padded configuration on one cycle.

    Off the cycle, W agrees with X on cycles already switched, with Y on
    those still to come, and with the shared edges.  On the cycle it is
    the mirrored game's configuration, contracted to the real graph.
    """
    cycles, shared = decompose_cycles(x, y)
    board = build_board(g, x, y, cycles[cycle_index])
    run = run_board(board)
    if run.transitory[t_index]:
        raise TransitoryState("configuration sits between the two switches of a case",
                              index=t_index)
    i, j, _ = run.periods[run.period_of[t_index]]
    sigma = run.configs[t_index]
    sigma2 = near_complement_config(board, i, j)
    w = list(x.pi)
    for k, cyc in enumerate(cycles):
        if k > cycle_index:
            for r in cyc:
                w[r] = y.pi[r]
    for r, c in _contract(board, sigma2).items():
        w[r] = c
    z = _contract(board, sigma)
    cyc_edges = {(r, x.pi[r]) for r in board.rows} | {(r, y.pi[r]) for r in board.rows}
    both = {(r, c) for r, c in z.items()} | {(r, w[r]) for r in board.rows}
    wm = PerfectMatching(tuple(w))
    if not validate_matching(g, wm):
        raise InvariantViolation("near complement is not a perfect matching of the graph")
    return NearComplement(board, sigma, sigma2, eq2_count(board, sigma, sigma2), wm,
                          len(both & cyc_edges))


# congestion --------------------------------------------------------------

@dataclass
class CongestionReport:
    n: int
    omega: int
    rho: Fraction
    max_load: int  # canonical paths through the busiest transition
    worst: Optional[tuple]  # (state, state) of the busiest transition
    max_length: int
    loads: dict

    @property
    def bound_4n6(self) -> int:
        return 4 * self.n ** 6

    @property
    def bound_8n2_omega(self) -> int:
        return 8 * self.n ** 2 * self.omega

    def ok(self) -> bool:
        return self.rho <= self.bound_4n6 and self.max_load <= self.bound_8n2_omega


def _loads_for(args):
    g, omega, xs = args
    loads, lens, max_len = {}, {}, 0
    for x in xs:
        for y in omega:
            if x == y:
                continue
            p = _build(g, x, y)
            L = len(p)
            max_len = max(max_len, L)
            for e in zip(p.states, p.states[1:]):
                loads[e] = loads.get(e, 0) + 1
                lens[e] = lens.get(e, 0) + L
    return loads, lens, max_len


def congestion(g: BipartiteGraph, cap: int = OMEGA_CAP, threads: int = 1) -> CongestionReport:
    """Exact congestion of the canonical paths under the uniform
    distribution, with P(Z, Z') = 2 / n^2 for every switch.

    The load table is keyed by states of the monotone presentation used to
    build the paths; congestion does not depend on that relabelling.
    """
    from .permanent import enumerate_matchings, permanent
    from .recognizers import check_monotone, monotone_witness
    n = g.n
    if monotone_witness(g) is not None:
        p = check_monotone(g)
        if p is None:
            raise NotMonotone("graph has no monotone presentation")
        g = p.apply(g)
    size = permanent(g)
    if size > cap:
        raise TooLarge(f"|Omega| = {size} exceeds {cap}", omega=size, cap=cap)
    omega = [PerfectMatching(q) for q in enumerate_matchings(g, cap=max(n, 12))]
    chunks = [omega[k::threads] for k in range(threads)] if threads > 1 else [omega]
    jobs = [(g, omega, c) for c in chunks if c]
    if len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(len(jobs)) as ex:
            parts = list(ex.map(_loads_for, jobs))
    else:
        parts = [_loads_for(j) for j in jobs]
    loads, lens, max_len = {}, {}, 0
    for lo, le, ml in parts:  # fixed order keeps the reduction deterministic
        for e, v in lo.items():
            loads[e] = loads.get(e, 0) + v
        for e, v in le.items():
            lens[e] = lens.get(e, 0) + v
        max_len = max(max_len, ml)
    if not loads:
        return CongestionReport(n, len(omega), Fraction(0), 0, None, max_len, loads)
    # 1 / (pi(Z) P(Z,Z')) * sum pi(X) pi(Y) |path| with pi uniform
    scale = Fraction(n * n, 2 * len(omega))
    worst = max(sorted(lens), key=lambda e: lens[e])
    rho = scale * lens[worst]
    return CongestionReport(n, len(omega), rho, max(loads.values()), worst, max_len, loads)
