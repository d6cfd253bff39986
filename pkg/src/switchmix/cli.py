"""Command-line interface.

Exit codes: 0 on success, 1 on a domain error (a JSON error object is
printed), 2 on a usage error.  Matrices use the text format of
:func:`switchmix.graph.parse_matrix_text`; '-' reads standard input.
The default seed is 0, so every randomized command is reproducible.
"""

import argparse
import csv
import json
import sys
import time

from . import __version__
from .errors import SwitchMixError, NoPerfectMatching

DEFAULT_SEED = 0
FORMATS = ("json", "csv", "text")
METHODS = ("enumerate", "ryser", "chain", "convex-dp", "auto")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _graph(path: str):
    from .graph import parse_matrix_text
    return parse_matrix_text(_read(path))


def _perm(text: str, n: int):
    """'2,3,1' (1-based columns per row) -> PerfectMatching."""
    from .graph import PerfectMatching
    vals = [int(t) - 1 for t in text.replace(" ", "").split(",") if t]
    if len(vals) != n:
        raise ValueError(f"expected {n} entries, got {len(vals)}")
    return PerfectMatching(tuple(vals))


def _eps(text: str):
    return [float(t) for t in text.split(",") if t]


def _emit(obj, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        for k in sorted(obj):
            out.write(f"{k}: {obj[k]}\n")


def _first_matching(g):
    from .graph import find_perfect_matching
    m = find_perfect_matching(g)
    if m is None:
        raise NoPerfectMatching("graph has no perfect matching")
    return m


# subcommands -------------------------------------------------------------

def cmd_recognize(a, out):
    from .recognizers import ClassLabel, classify, gamma_free_check, monotone_witness
    g = _graph(a.input)
    label = classify(g)
    rep = {"class": label.name, "m": g.m, "n": g.n}
    w = gamma_free_check(g)
    if w is not None:
        rep["gamma_witness"] = w.report()
    if label > ClassLabel.Monotone:
        w = monotone_witness(g)
        if w is not None:
            rep["monotone_witness"] = w.report()
    _emit(rep, a.format, out)


def cmd_count(a, out):
    from .permanent import permanent
    g = _graph(a.input)
    t = time.perf_counter()
    value = permanent(g, a.method)
    _emit({"method": a.method, "permanent": str(value),
           "seconds": round(time.perf_counter() - t, 6)}, a.format, out)


def cmd_sample(a, out):
    from .chain import make_rng, run
    from .permanent import chain_order, chain_sample_graph, convex_dp, convex_dp_sample
    from .recognizers import check_convex
    g = _graph(a.input)
    rng = make_rng(a.seed)
    method = a.method if a.method != "auto" else "convex-dp"
    if method == "chain":
        order = chain_order(g)
        draw = lambda: chain_sample_graph(g, rng, order)
    elif method == "convex-dp":
        p = check_convex(g)
        if p is None:
            from .errors import NotConvexPresentation
            raise NotConvexPresentation("no column order makes every row an interval")
        tables = convex_dp(g, p, retain=True)
        draw = lambda: convex_dp_sample(g, tables, rng, p)
    elif method == "switch":
        start = _first_matching(g)
        draw = lambda: run(g, start, a.tmax, rng)
    else:
        raise SwitchMixError(f"method {method} cannot sample", method=method)
    rows = [draw().pi for _ in range(a.count)]
    if a.format == "json":
        _emit({"method": method, "seed": a.seed,
               "samples": [[c + 1 for c in pi] for pi in rows]}, "json", out)
    else:
        for pi in rows:
            out.write(" ".join(str(c + 1) for c in pi) + "\n")


def cmd_run(a, out):
    from .chain import make_rng, run
    g = _graph(a.input)
    start = _perm(a.start, g.n) if a.start else _first_matching(g)
    m = run(g, start, a.tmax, make_rng(a.seed))
    line = " ".join(str(c + 1) for c in m.pi)
    if a.format == "json":
        _emit({"seed": a.seed, "steps": a.tmax, "matching": line}, "json", out)
    else:
        out.write(line + "\n")


def cmd_mix(a, out):
    from .chain import build_transition_graph, exact_mixing
    g = _graph(a.input)
    tg = build_transition_graph(g)
    rep = exact_mixing(tg, a.eps, a.tmax)
    if a.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "delta"])
        for t, d in rep.tv_curve:
            w.writerow([t, repr(d)])
    else:
        _emit({"states": tg.size, "gap": rep.spectral_gap,
               "tmix": {repr(e): t for e, t in rep.t_mix.items()}}, a.format, out)


def cmd_canon(a, out):
    from .canonical import build_canonical_path, decompose_cycles
    from .permanent import enumerate_matchings
    from .graph import PerfectMatching
    g = _graph(a.input)
    if a.x and a.y:
        x, y = _perm(a.x, g.n), _perm(a.y, g.n)
    else:
        om = enumerate_matchings(g, cap=max(g.n, 12))
        if not om:
            raise NoPerfectMatching("graph has no perfect matching")
        x = _perm(a.x, g.n) if a.x else PerfectMatching(om[0])
        y = _perm(a.y, g.n) if a.y else PerfectMatching(om[-1])
    p = build_canonical_path(g, x, y)
    cycles, _ = decompose_cycles(x, y)
    summary = {"cycles": len(cycles), "length": len(p), "invariant_ok": p.invariant_ok,
               "transitory": sum(p.transitory)}
    if a.format == "json":
        summary["moves"] = [[m.i + 1, m.j + 1] for m in p.moves]
        _emit(summary, "json", out)
    else:
        for m in p.moves:
            out.write(m.report() + "\n")
        out.write(json.dumps(summary, sort_keys=True) + "\n")


def cmd_congestion(a, out):
    from .canonical import congestion
    g = _graph(a.input)
    r = congestion(g, threads=a.threads)
    _emit({"n": r.n, "omega": r.omega, "rho": float(r.rho), "rho_exact": str(r.rho),
           "bound_4n6": r.bound_4n6, "max_load": r.max_load,
           "bound_8n2_omega": r.bound_8n2_omega, "max_length": r.max_length,
           "within_bounds": r.ok()}, a.format, out)


def _heights(text: str):
    vals = []
    body = "\n".join(ln for ln in text.splitlines() if not ln.lstrip().startswith("#"))
    for tok in body.replace(",", " ").split():
        vals.append(int(tok) if tok.lstrip("-").isdigit() else float(tok))
    return vals


def cmd_climb(a, out):
    from .climbing import build_range, build_range_graph, climb_csv_rows, vertex_name
    r = build_range(_heights(_read(a.input)))
    if a.format == "json":
        rg = build_range_graph(r)
        _emit({"n": r.n, "vertices": len(rg.vertices),
               "components": sorted(len(c) for c in rg.components()),
               "path": [vertex_name(v) for v in rg.path()]}, "json", out)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["event", "ax", "ay", "bx", "by"])
    for row in climb_csv_rows(r):
        w.writerow(row)


def cmd_gen(a, out):
    from .graph import format_matrix_text
    from . import generators as G
    fam = a.family
    p = a.params
    if fam == "random":
        if len(p) < 2:
            raise SwitchMixError("random needs LABEL N", family=fam)
        g = G.gen_random(p[0], int(p[1]), seed=a.seed,
                         density=float(p[2]) if len(p) > 2 else 0.5)
        head = f"random {p[0]} n={p[1]} seed={a.seed}"
    elif fam == "ladder":
        g, head = G.gen_ladder(int(p[0])), f"ladder n={p[0]}"
    elif fam == "gk":
        g, head = G.gen_Gk(int(p[0])), f"gk k={p[0]}"
    elif fam == "chain":
        g, head = G.gen_chain([int(t) for t in p]), "chain a=" + ",".join(p)
    elif fam == "lower-triangular":
        g, head = G.gen_lower_triangular(int(p[0])), f"lower-triangular n={p[0]}"
    elif fam == "dgh":
        g, head = G.gen_dgh_6cycle(), "dgh 6-cycle"
    elif fam == "staircase5":
        g, head = G.gen_monotone_5(), "staircase5"
    elif fam == "lambda":
        from .climbing import gen_lambda
        r = gen_lambda(int(p[0]))
        out.write(f"# lambda k={p[0]}\n" + "\n".join(str(h) for h in r.heights) + "\n")
        return
    else:
        raise SwitchMixError(f"unknown family {fam}", family=fam)
    out.write(format_matrix_text(g, [head]))


def cmd_bench(a, out):
    from .chain import make_rng, run
    from .permanent import chain_order, chain_sample_graph, convex_dp, convex_dp_sample
    from .recognizers import check_chain, check_convex
    g = _graph(a.input)
    rng = make_rng(a.seed)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["method", "n", "seconds_per_sample"])
    reps = a.count

    def timed(fn):
        t = time.perf_counter()
        for _ in range(reps):
            fn()
        return (time.perf_counter() - t) / reps

    if check_chain(g) is not None:
        order = chain_order(g)
        w.writerow(["chain", g.n, f"{timed(lambda: chain_sample_graph(g, rng, order)):.3e}"])
    p = check_convex(g)
    if p is not None:
        tables = convex_dp(g, p, retain=True)
        w.writerow(["convex-dp", g.n, f"{timed(lambda: convex_dp_sample(g, tables, rng, p)):.3e}"])
    start = _first_matching(g)
    w.writerow(["switch", g.n, f"{timed(lambda: run(g, start, a.tmax, rng)):.3e}"])


# parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--eps", type=_eps, default=[0.25])
    common.add_argument("--method", choices=METHODS + ("switch",), default="auto")
    common.add_argument("--tmax", type=int, default=None)

    ap = argparse.ArgumentParser(prog="switchmix", description="Perfect matchings and the switch chain.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, helptext, inp=True):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if inp:
            sp.add_argument("input", help="matrix file, or '-' for stdin")
        sp.set_defaults(fn=fn)
        return sp

    add("recognize", cmd_recognize, "classify a graph")
    add("count", cmd_count, "count perfect matchings")
    sp = add("sample", cmd_sample, "draw uniform perfect matchings")
    sp.add_argument("--count", type=int, default=1)
    sp = add("run", cmd_run, "run the switch chain")
    sp.add_argument("--start", help="starting matching as 1-based columns, e.g. 2,1,3")
    add("mix", cmd_mix, "exact spectral gap and mixing times")
    sp = add("canon", cmd_canon, "canonical switch path between two matchings")
    sp.add_argument("--x", help="first matching (1-based columns)")
    sp.add_argument("--y", help="second matching (1-based columns)")
    add("congestion", cmd_congestion, "exact congestion of the canonical paths")
    add("climb", cmd_climb, "mountain climbing on a list of heights")
    sp = add("gen", cmd_gen, "generate an instance", inp=False)
    sp.add_argument("family", choices=("random", "ladder", "gk", "chain", "lower-triangular",
                                       "dgh", "staircase5", "lambda"))
    sp.add_argument("params", nargs="*")
    sp = add("bench", cmd_bench, "time the samplers on one instance")
    sp.add_argument("--count", type=int, default=100)
    return ap


_TMAX_DEFAULT = {"run": 10_000, "sample": 10_000, "bench": 1_000, "mix": 1_000_000}


def main(argv=None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    if a.tmax is None:
        a.tmax = _TMAX_DEFAULT.get(a.cmd, 10_000)
    if a.threads < 1:
        ap.error("--threads must be at least 1")
    out = sys.stdout
    try:
        a.fn(a, out)
    except SwitchMixError as e:
        stream = out if a.format == "json" else sys.stderr
        stream.write(json.dumps(e.to_dict(), sort_keys=True, default=str) + "\n")
        return 1
    except (OSError, ValueError) as e:
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
