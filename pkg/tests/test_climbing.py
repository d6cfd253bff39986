import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from switchmix.climbing import (build_range, build_range_graph, climb, climb_csv_rows, gen_lambda,
                                vertex_bound)
from switchmix.errors import BadBoundary, TooShort

from conftest import random_range

EXAMPLE_11 = (0, 2.5, 8, 5, 6, 3, 10, 4, 2, 7, 0)
LAMBDA_10 = (0, 11, 9, 13, 7, 15, 5, 17, 3, 19, 1, 20, 2, 18, 4, 16, 6, 14, 8, 12, 0)


def ranges(max_n=15):
    return st.integers(3, max_n).flatmap(
        lambda n: st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2).map(
            lambda inner: [0] + inner + [0]))


def test_example_classification():
    r = build_range(EXAMPLE_11)
    assert r.n == 11 and r.summit == 7
    assert r.peaks() == [3, 5, 7, 10]
    assert r.valleys() == [4, 6, 9]


def test_example_range_graph():
    g = build_range_graph(build_range(EXAMPLE_11))
    assert len(g.vertices) == 22
    assert sorted(len(c) for c in g.components()) == [8, 14]
    assert len(g.path()) == 14
    assert len(climb(build_range(EXAMPLE_11))) - 1 == 13


def test_single_peak():
    r = build_range((0, 1, 0))
    assert r.summit == 2 and r.peaks() == [2]
    g = build_range_graph(r)
    assert len(g.vertices) == 2
    events = climb(r)
    assert len(events) == 2
    assert events[-1].alpha == events[-1].beta == ("node", 2)


def test_tie_break_matches_explicit_perturbation():
    tied = build_range((0, 2, 2, 3, 0))
    eps = Fraction(1, 1000)
    # smaller index counts as higher
    nudged = build_range((0, 2 + 2 * eps, 2 + eps, 3, 0))
    assert tied.kinds == nudged.kinds
    assert tied.summit == nudged.summit == 4
    assert climb(tied) == climb(nudged)


def test_bad_input():
    with pytest.raises(TooShort):
        build_range((0, 0))
    with pytest.raises(BadBoundary):
        build_range((0, 1, 2))
    with pytest.raises(BadBoundary):
        build_range((1, 0, 1))


def test_lambda_ten_heights():
    assert gen_lambda(10).heights == LAMBDA_10
    r1 = gen_lambda(1)
    assert r1.n == 3 and r1.peaks() == [2]


def test_lambda_graphs_are_single_paths():
    for k in range(1, 13):
        g = build_range_graph(gen_lambda(k))
        assert len(g.components()) == 1
        assert len(g.path()) == len(g.vertices)


@given(ranges())
def test_range_graph_structure(h):
    r = build_range(h)
    g = build_range_graph(r)
    assert len(g.vertices) <= vertex_bound(r.n)
    for v in g.vertices:
        want = 1 if v in (g.start, g.finish) else 2
        assert g.degree(v) == want
    path = g.path()
    assert path[0] == g.start and path[-1] == g.finish
    # the start component is exactly the path
    comp = next(c for c in g.components() if g.start in c)
    assert sorted(comp, key=str) == sorted(path, key=str)


@given(ranges())
def test_events_at_equal_height(h):
    r = build_range(h)
    for t, ax, ay, bx, by in climb_csv_rows(r):
        assert ay == by
        assert 1 <= ax <= r.n and 1 <= bx <= r.n


@given(ranges(14), st.randoms(use_true_random=False))
def test_isomorphism_invariance(h, rnd):
    # any strictly increasing relabelling of the heights keeps the event path
    values = sorted(set(h))
    new = sorted(rnd.sample(range(1000), len(values)))
    remap = dict(zip(values, new))
    assert climb(build_range(h)) == climb(build_range([remap[v] for v in h]))


@given(st.integers(2, 8).flatmap(lambda m: st.lists(st.integers(1, 2 * m), min_size=2 * m - 2,
                                                       max_size=2 * m - 2)))
def test_event_count_within_square_bound(inner):
    # 2m nodes give at most m^2 events
    h = [0] + inner + [0]
    m = len(h) // 2
    assert len(climb(build_range(h))) - 1 <= m * m


def test_thousand_random_ranges():
    rnd = random.Random(2024)
    for _ in range(1000):
        n = rnd.randint(3, 15)
        g = build_range_graph(build_range(random_range(rnd, n)))
        assert len(g.vertices) <= vertex_bound(n)


def _crossing_count(h):
    """Event vertices counted straight from the heights (all distinct)."""
    n = len(h)
    s = max(range(1, n - 1), key=lambda i: h[i])
    count = 0
    for i in range(1, n - 1):
        slopes = range(s, n - 1) if i < s else range(0, s) if i > s else ()
        for j in slopes:
            lo, hi = sorted((h[j], h[j + 1]))
            count += lo < h[i] < hi
    return count + 2


def test_lambda_vertex_counts_from_heights():
    # this family gives k^2 vertices for even k and k^2 + 1 for odd k
    for k in range(1, 13):
        r = gen_lambda(k)
        n_vertices = len(build_range_graph(r).vertices)
        assert n_vertices == _crossing_count(list(r.heights))
        assert n_vertices == k * k + k % 2
