import pytest
from hypothesis import given, strategies as st

from switchmix import (BipartiteGraph, PerfectMatching, degree_stats, diagonal_matching_exists,
                       find_perfect_matching, format_matrix_text, induced_subgraph,
                       parse_matrix_text, validate_matching)
from switchmix.errors import EmptySelection, IsolatedVertex, RaggedInput, UnbalancedGraph

from conftest import ARMCHAIR, CHAIN5, CONVEX4, graph, nx_has_perfect_matching


def square_matrices(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.booleans(), min_size=n, max_size=n), min_size=n, max_size=n))


def to_rows(bits):
    return ["".join("1" if b else "0" for b in row) for row in bits]


def test_from_matrix_roundtrip():
    g = graph(CONVEX4)
    assert (g.m, g.n) == (4, 4)
    assert g.to_matrix() == CONVEX4
    assert g.num_edges() == 10
    assert g.neighbors(0) == [2, 3]
    assert g.col_neighbors(0) == [1, 3]


def test_ragged_rows_rejected():
    with pytest.raises(RaggedInput):
        graph(["101", "11"])
    with pytest.raises(RaggedInput):
        graph(["1x"])


def test_isolated_vertex_rejected_unless_allowed():
    with pytest.raises(IsolatedVertex):
        graph(["10", "10"])
    g = BipartiteGraph.from_matrix(["10", "10"], allow_isolated=True)
    assert g.col_degree(1) == 0


def test_validate_matching_known_permutation():
    g = graph(CONVEX4)
    # rows 1..4 matched to columns 3',2',4',1'
    assert validate_matching(g, PerfectMatching((2, 1, 3, 0)))
    assert not validate_matching(g, PerfectMatching((0, 1, 2, 3)))
    assert not validate_matching(g, PerfectMatching((2, 2, 3, 0)))


def test_validate_matching_needs_balanced_graph():
    g = graph(["110", "011"])
    with pytest.raises(UnbalancedGraph):
        validate_matching(g, (0, 1))


def test_find_perfect_matching_none_on_deficient_graph():
    # rows 1 and 2 share the single column 1'
    g = graph(["100", "100", "111"])
    assert find_perfect_matching(g) is None


@given(square_matrices())
def test_find_perfect_matching_agrees_with_networkx(bits):
    g = BipartiteGraph.from_matrix(to_rows(bits), allow_isolated=True)
    m = find_perfect_matching(g)
    assert (m is not None) == nx_has_perfect_matching(g)
    if m is not None:
        assert validate_matching(g, m)


def test_degree_stats_chain_example():
    assert degree_stats(graph(CHAIN5)) == (5, 5)
    assert degree_stats(graph(CONVEX4)) == (4, 3)


def test_diagonal_matching():
    assert diagonal_matching_exists(graph(CHAIN5))
    assert not diagonal_matching_exists(graph(CONVEX4))


def test_induced_subgraph_armchair_core():
    g = graph(ARMCHAIR)
    h = induced_subgraph(g, {0, 1, 2, 3}, {2, 3, 4})
    assert h.to_matrix() == ["010", "111", "110", "100"]
    with pytest.raises(EmptySelection):
        induced_subgraph(g, set(), {1})


@given(square_matrices())
def test_text_format_roundtrip(bits):
    g = BipartiteGraph.from_matrix(to_rows(bits), allow_isolated=True)
    text = format_matrix_text(g, comments=["family test"])
    assert text.startswith("# family test\n")
    assert parse_matrix_text(text, allow_isolated=True) == g


def test_parse_rejects_bad_header_and_row_count():
    with pytest.raises(RaggedInput):
        parse_matrix_text("2\n11\n11\n")
    with pytest.raises(RaggedInput):
        parse_matrix_text("3 2\n11\n11\n")
