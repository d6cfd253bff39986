import pytest
from hypothesis import given, strategies as st

from switchmix import induced_subgraph
from switchmix.chain import build_transition_graph, ergodicity_check
from switchmix.errors import GenerationFailed, NotMonotone
from switchmix.generators import (gen_Gk, gen_chain, gen_dgh_6cycle, gen_ladder,
                                  gen_lower_triangular, gen_monotone_5, gen_random,
                                  has_spanning_ladder)
from switchmix.permanent import permanent, permanent_ryser
from switchmix.recognizers import ClassLabel, check_chain, check_monotone, classify

from conftest import ARMCHAIR, brute_hamiltonian, brute_permanent, graph

G4 = ["0001100", "0001110", "0001111", "1111111", "1111000", "0111000", "0011000"]


def test_dgh_cycle():
    g = gen_dgh_6cycle()
    assert g.to_matrix() == ["011", "101", "110"]
    assert permanent(g) == 2
    assert not ergodicity_check(build_transition_graph(g))[0]


def test_g4_matrix():
    assert gen_Gk(4).to_matrix() == G4
    with pytest.raises(ValueError):
        gen_Gk(1)


def test_gk_nested():
    # G_3 sits inside G_4 on rows 1,2,4,6,7 (1-based) and columns 2..6
    h = induced_subgraph(gen_Gk(4), {0, 1, 3, 5, 6}, {1, 2, 3, 4, 5})
    assert h.to_matrix() == gen_Gk(3).to_matrix()
    for k in range(3, 7):
        n = 2 * k - 1
        g, small = gen_Gk(k), gen_Gk(k - 1)
        # drop rows k-1 and k+1 (1-based) and the two outer columns
        rows = [r for r in range(n) if r not in (k - 2, k)]
        assert induced_subgraph(g, rows, range(1, n - 1)).to_matrix() == small.to_matrix()


def test_ladder():
    for n in range(3, 9):
        g = gen_ladder(n)
        assert classify(g) == ClassLabel.Monotone
        assert has_spanning_ladder(g)
    # Fibonacci numbers of matchings
    assert [permanent(gen_ladder(n)) for n in range(2, 8)] == [2, 3, 5, 8, 13, 21]


def test_lower_triangular():
    for n in range(3, 11):
        g = gen_lower_triangular(n)
        assert permanent(g) == 1
        assert classify(g) == ClassLabel.Chain


def test_lower_triangular_near_perfect_matchings():
    # drop row 1 and column n'; the remaining chain graph has 2^(n-2) matchings
    for n in range(4, 11):
        g = gen_lower_triangular(n)
        h = induced_subgraph(g, range(1, n), range(n - 1))
        assert permanent_ryser(h) == 2 ** (n - 2)
        if n <= 8:
            assert brute_permanent(h) == 2 ** (n - 2)


def test_chain_and_staircase5():
    g = gen_chain([2, 3, 4, 5, 5])
    assert check_chain(g) is not None and permanent(g) == 16
    s = gen_monotone_5()
    assert classify(s) == ClassLabel.Monotone and permanent(s) == 10


def test_spanning_ladder_needs_monotone_presentation():
    with pytest.raises(NotMonotone):
        has_spanning_ladder(graph(ARMCHAIR))


@pytest.mark.parametrize("label", list(ClassLabel))
def test_random_instances_verified(label):
    for seed in range(300):
        n = 2 + seed % 7
        g = gen_random(label, n, seed=seed)
        assert classify(g) <= label
        assert g == gen_random(label, n, seed=seed)


def test_random_exact_label():
    g = gen_random(ClassLabel.Biconvex, 6, seed=1, exact=True)
    assert classify(g) == ClassLabel.Biconvex


def test_generation_failure():
    # a 2x2 graph with a perfect matching cannot be OtherBipartite
    with pytest.raises(GenerationFailed):
        gen_random(ClassLabel.OtherBipartite, 2, seed=0, exact=True)


@given(st.integers(0, 100_000), st.integers(2, 7), st.floats(0.2, 0.9))
def test_spanning_ladder_iff_hamiltonian(seed, n, density):
    g = gen_random(ClassLabel.Monotone, n, seed=seed, density=density)
    h = check_monotone(g).apply(g)
    assert has_spanning_ladder(h) == brute_hamiltonian(h)
