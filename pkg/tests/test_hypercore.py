from itertools import combinations, permutations
from math import comb

import numpy as np
import pytest

from core.hypercore import (
    Hypergraph,
    Morphism,
    Palette,
    enumerate_injections,
    is_partite_edge,
    meet,
    partite_equivalent,
    pullback,
    random_hypergraph,
    restrict,
    symmetrize,
)
from core.utils import (
    colex_rank,
    colex_unrank,
    format_report,
    make_rng,
    mixed_radix_digits,
    perm_rank,
    permutation_table,
    sample_injections,
)


# --- 조합론 / 난수 도구 ---

def test_colex_rank_matches_colex_order():
    subsets = sorted(combinations(range(7), 3), key=lambda s: s[::-1])
    assert colex_rank(np.array(subsets)).tolist() == list(range(comb(7, 3)))


def test_colex_unrank_inverts_rank():
    ranks = np.arange(comb(9, 4))
    subsets = colex_unrank(ranks, 4, 9)
    assert (np.diff(subsets, axis=1) > 0).all()
    assert np.array_equal(colex_rank(subsets), ranks)


def test_perm_rank_matches_lexicographic_table():
    table = permutation_table(4)
    assert np.array_equal(perm_rank(table), np.arange(24))
    assert [tuple(p) for p in table] == list(permutations(range(4)))


def test_mixed_radix_last_digit_fastest():
    digits = mixed_radix_digits(np.arange(6), [2, 3])
    assert digits.tolist() == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2]]


def test_make_rng_streams_are_reproducible_and_labelled():
    a = make_rng(7, "mc", 0).integers(0, 1 << 30, 5)
    b = make_rng(7, "mc", 0).integers(0, 1 << 30, 5)
    c = make_rng(7, "mc", 1).integers(0, 1 << 30, 5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ValueError):
        make_rng(-1)


def test_sample_injections_distinct_and_in_range():
    sample = sample_injections(make_rng(3, "test"), 10, 4, 500)
    assert sample.shape == (500, 4)
    assert all(len(set(row)) == 4 for row in sample.tolist())
    assert sample.min() >= 0 and sample.max() < 10
    with pytest.raises(ValueError):
        sample_injections(make_rng(3), 3, 4, 1)


def test_format_report_renders_values():
    text = format_report({"found": None, "ok": True, "fraction": 0.5, "witness": [3, 1], "n": 4})
    assert text == "found=none\nok=true\nfraction=0.5\nwitness=3 1\nn=4"


def test_format_report_unwraps_numpy_values():
    fields = {"n": np.int64(7), "ok": np.bool_(False), "fraction": np.float64(0.25),
              "order": np.array([2, 0, 1]), "pair": (np.int32(4), 5)}
    text = format_report(fields)
    assert text == "n=7\nok=false\nfraction=0.25\norder=2 0 1\npair=4 5"


# --- 팔레트 / 사상 ---

def test_palette_meet_tables():
    palette = Palette((1, 3), orders={1: [(0, 1), (0, 2)]})
    assert palette.is_ordered
    assert palette.meet_table(1)[1, 2] == 0
    assert palette.meet_table(1)[1, 1] == 1
    assert Palette.graph().meet_table(2).tolist() == [[0, 0], [0, 1]]
    assert not Palette((1, 3)).is_ordered


def test_palette_rejects_cycles_and_missing_meets():
    with pytest.raises(ValueError):
        Palette((1, 2), orders={1: [(0, 1), (1, 0)]})
    with pytest.raises(ValueError):
        Palette((1, 4), orders={1: [(0, 2), (1, 2), (0, 3), (1, 3)]})


def test_morphism_validation_and_composition():
    with pytest.raises(ValueError):
        Morphism([1, 1], 3)
    with pytest.raises(ValueError):
        Morphism([0, 3], 3)
    phi = Morphism([3, 1, 0], 4)
    psi = Morphism([2, 0], 3)
    assert phi.compose(psi) == Morphism([0, 3], 4)


def test_enumerate_injections_lexicographic():
    assert list(enumerate_injections(2, 3)) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    assert list(enumerate_injections(4, 3)) == []


# --- 저장소 ---

def test_directed_set_and_get(graph_palette):
    G = Hypergraph(graph_palette, 4)
    G.set((2, 1), 1)
    assert G.get((2, 1)) == 1
    assert G.get((1, 2)) == 0
    assert G.adjacency()[2, 1] == 1


def test_rejects_out_of_palette_colors(graph_palette):
    G = Hypergraph(graph_palette, 3)
    with pytest.raises(ValueError):
        G.set((0, 1), 2)
    with pytest.raises(ValueError):
        G.set((0, 0), 1)


def test_frozen_graph_is_read_only(graph_palette):
    G = Hypergraph(graph_palette, 3).freeze()
    with pytest.raises(ValueError):
        G.set((0, 1), 1)


def test_adjacency_round_trip(graph_palette):
    rng = np.random.default_rng(0)
    A = rng.integers(0, 2, size=(7, 7))
    np.fill_diagonal(A, 0)
    G = Hypergraph.from_adjacency(graph_palette, A)
    assert np.array_equal(G.adjacency(), A)


def test_symmetric_adjacency_is_stored_compact(graph_palette):
    A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    G = Hypergraph.from_adjacency(graph_palette, A)
    assert G.is_compact(2)
    assert G.is_undirected()
    assert G.get((1, 0)) == G.get((0, 1)) == 1
    assert G.compacted() == G.expanded()


def test_digits_round_trip():
    palette = Palette((2, 3, 2, 2))
    G = random_hypergraph(palette, 5, seed=4)
    assert Hypergraph.from_digits(palette, 5, G.digits()) == G
    assert G.key() == G.copy().key()


# --- 연산 ---

def test_pullback_definition():
    palette = Palette((1, 2, 3, 2))
    G = random_hypergraph(palette, 6, seed=1)
    phi = Morphism([4, 0, 5, 2], 6)
    H = pullback(G, phi)
    for j in (1, 2, 3):
        for t in permutations(range(4), j):
            assert H.get(t) == G.get(tuple(phi.image[i] for i in t))


def test_pullback_is_functorial():
    palette = Palette((1, 2, 2, 2))
    G = random_hypergraph(palette, 7, seed=2)
    phi = Morphism([6, 2, 0, 4, 1], 7)
    psi = Morphism([3, 0, 4], 5)
    assert pullback(pullback(G, phi), psi) == pullback(G, phi.compose(psi))


def test_restrict_nests():
    G = random_hypergraph(Palette.leq3(), 8, seed=3)
    W = [1, 2, 4, 6, 7]
    assert restrict(restrict(G, W), [0, 3, 4]) == restrict(G, [1, 6, 7])


def test_symmetrize_uses_sorted_tuple_color(graph_palette):
    G = random_hypergraph(graph_palette, 6, seed=5)
    S = symmetrize(G)
    assert S.is_undirected()
    for a, b in combinations(range(6), 2):
        assert S.get((b, a)) == S.get((a, b)) == G.get((a, b))


def test_random_undirected_hypergraph():
    assert random_hypergraph(Palette.uniform(3), 6, seed=0, undirected=True).is_undirected()


def test_meet_is_pointwise_minimum_on_booleans(graph_palette):
    G = random_hypergraph(graph_palette, 6, seed=6)
    H = random_hypergraph(graph_palette, 6, seed=7)
    assert np.array_equal(meet(G, H).adjacency(), np.minimum(G.adjacency(), H.adjacency()))


def test_meet_requires_ordered_palette():
    palette = Palette((1, 3))
    G = random_hypergraph(palette, 3, seed=0)
    with pytest.raises(ValueError):
        meet(G, G)


def test_partite_equivalence_ignores_non_partite_edges():
    palette = Palette.leq3()
    G = random_hypergraph(palette, 6, seed=8)
    G.set_colors(1, [[v] for v in range(6)], [0, 0, 0, 1, 1, 1])
    H = G.copy()
    first = G.level1
    same = next((a, b) for a, b in combinations(range(6), 2) if first[a] == first[b])
    cross = next((a, b) for a, b in combinations(range(6), 2) if first[a] != first[b])
    assert not is_partite_edge(G, same)
    assert is_partite_edge(G, cross)

    H.set(same, 1 - G.get(same))
    assert partite_equivalent(G, H)
    H.set(cross, 1 - G.get(cross))
    assert not partite_equivalent(G, H)
