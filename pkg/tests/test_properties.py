from itertools import combinations

import numpy as np
import pytest
from pydantic import ValidationError

from conftest import graph_from_edges
from core.hypercore import Hypergraph, Morphism, Palette, meet, random_hypergraph
from services.catalog import get_property, triangle_family
from services.properties import (
    Property,
    TesterParams,
    audit_hereditary,
    check_meet_closed,
    distance,
    find_embedding,
    find_monochromatic,
    local_satisfaction,
    obeys,
    ramsey_scan,
    run_tester,
    satisfaction_over,
)


def _has_edge(G: Hypergraph) -> bool:
    return G.n < 2 or bool(G.adjacency().any())


def test_property_requires_exactly_one_definition():
    with pytest.raises(ValueError):
        Property("none", Palette.graph())
    with pytest.raises(ValueError):
        Property("both", Palette.graph(), forbidden=[], predicate=_has_edge)


def test_tester_params_validation():
    with pytest.raises(ValidationError):
        TesterParams(N=0)
    assert TesterParams(N=3).sample_count == 1000


def test_find_embedding_is_lexicographically_least():
    F = graph_from_edges(2, [(0, 1)])
    G = graph_from_edges(3, [(2, 0)])
    assert find_embedding(F, G) == Morphism([2, 0], 3)
    assert find_embedding(F, graph_from_edges(3, [])) is None


def test_forbidden_family_matches_predicate(directed_triangle):
    family = get_property("triangle-free-family")
    predicate = get_property("triangle-free")
    assert len(triangle_family()) == 27
    for seed in range(20):
        G = random_hypergraph(Palette.graph(), 5, seed=seed)
        assert obeys(family, G) == obeys(predicate, G)
    assert not obeys(family, directed_triangle)


def test_obeying_graph_has_full_local_satisfaction():
    P = get_property("triangle-free")
    G = graph_from_edges(8, [(i, i + 1) for i in range(7)])
    assert obeys(P, G)
    assert local_satisfaction(P, G, 4).value == 1.0
    assert local_satisfaction(P, G, 4, mode="mc", sample_count=300, seed=2).value == 1.0


def test_exact_fraction_counts_subsets():
    P = get_property("triangle-free")
    G = graph_from_edges(5, [(0, 1), (1, 2), (0, 2)], directed=False)
    estimate = local_satisfaction(P, G, 3)
    assert estimate.value == pytest.approx(0.9)
    assert estimate.samples == 10
    assert estimate.stderr == 0.0


def test_mc_mode_is_reproducible_and_close_to_exact():
    P = get_property("triangle-free")
    G = random_hypergraph(Palette.graph(), 12, seed=9, undirected=True)
    exact = local_satisfaction(P, G, 4).value
    first = local_satisfaction(P, G, 4, mode="mc", sample_count=4000, seed=5)
    second = local_satisfaction(P, G, 4, mode="mc", sample_count=4000, seed=5)
    assert first == second
    assert abs(first.value - exact) <= 5 * first.stderr + 1e-9


def test_satisfaction_over_given_subsets():
    P = get_property("triangle-free")
    G = graph_from_edges(5, [(0, 1), (1, 2), (0, 2)], directed=False)
    estimate = satisfaction_over(P, G, [[0, 1, 2], [2, 3, 4], [4, 3, 0]])
    assert estimate.value == pytest.approx(2 / 3)


def test_local_satisfaction_rejects_large_sample_size():
    P = get_property("triangle-free")
    with pytest.raises(ValueError):
        local_satisfaction(P, graph_from_edges(3, []), 4)
    with pytest.raises(ValueError):
        local_satisfaction(P, graph_from_edges(3, []), 2, mode="other")
    for N in (0, -1):
        with pytest.raises(ValueError, match="1 이상"):
            local_satisfaction(P, graph_from_edges(3, []), N)


def test_run_tester_report_fields():
    P = get_property("triangle-free")
    G = graph_from_edges(5, [(0, 1), (1, 2), (0, 2)], directed=False)
    report = run_tester(P, G, TesterParams(N=3, delta=0.2))
    assert report["fraction"] == pytest.approx(0.9)
    assert report["locally_obeys"] is True
    assert list(report) == ["property", "n", "N", "mode", "seed", "samples", "fraction", "stderr",
                            "locally_obeys"]


def test_distance_counts_disagreeing_pairs():
    G = graph_from_edges(4, [(0, 1), (2, 3)])
    H = graph_from_edges(4, [(0, 1), (2, 3), (3, 1)])
    assert distance(G, G) == 0.0
    assert distance(G, H) == pytest.approx(1 / 6)
    assert distance(graph_from_edges(1, []), graph_from_edges(1, [])) == 0.0


def test_distance_on_three_uniform_triples():
    palette = Palette.uniform(3)
    G = random_hypergraph(palette, 6, seed=3, undirected=True)
    H = G.copy()
    H.set_subset_colors(3, [[0, 1, 2]], [1 - G.get((0, 1, 2))])
    assert distance(G, H) == pytest.approx(1 / 20)


def test_find_monochromatic_in_complete_graph():
    K6 = graph_from_edges(6, list(combinations(range(6), 2)), directed=False)
    assert find_monochromatic(K6, 3) == (0, 1, 2)


def test_pentagon_has_no_monochromatic_triangle(pentagon):
    assert find_monochromatic(pentagon, 3) is None
    with pytest.raises(ValueError):
        find_monochromatic(graph_from_edges(3, [(0, 1)]), 3)


def test_ramsey_scan():
    assert ramsey_scan(6, 3) is None
    coloring = ramsey_scan(5, 3)
    assert coloring is not None
    assert find_monochromatic(coloring, 3) is None
    with pytest.raises(ValueError):
        ramsey_scan(10, 3)


def test_meet_closure_counterexample():
    P = Property("has-edge", Palette.graph(), predicate=_has_edge)
    found = check_meet_closed(P, 2)
    assert found is not None
    G, H = found
    assert obeys(P, G) and obeys(P, H)
    assert not obeys(P, meet(G, H))


def test_triangle_free_is_meet_closed():
    assert check_meet_closed(get_property("triangle-free"), 3) is None


def test_audit_finds_non_hereditary_predicate():
    P = Property("has-edge", Palette.graph(), predicate=_has_edge)
    G = graph_from_edges(3, [(0, 1)])
    W = audit_hereditary(P, G, samples=200, seed=1)
    assert W is not None
    assert not obeys(P, Hypergraph.from_adjacency(Palette.graph(), G.adjacency()[np.ix_(W, W)]))
    assert audit_hereditary(get_property("triangle-free"), G) is None


def test_results_do_not_depend_on_worker_count(set_workers):
    P = get_property("triangle-free")
    G = random_hypergraph(Palette.graph(), 14, seed=11, undirected=True)
    results = []
    for workers in (1, 4):
        set_workers(workers)
        results.append((local_satisfaction(P, G, 4),
                        local_satisfaction(P, G, 4, mode="mc", sample_count=10_000, seed=3)))
    assert results[0] == results[1]
