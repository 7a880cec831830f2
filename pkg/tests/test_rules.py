from itertools import permutations

import numpy as np
import pytest

from conftest import complete_bipartite, graph_from_edges
from core.hypercore import Hypergraph, Morphism, Palette, random_hypergraph, restrict
from services.catalog import get_property
from services.properties import obeys
from services.rules import (
    EntailmentLimitError,
    apply_rule,
    entailment_count,
    get_builtin_rule,
    materialize,
    modification_map,
    recolor_tuples,
    rule_bipartite_delete,
    rule_bipartite_majority,
    rule_constant,
    rule_from_table,
    rule_identity_copy,
    rule_random_table,
    verify_entailment_upto,
)


def test_identity_copy_equals_restriction():
    G = random_hypergraph(Palette.leq3(), 7, seed=1)
    rule = rule_identity_copy(Palette.leq3(), 2)
    assert apply_rule(rule, G, Morphism([4, 1], 7)) == restrict(G, [0, 2, 3, 5, 6])


def test_constant_rule_output():
    G = random_hypergraph(Palette.graph(), 6, seed=2)
    out = apply_rule(rule_constant(Palette.graph(), 0, 1), G, Morphism([3], 6))
    assert out == Hypergraph(Palette.graph(), 5)


def test_scalar_f_agrees_with_kernel():
    rule = rule_bipartite_delete()
    H = graph_from_edges(3, [(1, 2), (2, 0)])
    assert rule.f(2, H) == 1
    H2 = graph_from_edges(3, [(1, 2), (2, 0), (1, 0)])
    assert rule.f(2, H2) == 0
    with pytest.raises(ValueError):
        rule.f(2, graph_from_edges(2, []))


def test_bipartite_delete_by_hand():
    # 훈련 정점 0; 0을 가리키는 정점이 2, 3 이고 1은 아님
    G = graph_from_edges(4, [(1, 2), (2, 0), (3, 0), (1, 3), (2, 3)])
    out = modification_map(rule_bipartite_delete(), G)
    assert out.adjacency().tolist() == [[0, 1, 1], [0, 0, 0], [0, 0, 0]]


def test_apply_rule_moves_anchors_first():
    G = random_hypergraph(Palette.graph(), 6, seed=3)
    rule = rule_bipartite_delete()
    phi = Morphism([2], 6)
    order = [2, 0, 1, 3, 4, 5]
    relabeled = Hypergraph.from_adjacency(Palette.graph(), G.adjacency()[np.ix_(order, order)])
    assert apply_rule(rule, G, phi) == modification_map(rule, relabeled)


def test_recolor_tuples_matches_full_application():
    G = random_hypergraph(Palette.graph(), 7, seed=4)
    rule = rule_random_table(Palette.graph(), 2, seed=1)
    phi = Morphism([5, 0], 7)
    full = apply_rule(rule, G, phi)
    tuples = np.array([(0, 1), (3, 2), (4, 0)])
    assert np.array_equal(recolor_tuples(rule, G, phi, 2, tuples), full.colors(2, tuples))


def test_apply_rule_rejects_wrong_domain():
    G = random_hypergraph(Palette.graph(), 5, seed=0)
    with pytest.raises(ValueError):
        apply_rule(rule_bipartite_delete(), G, Morphism([0, 1], 5))


def test_majority_reproduces_exact_complete_bipartite():
    G = complete_bipartite(range(5), range(5, 9), 9)
    rule = rule_bipartite_majority(4)
    phi = Morphism([0, 1, 5, 6], 9)
    out = apply_rule(rule, G, phi)
    assert out == restrict(G, [2, 3, 4, 7, 8])
    assert out.is_compact(2)
    assert obeys(get_property("complete-bipartite"), out)


def test_majority_invariant_under_anchor_order():
    G = complete_bipartite(range(5), range(5, 9), 9)
    rule = rule_bipartite_majority(4)
    anchors = [0, 1, 5, 6]
    reference = apply_rule(rule, G, Morphism(anchors, 9))
    for perm in permutations(anchors):
        assert apply_rule(rule, G, Morphism(perm, 9)) == reference


def test_majority_output_is_always_complete_bipartite():
    P = get_property("complete-bipartite")
    rule = rule_bipartite_majority(5)
    for seed in range(5):
        G = random_hypergraph(Palette.graph(), 12, seed=seed, undirected=True)
        assert obeys(P, apply_rule(rule, G, Morphism([0, 3, 6, 9, 11], 12)))


def test_random_table_is_deterministic_per_seed():
    G = random_hypergraph(Palette.graph(), 6, seed=5)
    phi = Morphism([1, 4], 6)
    first = apply_rule(rule_random_table(Palette.graph(), 2, seed=7), G, phi)
    assert apply_rule(rule_random_table(Palette.graph(), 2, seed=7), G, phi) == first


def test_materialized_table_reproduces_rule():
    rule = rule_bipartite_delete()
    table = materialize(rule)
    assert len(table[2]) == 2 ** 6
    clone = rule_from_table(Palette.graph(), 1, table, name="copy")
    G = random_hypergraph(Palette.graph(), 6, seed=6)
    phi = Morphism([3], 6)
    assert apply_rule(clone, G, phi) == apply_rule(rule, G, phi)


def test_identity_copy_does_not_entail_triangle_free():
    rule = rule_identity_copy(Palette.graph())
    found = verify_entailment_upto(rule, get_property("triangle-free"), 3)
    assert found is not None
    assert found.n == 3
    assert not obeys(get_property("triangle-free"), found.output)


def test_constant_rule_entails_triangle_free():
    rule = rule_constant(Palette.graph(), 0, 1)
    assert verify_entailment_upto(rule, get_property("triangle-free"), 3) is None


def test_bipartite_delete_entails_bipartite_small():
    rule = rule_bipartite_delete()
    assert verify_entailment_upto(rule, get_property("bipartite"), 3) is None


@pytest.mark.slow
def test_bipartite_delete_entails_bipartite_up_to_four():
    rule = rule_bipartite_delete()
    assert verify_entailment_upto(rule, get_property("bipartite"), 4) is None


def test_mc_entailment_finds_counterexample():
    rule = rule_identity_copy(Palette.graph())
    found = verify_entailment_upto(rule, get_property("triangle-free"), 3, mode="mc", samples=2000, seed=3)
    assert found is not None and found.n == 3


def test_entailment_ceiling():
    rule = rule_bipartite_delete()
    count = entailment_count(rule, 3)
    assert count == 1 + 2 ** 2 + 2 ** 6 + 2 ** 12
    with pytest.raises(EntailmentLimitError):
        verify_entailment_upto(rule, get_property("bipartite"), 3, ceiling=count - 1)


def test_builtin_registry():
    assert get_builtin_rule("unknown") is None
    assert get_builtin_rule("anchor-vote", a_size=3).a_size == 3
    assert get_builtin_rule("identity-copy", palette=Palette.leq3()).palette == Palette.leq3()
    with pytest.raises(ValueError):
        modification_map(get_builtin_rule("anchor-vote", a_size=5), random_hypergraph(Palette.graph(), 3))
