import numpy as np
import pytest

from core.hypercore import Hypergraph, Palette
from core.utils import make_rng, sample_injections
from services.catalog import get_property
from services.obstructions import CorruptionSpec, gen_corrupted_order
from services.properties import obeys
from services.repairs import gen_corrupted_bipartite, repair_bipartite, repair_total_order


# --- 전순서 복구 ---

def test_exact_order_is_reproduced():
    G0, G = gen_corrupted_order(CorruptionSpec(M=100, sigma=0.0, seed=1))
    result = repair_total_order(G, 99, seed=3)
    assert result.report["status"] == "ok"
    assert result.order == list(range(100))
    assert result.edit_fraction == 0.0
    assert result.graph == G0


def test_small_training_set_on_exact_order():
    _, G = gen_corrupted_order(CorruptionSpec(M=200, sigma=0.0, seed=2))
    result = repair_total_order(G, 10, seed=0)
    assert result.edit_fraction == 0.0
    assert result.report["leftover"] == 0
    assert sum(result.report["bucket_sizes"]) == 190


def test_noisy_training_set_asks_for_retry():
    _, G = gen_corrupted_order(CorruptionSpec(M=50, sigma=0.5, seed=3))
    result = repair_total_order(G, 20, seed=0)
    assert result.report["status"] == "retry-training"
    assert result.graph is None and result.edit_fraction is None


def test_repaired_order_is_total_and_accounted():
    _, G = gen_corrupted_order(CorruptionSpec(M=300, sigma=0.01, seed=4))
    result = next(r for r in (repair_total_order(G, 8, seed=s) for s in range(30))
                  if r.report["status"] == "ok")
    report = result.report
    assert obeys(get_property("total-order"), result.graph)
    assert sorted(result.order) == list(range(300))
    assert sum(report["bucket_sizes"]) + report["leftover"] + 8 == 300
    assert report["leftover_fraction"] == pytest.approx(report["leftover"] / 300)
    disagree = (result.graph.adjacency() != G.adjacency()).sum()
    assert result.edit_fraction == pytest.approx(disagree / (300 * 299))


def test_order_repair_validates_arguments():
    _, G = gen_corrupted_order(CorruptionSpec(M=10, sigma=0.0))
    with pytest.raises(ValueError):
        repair_total_order(G, 11)
    with pytest.raises(ValueError):
        repair_total_order(Hypergraph(Palette.leq3(), 4), 2)


# --- 완전 이분 복구 ---

def test_corrupted_bipartite_generator():
    G0, G, side = gen_corrupted_bipartite(40, 0.0, seed=1)
    assert G == G0
    assert obeys(get_property("complete-bipartite"), G0)
    A = G0.adjacency()
    assert all(A[v, w] == (side[v] != side[w]) for v in range(40) for w in range(40) if v != w)
    _, noisy, _ = gen_corrupted_bipartite(40, 0.3, seed=1)
    assert noisy.is_undirected()
    with pytest.raises(ValueError):
        gen_corrupted_bipartite(10, 1.5)


def test_exact_complete_bipartite_needs_no_edits():
    hits = 0
    for seed in range(5):
        _, G, side = gen_corrupted_bipartite(60, 0.0, seed=seed)
        anchors = sample_injections(make_rng(seed, "bipartite-repair"), 60, 10, 1)[0]
        if len(set(side[anchors].tolist())) < 2:
            continue
        repaired, edit_fraction = repair_bipartite(G, 10, seed=seed)
        assert edit_fraction == 0.0
        assert repaired.n == 50
        hits += 1
    assert hits >= 1


def test_empty_graph_stays_empty():
    G = Hypergraph.from_adjacency(Palette.graph(), np.zeros((20, 20), dtype=np.int64))
    repaired, edit_fraction = repair_bipartite(G, 5, seed=1)
    assert edit_fraction == 0.0
    assert not repaired.adjacency().any()


def test_noisy_bipartite_repair():
    P = get_property("complete-bipartite")
    good = 0
    for seed in range(5):
        _, G, _ = gen_corrupted_bipartite(200, 0.05, seed=seed)
        repaired, edit_fraction = repair_bipartite(G, 30, seed=seed)
        assert obeys(P, repaired)
        good += edit_fraction <= 0.1
    assert good >= 4
