# conftest.py
"""테스트 공용 픽스처와 작은 그래프 생성 도우미"""

import numpy as np
import pytest

from core.hypercore import Hypergraph, Palette


def graph_from_edges(n: int, edges, directed: bool = True) -> Hypergraph:
    """간선 목록으로 방향(또는 무방향) 그래프를 만듭니다."""
    A = np.zeros((n, n), dtype=np.int64)
    for v, w in edges:
        A[v, w] = 1
        if not directed:
            A[w, v] = 1
    return Hypergraph.from_adjacency(Palette.graph(), A)


def complete_bipartite(left, right, n: int) -> Hypergraph:
    A = np.zeros((n, n), dtype=np.int64)
    for v in left:
        for w in right:
            A[v, w] = A[w, v] = 1
    return Hypergraph.from_adjacency(Palette.graph(), A)


@pytest.fixture
def graph_palette():
    return Palette.graph()


@pytest.fixture
def pentagon():
    """단색 삼각형이 없는 K_5의 2-색칠 (오각형 + 오각별)"""
    return graph_from_edges(5, [(i, (i + 1) % 5) for i in range(5)], directed=False)


@pytest.fixture
def directed_triangle():
    return graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def set_workers(monkeypatch):
    """HEDRA_THREADS를 가져다 쓰는 모든 모듈의 워커 수를 바꿉니다."""

    def apply(count: int):
        for module in ("core.utils", "services.properties", "services.obstructions"):
            monkeypatch.setattr(f"{module}.HEDRA_THREADS", count)

    return apply
