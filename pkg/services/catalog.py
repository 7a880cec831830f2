# services/catalog.py
"""
[이름 붙은 속성 카탈로그]
CLI와 테스트에서 이름으로 부르는 내장 속성을 모아 둡니다.
술어(predicate) 속성은 코드에서만 등록할 수 있습니다.
"""

from itertools import product

import networkx as nx
import numpy as np

from core.hypercore import Hypergraph, Palette
from .properties import Property


# ==============================================================================
# 1. 그래프(차수 2) 술어
# ==============================================================================

def _symmetric(G: Hypergraph) -> np.ndarray:
    A = G.adjacency().astype(np.int64)
    return A | A.T


def is_total_order(G: Hypergraph) -> bool:
    """각 쌍에 정확히 한 방향 간선이 있고, 점수(out-degree)가 0..n-1을 하나씩 가지면 전순서"""
    A = G.adjacency().astype(np.int64)
    off = ~np.eye(G.n, dtype=bool)
    if not ((A + A.T)[off] == 1).all():
        return False
    return np.array_equal(np.sort(A.sum(axis=1)), np.arange(G.n))


def is_complete(G: Hypergraph) -> bool:
    top = G.palette.sizes[G.order] - 1
    return bool((G.levels[G.order] == top).all())


def is_bipartite(G: Hypergraph) -> bool:
    return nx.is_bipartite(nx.from_numpy_array(_symmetric(G)))


def is_complete_bipartite(G: Hypergraph) -> bool:
    """
    무방향이고 V = X ⊔ Y (한쪽은 비어도 됨) 사이의 완전 이분 그래프인지 확인합니다.
    X = {0} ∪ (0의 비이웃), Y = 0의 이웃
    """
    if not G.is_undirected():
        return False
    if G.n <= 1:
        return True
    A = G.adjacency().astype(bool)
    right = A[0]
    left = ~right
    return (not A[np.ix_(left, left)].any()
            and not A[np.ix_(right, right)].any()
            and bool(A[np.ix_(left, right)].all()))


def is_triangle_free(G: Hypergraph) -> bool:
    """방향을 무시한 그래프에 삼각형이 없으면 True"""
    S = _symmetric(G)
    return int(((S @ S) * S).sum()) == 0


def is_acyclic(G: Hypergraph) -> bool:
    return nx.is_directed_acyclic_graph(nx.from_numpy_array(G.adjacency(), create_using=nx.DiGraph))


def _orderable(G: Hypergraph) -> bool:
    from .obstructions import is_consistently_orderable
    return is_consistently_orderable(G).ok


# ==============================================================================
# 2. 금지 목록 속성
# ==============================================================================

def triangle_family() -> list:
    """방향을 무시하면 삼각형인 3정점 방향 그래프 27개"""
    palette = Palette.graph()
    members = []
    # 각 쌍의 상태: (a->b, b->a) 중 0이 아닌 3가지
    states = [(1, 0), (0, 1), (1, 1)]
    for choice in product(states, repeat=3):
        matrix = np.zeros((3, 3), dtype=np.int64)
        for (a, b), (forward, backward) in zip([(0, 1), (0, 2), (1, 2)], choice):
            matrix[a, b], matrix[b, a] = forward, backward
        members.append(Hypergraph.from_adjacency(palette, matrix))
    return members


# ==============================================================================
# 3. 카탈로그 (Registry)
# ==============================================================================

def get_property(name: str):
    """
    이름으로 내장 속성을 만듭니다.

    Returns:
        Property 또는 None (등록되지 않은 이름)
    """
    graph, leq3, uniform3 = Palette.graph(), Palette.leq3(), Palette.uniform(3)

    # 키: CLI에서 쓰는 이름, 값: 속성 생성 함수
    property_map = {
        "total-order": lambda: Property("total-order", graph, predicate=is_total_order),
        "complete": lambda: Property("complete", graph, predicate=is_complete, undirected_only=True),
        "bipartite": lambda: Property("bipartite", graph, predicate=is_bipartite),
        "complete-bipartite": lambda: Property("complete-bipartite", graph, predicate=is_complete_bipartite,
                                               undirected_only=True),
        "triangle-free": lambda: Property("triangle-free", graph, predicate=is_triangle_free),
        "triangle-free-family": lambda: Property("triangle-free-family", graph, forbidden=triangle_family()),
        "undirected-triangle-free": lambda: Property(
            "undirected-triangle-free", graph,
            predicate=lambda G: G.is_undirected() and is_triangle_free(G), undirected_only=True),
        "undirected": lambda: Property("undirected", graph, predicate=lambda G: G.is_undirected(),
                                       undirected_only=True),
        "acyclic": lambda: Property("acyclic", graph, predicate=is_acyclic),

        # [장애물 탐색용 인코딩]
        "consistently-orderable-leq3": lambda: Property("consistently-orderable-leq3", leq3, predicate=_orderable),
        "consistently-orderable-3uniform": lambda: Property("consistently-orderable-3uniform", uniform3,
                                                            predicate=_orderable),
    }

    builder = property_map.get(name)
    return builder() if builder else None


PROPERTY_NAMES = (
    "total-order", "complete", "bipartite", "complete-bipartite", "triangle-free",
    "triangle-free-family", "undirected-triangle-free", "undirected", "acyclic",
    "consistently-orderable-leq3", "consistently-orderable-3uniform",
)
