# repairs.py
"""
[비국소 복구 절차 담당]
국소 규칙만으로는 안 되는 전순서 복구(훈련 정점으로 구간 예측)와
이분 다수결 규칙을 감싼 완전 이분 복구를 제공합니다.

기능 목록:
1. repair_total_order: 훈련 표본 -> 구간 버킷 -> 전순서 그래프
2. repair_bipartite: 무작위 앵커 + 이분 다수결 규칙 적용
3. gen_corrupted_bipartite: 완전 이분 그래프 손상 인스턴스
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from .config import LOG_LEVEL
from .properties import distance
from .rules import apply_rule, rule_bipartite_majority
from core.hypercore import Hypergraph, Morphism, Palette, restrict
from core.utils import make_rng, sample_injections

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


class OrderRepair(NamedTuple):
    graph: Optional[Hypergraph]
    order: Optional[list]
    edit_fraction: Optional[float]
    report: dict


def _order_graph(order: np.ndarray) -> Hypergraph:
    """정점 순서 order로부터 G(v, w) = 1 (v가 w보다 앞) 인 전순서 그래프"""
    n = len(order)
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n)
    matrix = (position[:, None] < position[None, :]).astype(np.int64)
    return Hypergraph.from_adjacency(Palette.graph(), matrix).freeze()


# ==============================================================================
# 1. 전순서 복구 (Total order repair)
# ==============================================================================

def repair_total_order(G: Hypergraph, n_train: int, seed: int = 0) -> OrderRepair:
    """
    훈련 정점 N'개를 균등하게 뽑아 나머지 정점이 들어갈 구간을 예측합니다.

    버킷 V_i: 훈련 정점 t_1 < ... < t_N' 중 정확히 앞의 i개가 v보다 앞서고
    (t_j <_G v), 나머지 N'-i개가 v보다 뒤에 있는 (v <_G t_j) 정점들.
    배치 순서는 V_0, t_1, V_1, ..., t_N', V_N', 그리고 어느 버킷에도 없는 정점입니다.

    Returns:
        OrderRepair: 훈련 표본이 전순서가 아니면 graph=None, status='retry-training'
    """
    if G.palette != Palette.graph():
        raise ValueError(f"전순서 복구는 방향 그래프 팔레트 전용입니다: {G.palette}")
    n = G.n
    if not 0 <= n_train <= n:
        raise ValueError(f"훈련 크기 {n_train}는 0..{n} 범위여야 합니다.")

    rng = make_rng(seed, "order-repair")
    train = sample_injections(rng, n, n_train, 1)[0]
    A = G.adjacency().astype(bool)
    report = {"algo": "order", "n": n, "train": n_train, "seed": seed}

    # 훈련 표본이 엄격한 전순서인지: 쌍마다 한 방향, 점수가 0..N'-1
    T = A[np.ix_(train, train)]
    off = ~np.eye(n_train, dtype=bool)
    later = T.sum(axis=1)
    if not ((T ^ T.T)[off].all() and np.array_equal(np.sort(later), np.arange(n_train))):
        logger.info(f"⚠️ 훈련 표본이 전순서가 아닙니다. 다른 시드로 다시 시도하세요. (seed={seed})")
        report["status"] = "retry-training"
        return OrderRepair(None, None, None, report)

    # 뒤에 오는 정점이 많을수록 앞 순서
    train = train[np.argsort(-later, kind="stable")]
    others = np.setdiff1d(np.arange(n, dtype=np.int64), train)
    before = A[np.ix_(train, others)]          # before[j, v]: t_j < v
    after = A[np.ix_(others, train)].T         # after[j, v]: v < t_j
    slot = before.sum(axis=0)
    prefix = np.arange(n_train)[:, None] < slot[None, :]
    placed = (before == prefix).all(axis=0) & (after == ~prefix).all(axis=0)

    order = []
    sizes = []
    for i in range(n_train + 1):
        bucket = others[placed & (slot == i)]
        sizes.append(len(bucket))
        order.extend(bucket.tolist())
        if i < n_train:
            order.append(int(train[i]))
    leftover = others[~placed]
    order.extend(leftover.tolist())

    repaired = _order_graph(np.asarray(order, dtype=np.int64))
    disagree = int((repaired.adjacency().astype(bool) != A).sum())
    edit_fraction = disagree / (n * (n - 1)) if n > 1 else 0.0
    report.update({
        "status": "ok",
        "edit_fraction": edit_fraction,
        "bucket_sizes": sizes,
        "leftover": len(leftover),
        "leftover_fraction": len(leftover) / n if n else 0.0,
    })
    logger.info(f"✅ 전순서 복구 완료 (n={n}, N'={n_train}, 수정 비율={edit_fraction:.4f}, "
                f"남은 정점={len(leftover)})")
    return OrderRepair(repaired, order, edit_fraction, report)


# ==============================================================================
# 2. 완전 이분 복구 (Bipartite repair)
# ==============================================================================

def repair_bipartite(G: Hypergraph, a_size: int, seed: int = 0) -> tuple:
    """
    앵커 a_size개를 균등하게 뽑아 이분 다수결 규칙을 적용합니다.

    Returns:
        (G', edit_fraction): G'는 V \\ φ(A) 위의 완전 이분 그래프,
        edit_fraction은 restrict(G, V \\ φ(A))와의 거리
    """
    if G.palette != Palette.graph():
        raise ValueError(f"이분 복구는 그래프 팔레트 전용입니다: {G.palette}")
    if not 0 <= a_size <= G.n:
        raise ValueError(f"훈련 크기 {a_size}는 0..{G.n} 범위여야 합니다.")

    anchors = sample_injections(make_rng(seed, "bipartite-repair"), G.n, a_size, 1)[0]
    phi = Morphism(anchors, G.n)
    rule = rule_bipartite_majority(a_size, seed)
    repaired = apply_rule(rule, G, phi).freeze()
    rest = np.setdiff1d(np.arange(G.n), anchors)
    edit_fraction = distance(repaired, restrict(G, rest))
    logger.info(f"✅ 이분 복구 완료 (n={G.n}, a={a_size}, seed={seed}, 수정 비율={edit_fraction:.4f})")
    return repaired, edit_fraction


def gen_corrupted_bipartite(n: int, sigma: float, seed: int = 0) -> tuple:
    """
    정점을 동전 던지기로 두 편에 나눈 완전 이분 그래프 G0와,
    무방향 쌍마다 확률 sigma로 간선을 뒤집은 G를 만듭니다.

    Returns:
        (G0, G, side): side[v]는 정점 v의 편 (0 / 1)
    """
    if n < 0 or not 0.0 <= sigma <= 1.0:
        raise ValueError(f"잘못된 파라미터입니다: n={n}, sigma={sigma}")
    side = make_rng(seed, "bipartite-sides").integers(0, 2, n)
    clean = (side[:, None] != side[None, :]).astype(np.int64)
    flips = np.triu(make_rng(seed, "bipartite-flip").random((n, n)) < sigma, 1)
    flips = (flips | flips.T).astype(np.int64)
    logger.info(f"✅ 손상 완전 이분 그래프 생성 (n={n}, sigma={sigma}, seed={seed}, 뒤집힘={int(flips.sum()) // 2})")
    return (Hypergraph.from_adjacency(Palette.graph(), clean).freeze(),
            Hypergraph.from_adjacency(Palette.graph(), clean ^ flips).freeze(), side)
