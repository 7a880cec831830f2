# obstructions.py
"""
[국소 복구 불가능성 실험 담당]
손상된(corrupted) 인스턴스를 만들고, 어떤 국소 규칙도 피할 수 없는 구조
(구별 불가능한 쌍, 모순 4-튜플, 모순 9-튜플)를 찾아 보고서로 돌려줍니다.

기능 목록:
1. CorruptionSpec / ObstructionReport: 생성 파라미터와 장애물 보고서
2. Generators: 손상된 전순서, <=3-균일 인코딩, 3-균일 인코딩
3. Relations: red/blue/likes/prefers, G-green 등 파생 관계와 일관 정렬 가능성 판정
4. Searches: 구별 불가능 쌍, 모순 4-튜플, 모순 9-튜플 (버킷 + 시드 표본 탐색)
5. Clause Checkers: 찾은 증거를 독립적으로 다시 검증
"""

import logging
from itertools import combinations
from math import comb
from typing import Literal, NamedTuple, Optional

import networkx as nx
import numpy as np
from pydantic import BaseModel, Field, model_validator

from .config import (
    DEFAULT_PROBE_BUDGET,
    HEDRA_THREADS,
    LOG_LEVEL,
    NINE_TETRA_ATTEMPTS,
    PROBE_BATCH,
    ROW_BLOCK,
)
from .catalog import get_property
from .properties import obeys
from .rules import LocalRule, apply_rule, recolor_tuples
from core.hypercore import Hypergraph, Morphism, Palette, pullback
from core.utils import colex_rank, format_report, make_rng, run_sharded, sample_injections

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

PAIR_CLAUSES = ("distinct", "level1", "anchor-out", "anchor-in", "mutual", "swap-invariant")
QUAD_CLAUSES = ("distinct", "colors-G", "colors-G'", "crossed-preference", "e2-anchor-symmetry",
                "e2-quad-symmetry", "e3-symmetry", "swap-invariant")
NINE_CLAUSES = ("distinct", "tetrahedron", "exclusion", "like-pattern", "symmetry", "swap-invariant")


# ==============================================================================
# 1. 데이터 모델 (Data Models)
# ==============================================================================

class CorruptionSpec(BaseModel):
    """손상 인스턴스 생성 파라미터"""
    M: int = Field(..., ge=2, description="손상 전 인스턴스 크기")
    sigma: float = Field(..., ge=0.0, le=1.0, description="원소별 뒤집기 확률")
    seed: int = Field(0, ge=0, lt=1 << 64)


class ObstructionReport(BaseModel):
    """찾아낸 장애물. witness는 원래 그래프 G의 정점 번호입니다."""
    kind: Literal["pair", "quad", "nine"]
    witness: tuple[int, ...]
    anchors: tuple[int, ...] = ()
    checked_conditions: list[str] = Field(default_factory=list)
    details: dict = Field(default_factory=dict)

    @model_validator(mode="after")
    def _distinct_witness(self):
        if len(set(self.witness)) != len(self.witness):
            raise ValueError(f"증거 정점이 서로 다르지 않습니다: {self.witness}")
        if set(self.witness) & set(self.anchors):
            raise ValueError(f"증거 정점이 앵커와 겹칩니다: {self.witness} / {self.anchors}")
        return self


class Orderability(NamedTuple):
    ok: bool
    order: Optional[list]
    cycle: Optional[list]


def format_obstruction(report: ObstructionReport) -> str:
    """CLI 출력용 key=value 블록"""
    fields = {
        "kind": report.kind,
        "anchors": list(report.anchors),
        "witness": list(report.witness),
        "checked_conditions": report.checked_conditions,
    }
    fields.update(report.details)
    return format_report(fields)


# ==============================================================================
# 2. 인스턴스 생성기 (Generators)
# ==============================================================================

def _flip_rows(rng: np.random.Generator, M: int, sigma: float) -> np.ndarray:
    """행 블록 단위로 뽑은 (M, M) 뒤집기 마스크 (대각선 제외)"""
    flips = np.zeros((M, M), dtype=bool)
    for start in range(0, M, ROW_BLOCK):
        stop = min(M, start + ROW_BLOCK)
        flips[start:stop] = rng.random((stop - start, M)) < sigma
    np.fill_diagonal(flips, False)
    return flips


def gen_corrupted_order(spec: CorruptionSpec) -> tuple:
    """
    표준 전순서 G0 (v < w 이면 G(v, w) = 1)과 순서쌍마다 확률 sigma로 뒤집은 G를 만듭니다.

    Returns:
        (G0, G): 고정된 방향 그래프 두 개
    """
    M = spec.M
    palette = Palette.graph()
    clean = np.triu(np.ones((M, M), dtype=np.int64), 1)
    flips = _flip_rows(make_rng(spec.seed, "order-flip"), M, spec.sigma)
    noisy = clean ^ flips.astype(np.int64)
    logger.info(f"✅ 손상 전순서 생성 (M={M}, sigma={spec.sigma}, seed={spec.seed}, 뒤집힘={int(flips.sum())})")
    return (Hypergraph.from_adjacency(palette, clean).freeze(),
            Hypergraph.from_adjacency(palette, noisy).freeze())


def _random_e2(M: int, seed: int) -> np.ndarray:
    """밀도 1/2 무방향 랜덤 그래프 E2 (M x M 불리언, 대칭)"""
    rng = make_rng(seed, "leq3-e2")
    upper = np.triu(rng.integers(0, 2, size=(M, M), dtype=np.uint8), 1).astype(bool)
    return upper | upper.T


def _ranking_slab(c: int, h: int, e2: np.ndarray) -> np.ndarray:
    """
    최대 원소가 c인 3-부분집합 {a < b < c}들의 E3 소속 (colex 순서).
    파랑 = [0, h), 빨강 c가 파랑 a, b를 평가: 'a는 좋아하고 b는 싫어함'일 때만 제외.
    """
    b, a = np.tril_indices(c, -1)
    if c < h:
        return np.zeros(len(a), dtype=bool)
    liked_a, liked_b = e2[c, a], e2[c, b]
    # (i) 둘 다 좋아함, (ii) 둘 다 싫어함, (iii) 큰 쪽 b를 선호
    return (b < h) & ~(liked_a & ~liked_b)


def _flip_store(store: np.ndarray, M: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """최대 원소별 조각 순서로 3-부분집합 소속을 뒤집습니다."""
    noisy = store.copy()
    for c in range(2, M):
        start, width = comb(c, 3), comb(c, 2)
        flips = rng.random(width) < sigma
        noisy[start:start + width] ^= flips
    return noisy


def _leq3_levels(M: int, blue: np.ndarray, e2: np.ndarray, e3: np.ndarray) -> list:
    b, a = np.tril_indices(M, -1)
    return [np.zeros((1, 1), dtype=np.int64),
            blue.astype(np.int64).reshape(M, 1),
            e2[b, a].astype(np.int64).reshape(-1, 1),
            e3.astype(np.int64).reshape(-1, 1)]


def gen_leq3(spec: CorruptionSpec) -> tuple:
    """
    <=3-균일 인코딩 G0와 E3만 확률 sigma로 뒤집은 G를 만듭니다.
    앞의 M/2개 정점이 파랑(E1), E2는 밀도 1/2 랜덤 그래프입니다.

    Raises:
        ValueError: M이 홀수인 경우
    """
    M = spec.M
    if M % 2:
        raise ValueError(f"gen_leq3는 짝수 M만 받습니다: {M}")
    h = M // 2
    blue = np.arange(M) < h
    e2 = _random_e2(M, spec.seed)
    clean = np.concatenate([_ranking_slab(c, h, e2) for c in range(M)]) if M >= 3 else np.zeros(0, bool)
    noisy = _flip_store(clean, M, spec.sigma, make_rng(spec.seed, "leq3-flip"))
    palette = Palette.leq3()
    G0 = Hypergraph(palette, M, _leq3_levels(M, blue, e2, clean)).freeze()
    G = Hypergraph(palette, M, _leq3_levels(M, blue, e2, noisy)).freeze()
    logger.info(f"✅ <=3-균일 인스턴스 생성 (M={M}, sigma={spec.sigma}, seed={spec.seed}, "
                f"|E3|={int(clean.sum())}, 뒤집힘={int((clean != noisy).sum())})")
    return G0, G


def gen_3uniform(spec: CorruptionSpec) -> tuple:
    """
    [0, M) 위의 <=3-균일 구성을 3-균일 그래프로 옮기고 [M, 2M)을 초록으로 추가합니다.
    파랑 = [0, floor(M/2)), 빨강 = [floor(M/2), M), 초록 = [M, 2M).

    Returns:
        (G1, G): 2M개 정점 위의 3-균일 무방향 그래프 두 개
    """
    M = spec.M
    n = 2 * M
    h = M // 2
    e2 = _random_e2(M, spec.seed)
    slabs = []
    for c in range(n):
        b, a = np.tril_indices(c, -1)
        if c < M:
            slabs.append(_ranking_slab(c, h, e2))
            continue
        # 초록 c: 셋 다 초록이거나, (파랑 a, 빨강 b)이고 빨강이 파랑을 좋아할 때
        inside = b < M
        likes = e2[np.minimum(b, M - 1), np.minimum(a, M - 1)]
        slabs.append((a >= M) | (inside & (b >= h) & (a < h) & likes))
    clean = np.concatenate(slabs) if n >= 3 else np.zeros(0, bool)
    noisy = _flip_store(clean, n, spec.sigma, make_rng(spec.seed, "uniform3-flip"))

    palette = Palette.uniform(3)

    def build(store):
        levels = [np.zeros((1, 1), dtype=np.int64), np.zeros((n, 1), dtype=np.int64),
                  np.zeros((comb(n, 2), 1), dtype=np.int64), store.astype(np.int64).reshape(-1, 1)]
        return Hypergraph(palette, n, levels).freeze()

    logger.info(f"✅ 3-균일 인스턴스 생성 (n={n}, sigma={spec.sigma}, seed={spec.seed}, "
                f"|E|={int(clean.sum())}, 뒤집힘={int((clean != noisy).sum())})")
    return build(clean), build(noisy)


# ==============================================================================
# 3. 파생 관계 (Relations)
# ==============================================================================

class TripleView:
    """
    무방향 레벨 3을 정점별 비트 행렬로 펼친 뷰.
    bits[x, y]의 비트 z = {x, y, z} ∈ E3
    """

    def __init__(self, G: Hypergraph):
        if G.order < 3:
            raise ValueError("TripleView는 차수 3 이상의 팔레트가 필요합니다.")
        n = G.n
        self.n = n
        store = G.levels[3][:, 0]
        y, z = np.triu_indices(n, 1)
        self.bits = np.zeros((n, n, (n + 7) // 8), dtype=np.uint8)
        for x in range(n):
            keep = (y != x) & (z != x)
            yy, zz = y[keep], z[keep]
            lo, hi = np.minimum(x, yy), np.maximum(x, zz)
            mid = x + yy + zz - lo - hi
            member = store[colex_rank(np.column_stack([lo, mid, hi]))] != 0
            pairs = np.zeros((n, n), dtype=bool)
            pairs[yy, zz] = member
            pairs[zz, yy] = member
            self.bits[x] = np.packbits(pairs, axis=1)

    def pairs(self, x: int) -> np.ndarray:
        """(n, n) 불리언: {x, y, z} ∈ E3"""
        return np.unpackbits(self.bits[x], axis=1, count=self.n).astype(bool)

    def contains(self, x: int, y: int, z: int) -> bool:
        return bool((self.bits[x, y, z >> 3] >> (7 - (z & 7))) & 1)

    def find_tetrahedron(self, x: int, chunk: int = PROBE_BATCH) -> Optional[tuple]:
        """x를 포함하는 사면체(네 삼중쌍이 모두 E3)의 나머지 세 정점, 없으면 None"""
        ys, zs = np.nonzero(np.triu(self.pairs(x), 1))
        for start in range(0, len(ys), chunk):
            y, z = ys[start:start + chunk], zs[start:start + chunk]
            common = self.bits[x, y] & self.bits[x, z] & self.bits[y, z]
            hit = common.any(axis=1)
            if hit.any():
                i = int(np.argmax(hit))
                w = int(np.argmax(np.unpackbits(common[i], count=self.n)))
                return int(y[i]), int(z[i]), w
        return None


class Leq3Relations:
    """<=3-균일 인코딩의 red / blue / likes / prefers / ranks-correctly"""

    def __init__(self, G: Hypergraph, view: TripleView = None):
        self.n = G.n
        self.blue = G.level1 == 1
        self.red = ~self.blue
        self.view = view or TripleView(G)
        e2 = G.adjacency().astype(bool)
        # likes[r, b]: r 빨강, b 파랑, {r, b} ∈ E2
        self.likes = e2 & self.red[:, None] & self.blue[None, :]
        self._gt = None

    def prefers(self, r: int) -> np.ndarray:
        """P[b, b']: r이 b는 좋아하고 b'는 좋아하지 않음"""
        if not self.red[r]:
            return np.zeros((self.n, self.n), dtype=bool)
        liked = self.likes[r]
        return np.outer(liked, self.blue & ~liked)

    def ranks(self, r: int) -> np.ndarray:
        """R[b, b']: r이 {b, b'}를 올바르게 순위 매김 ({r, b, b'} ∈ E3)"""
        if not self.red[r]:
            return np.zeros((self.n, self.n), dtype=bool)
        return self.view.pairs(r) & np.outer(self.blue, self.blue)

    def greater(self, r: int) -> np.ndarray:
        """gt[b, b'] = b >_{G,r} b'"""
        pref = self.prefers(r)
        correct = self.view.pairs(r)
        return (pref & correct) | (pref & ~correct).T

    @property
    def gt(self) -> np.ndarray:
        if self._gt is None:
            gt = np.zeros((self.n, self.n), dtype=bool)
            for r in np.flatnonzero(self.red):
                gt |= self.greater(int(r))
            self._gt = gt
        return self._gt


def leq3_relations(G: Hypergraph) -> Leq3Relations:
    if G.palette != Palette.leq3():
        raise ValueError(f"<=3-균일 팔레트가 아닙니다: {G.palette}")
    return Leq3Relations(G)


class DerivedRelations:
    """
    3-균일 그래프의 G-green / G-nongreen / likes / dislikes / similar / prefers.
    초록 판정에 쓴 사면체 증거는 witnesses에 보관합니다.
    """

    def __init__(self, G: Hypergraph, view: TripleView = None):
        n = G.n
        self.n = n
        self.view = view or TripleView(G)
        self.witnesses = {}
        self.green = np.zeros(n, dtype=bool)
        if n >= 4:
            for x in range(n):
                if self.green[x]:
                    continue
                found = self.view.find_tetrahedron(x)
                if found is None:
                    continue
                tetra = (x,) + found
                for v in tetra:
                    if not self.green[v]:
                        self.green[v] = True
                        self.witnesses[v] = tuple(u for u in tetra if u != v)
        logger.debug(f"G-green 정점 {int(self.green.sum())}개 (n={n})")

        total_green = int(self.green.sum())
        green_bits = np.packbits(self.green)
        self.nongreen = np.zeros(n, dtype=bool)
        in_edge = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            hits = np.unpackbits(self.view.bits[x] & green_bits, axis=1, count=n)
            in_edge[x] = hits.sum(axis=1)
            others = total_green - int(self.green[x])
            if others >= 2:
                # 초록 쌍 {g, g'}는 (g, g'), (g', g) 두 번 세어짐
                inside = int(hits[self.green].sum()) // 2
                self.nongreen[x] = inside < others * (others - 1) // 2

        both = np.outer(self.nongreen, self.nongreen)
        np.fill_diagonal(both, False)
        # {x, y, g} ∈ E인 초록 g 수 < x, y를 뺀 초록 수 이면 dislikes
        greens_excluding = total_green - self.green[:, None].astype(np.int64) - self.green[None, :]
        self.likes = both & (in_edge > 0)
        self.dislikes = both & (in_edge < greens_excluding)
        liked = self.likes.astype(np.int64)
        self.similar = (liked @ liked.T) > 0
        self._gt = None
        self._ranking = None

    def prefers(self, r: int) -> np.ndarray:
        """P[b, b']: r, b, b' 비초록, b ~ b' 유사, r이 b를 좋아하고 b'를 싫어함"""
        pref = np.outer(self.likes[r], self.dislikes[r]) & self.similar
        np.fill_diagonal(pref, False)
        return pref

    def _clauses(self, r: int) -> tuple:
        pref = self.prefers(r)
        member = self.view.pairs(r)
        return pref & member, pref & ~member

    def _build(self):
        gt = np.zeros((self.n, self.n), dtype=bool)
        ranking = np.zeros(self.n, dtype=bool)
        for r in np.flatnonzero(self.nongreen):
            forward, backward = self._clauses(int(r))
            # 조항 (a)를 한 번이라도 만족한 정점만 순위를 매김
            if not forward.any():
                continue
            ranking[r] = True
            gt |= forward | backward.T
        self._gt, self._ranking = gt, ranking

    @property
    def ranking(self) -> np.ndarray:
        if self._ranking is None:
            self._build()
        return self._ranking

    @property
    def gt(self) -> np.ndarray:
        if self._gt is None:
            self._build()
        return self._gt

    def greater(self, r: int) -> np.ndarray:
        if not self.ranking[r]:
            return np.zeros((self.n, self.n), dtype=bool)
        forward, backward = self._clauses(r)
        return forward | backward.T


def derived_relations(G: Hypergraph) -> DerivedRelations:
    if G.palette != Palette.uniform(3):
        raise ValueError(f"3-균일 팔레트가 아닙니다: {G.palette}")
    return DerivedRelations(G)


def constraint_arcs(G: Hypergraph) -> np.ndarray:
    """
    gt[b, b'] = 어떤 r에 대해 b >_{G,r} b'.
    방향 그래프는 G(v, w) = 1 을 v < w 로 읽습니다.
    """
    if G.palette == Palette.leq3():
        return Leq3Relations(G).gt
    if G.palette == Palette.uniform(3):
        return DerivedRelations(G).gt
    if G.palette == Palette.graph():
        return G.adjacency().astype(bool).T
    raise ValueError(f"일관 정렬을 정의하지 않은 팔레트입니다: {G.palette}")


def is_consistently_orderable(G: Hypergraph) -> Orderability:
    """
    제약 그래프(b' -> b : b > b')가 비순환이면 오름차순 위상 정렬을,
    아니면 반대칭 위반 쌍 또는 사이클을 돌려줍니다.
    """
    if G.palette != Palette.graph() and not G.is_undirected():
        logger.debug("무방향이 아닌 입력은 일관 정렬 속성을 만족하지 않습니다.")
        return Orderability(False, None, None)
    gt = constraint_arcs(G)
    clash = np.argwhere(gt & gt.T)
    if len(clash):
        b, b2 = (int(v) for v in clash[0])
        return Orderability(False, None, [b, b2])

    D = nx.DiGraph()
    D.add_nodes_from(range(G.n))
    D.add_edges_from((int(lo), int(hi)) for hi, lo in np.argwhere(gt))
    if not nx.is_directed_acyclic_graph(D):
        return Orderability(False, None, [u for u, _ in nx.find_cycle(D)])
    return Orderability(True, list(nx.lexicographical_topological_sort(D)), None)


# ==============================================================================
# 4. 탐색 공통 도구 (Search helpers)
# ==============================================================================

def _anchor_array(anchors, n: int) -> np.ndarray:
    anchors = np.unique(np.asarray(list(anchors), dtype=np.int64))
    if anchors.size and (anchors[0] < 0 or anchors[-1] >= n):
        raise ValueError(f"앵커가 정점 범위 0..{n - 1}를 벗어났습니다: {anchors.tolist()}")
    return anchors


def _outside(n: int, anchors: np.ndarray) -> tuple:
    """(앵커 밖 정점 오름차순, G 정점 -> 출력 번호 (앵커는 -1))"""
    rest = np.setdiff1d(np.arange(n, dtype=np.int64), anchors)
    position = np.full(n, -1, dtype=np.int64)
    position[rest] = np.arange(len(rest))
    return rest, position


def _e3(G: Hypergraph, x, y, z) -> np.ndarray:
    x, y, z = np.broadcast_arrays(np.asarray(x), np.asarray(y), np.asarray(z))
    return G.colors(3, np.column_stack([x.ravel(), y.ravel(), z.ravel()])) != 0


def _signature(G: Hypergraph, vertices: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """앵커와의 연결 서명: 레벨 2 색 (v, a)와 레벨 3 색 {v, a, a'}"""
    columns = []
    if G.palette.sizes[2] > 1:
        for a in anchors:
            columns.append(G.colors(2, np.column_stack([vertices, np.full_like(vertices, a)])))
    if G.order >= 3:
        for a, a2 in combinations(anchors.tolist(), 2):
            columns.append(_e3(G, vertices, a, a2).astype(np.int64))
    if not columns:
        return np.zeros((len(vertices), 0), dtype=np.int64)
    return np.column_stack(columns).astype(np.int64)


def _buckets(vertices: np.ndarray, signature: np.ndarray) -> list:
    """같은 서명끼리 묶은 정점 배열들 (최소 원소 순)"""
    if not len(vertices):
        return []
    if signature.shape[1] == 0:
        return [np.sort(vertices)]
    _, inverse = np.unique(signature, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    groups = [np.sort(vertices[inverse == k]) for k in range(int(inverse.max()) + 1)]
    return sorted(groups, key=lambda g: int(g[0]))


def _ordered_pair(index: np.ndarray, size: int) -> tuple:
    """0..size(size-1)-1 평탄 번호 -> 서로 다른 순서쌍 (i, j)"""
    i = index // (size - 1)
    j = index % (size - 1)
    return i, j + (j >= i)


def _decode_quad(index: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    q = len(right) * (len(right) - 1)
    outer, inner = np.divmod(index, q)
    i1, i2 = _ordered_pair(outer, len(left))
    j1, j2 = _ordered_pair(inner, len(right))
    return np.column_stack([left[i1], left[i2], right[j1], right[j2]])


def _bucket_plan(left_buckets: list, right_buckets: list, budget: int) -> list:
    """
    (왼쪽 버킷, 오른쪽 버킷, 후보 수, 배정 탐침 수) 목록.
    가장 큰 버킷 쌍이 예산의 절반을 먼저 받고, 나머지는 큰 순서대로 나눠 받습니다.
    """
    pairs = []
    for L in left_buckets:
        for R in right_buckets:
            if len(L) >= 2 and len(R) >= 2:
                pairs.append((L, R, len(L) * (len(L) - 1) * len(R) * (len(R) - 1)))
    pairs.sort(key=lambda p: (-p[2], int(p[0][0]), int(p[1][0])))
    plan, remaining = [], int(budget)
    for index, (L, R, count) in enumerate(pairs):
        if remaining <= 0:
            break
        share = max(1, remaining // 2) if index == 0 and len(pairs) > 1 else remaining
        allot = min(count, share)
        plan.append((L, R, count, allot))
        remaining -= allot
    return plan


def _probe_bucket(L: np.ndarray, R: np.ndarray, count: int, allot: int, check, seed: int,
                  labels: tuple) -> Optional[tuple]:
    """
    한 버킷 쌍 안에서 후보를 배치 단위로 검사합니다.
    후보 수가 배정량 이하이면 전수, 아니면 시드 표본. 가장 작은 탐침 번호의 적중이 이깁니다.
    """
    exhaustive = allot >= count
    batches = -(-allot // PROBE_BATCH)

    def batch(b: int):
        start = b * PROBE_BATCH
        size = min(PROBE_BATCH, allot - start)
        if exhaustive:
            index = np.arange(start, start + size, dtype=np.int64)
        else:
            index = make_rng(seed, *labels, b).integers(0, count, size=size)
        return check(_decode_quad(index, L, R))

    for first in range(0, batches, HEDRA_THREADS):
        group = range(first, min(batches, first + HEDRA_THREADS))
        for hit in run_sharded(batch, [(b,) for b in group]):
            if hit is not None:
                return hit
    return None


def _swap_invariant(G: Hypergraph, anchors, witness, swap) -> bool:
    """φ ⊎ witness 풀백이 witness 위 치환 swap에 대해 불변인지 (앵커는 고정)"""
    base = list(anchors) + list(witness)
    moved = list(anchors) + [witness[i] for i in swap]
    return pullback(G, Morphism(base, G.n)) == pullback(G, Morphism(moved, G.n))


# ==============================================================================
# 5. 구별 불가능 쌍 (Indistinguishable pairs)
# ==============================================================================

def find_indistinguishable_pair(G: Hypergraph, anchors=()) -> Optional[tuple]:
    """
    앵커 밖의 서로 다른 v1 < v2 중 앵커와의 관계, 레벨 1 색이 같고
    G(v1, v2) = G(v2, v1)인 첫 쌍을 찾습니다. 버킷은 최소 원소 순으로 훑습니다.
    """
    if G.order != 2:
        raise ValueError("구별 불가능 쌍 탐색은 차수 2 팔레트 전용입니다.")
    anchors = _anchor_array(anchors, G.n)
    rest, _ = _outside(G.n, anchors)
    A = G.adjacency()
    signature = np.column_stack([G.level1[rest], A[np.ix_(rest, anchors)], A[np.ix_(anchors, rest)].T])
    for bucket in _buckets(rest, signature.astype(np.int64)):
        if len(bucket) < 2:
            continue
        S = A[np.ix_(bucket, bucket)]
        mutual = np.triu(S == S.T, 1)
        if mutual.any():
            i, j = np.argwhere(mutual)[0]
            return int(bucket[i]), int(bucket[j])
    return None


def check_pair_clauses(G: Hypergraph, anchors, pair) -> list:
    """쌍 조건을 스칼라 조회로 다시 확인하고 만족한 조항 이름을 돌려줍니다."""
    v1, v2 = (int(v) for v in pair)
    anchors = [int(a) for a in anchors]
    if v1 == v2 or v1 in anchors or v2 in anchors:
        return []
    passed = ["distinct"]
    if G.get((v1,)) == G.get((v2,)):
        passed.append("level1")
    if all(G.get((v1, a)) == G.get((v2, a)) for a in anchors):
        passed.append("anchor-out")
    if all(G.get((a, v1)) == G.get((a, v2)) for a in anchors):
        passed.append("anchor-in")
    if G.get((v1, v2)) == G.get((v2, v1)):
        passed.append("mutual")
    if _swap_invariant(G, anchors, (v1, v2), (1, 0)):
        passed.append("swap-invariant")
    return passed


def defeat_rule_order(G: Hypergraph, rule: LocalRule, phi: Morphism) -> Optional[ObstructionReport]:
    """
    구별 불가능 쌍을 찾아 규칙 출력이 그 쌍에서 대칭임을 확인합니다.
    대칭인 쌍이 있으면 T_φ(G)는 전순서가 될 수 없고, 전체 출력에서 이를 다시 확인합니다.

    Raises:
        RuntimeError: 규칙 출력이 구별 불가능 쌍에서 대칭이 아닌 경우 (국소성 위반)
    """
    if G.palette != rule.palette:
        raise ValueError(f"규칙 '{rule.name}'과 그래프의 팔레트가 다릅니다.")
    anchors = phi.as_array()
    pair = find_indistinguishable_pair(G, anchors)
    if pair is None:
        logger.info(f"⚠️ 구별 불가능 쌍 없음 (n={G.n}, 앵커={len(anchors)}, 규칙={rule.name})")
        return None

    _, position = _outside(G.n, np.sort(anchors))
    o1, o2 = int(position[pair[0]]), int(position[pair[1]])
    forward, backward = (int(c) for c in recolor_tuples(rule, G, phi, 2, [(o1, o2), (o2, o1)]))
    if forward != backward:
        raise RuntimeError(f"규칙 '{rule.name}'의 출력이 구별 불가능 쌍 {pair}에서 대칭이 아닙니다.")

    passed = check_pair_clauses(G, anchors, pair)
    passed.append("rule-symmetric-output")
    repaired = apply_rule(rule, G, phi)
    total = obeys(get_property("total-order"), repaired)
    details = {"rule": rule.name, "output_pair": [o1, o2], "output_color": forward,
               "repaired_is_total_order": total}
    if not total:
        passed.append("rule-not-total-order")
    logger.info(f"✅ 규칙 '{rule.name}' 패배: 쌍 {pair}, 출력 색 {forward} (n={G.n})")
    return ObstructionReport(kind="pair", witness=pair, anchors=tuple(int(a) for a in anchors),
                             checked_conditions=passed, details=details)


# ==============================================================================
# 6. 모순 4-튜플 (<=3-균일)
# ==============================================================================

def _require_pair(G: Hypergraph, Gp: Hypergraph, palette: Palette, anchors) -> tuple:
    if G.palette != palette or Gp.palette != palette:
        raise ValueError(f"입력 팔레트가 {palette}가 아닙니다.")
    anchors = _anchor_array(anchors, G.n)
    rest, position = _outside(G.n, anchors)
    if Gp.n != len(rest):
        raise ValueError(f"G'의 정점 수 {Gp.n}가 앵커 밖 정점 수 {len(rest)}와 다릅니다.")
    return anchors, rest, position


def find_inconsistent_quad(G: Hypergraph, Gp: Hypergraph, anchors=(), budget: int = DEFAULT_PROBE_BUDGET,
                           seed: int = 0) -> Optional[tuple]:
    """
    (r1, r2, b1, b2): G와 G'에서 모두 빨강/파랑이고, G'에서 선호가 엇갈리며,
    G에서 (r1 <-> r2, b1 <-> b2) 교환에 대해 대칭인 4-튜플을 찾습니다.

    Args:
        G: <=3-균일 인코딩 (정점 V)
        Gp: 규칙 출력 (정점 V \\ anchors, 오름차순 번호)
        budget: 총 탐침 수
    Returns:
        G 정점 번호의 4-튜플 또는 None
    """
    anchors, rest, position = _require_pair(G, Gp, Palette.leq3(), anchors)
    blue = G.level1 == 1
    blue_p = np.zeros(G.n, dtype=bool)
    blue_p[rest] = Gp.level1 == 1
    E2 = G.adjacency().astype(bool)
    Ep = Gp.adjacency().astype(bool)
    red_p_idx = ~(Gp.level1 == 1)
    likes_p = Ep & red_p_idx[:, None] & ~red_p_idx[None, :]

    reds = rest[~blue[rest] & ~blue_p[rest]]
    blues = rest[blue[rest] & blue_p[rest]]
    plan = _bucket_plan(_buckets(reds, _signature(G, reds, anchors)),
                        _buckets(blues, _signature(G, blues, anchors)), budget)
    logger.info(f"🚀 모순 4-튜플 탐색 (n={G.n}, 앵커={len(anchors)}, 버킷 쌍={len(plan)}, "
                f"예산={budget}, seed={seed})")

    def check(quads: np.ndarray) -> Optional[tuple]:
        r1, r2, b1, b2 = quads.T
        p1, p2, q1, q2 = position[r1], position[r2], position[b1], position[b2]
        keep = (likes_p[p1, q1] & ~likes_p[p1, q2] & likes_p[p2, q2] & ~likes_p[p2, q1]
                & (E2[r1, b1] == E2[r2, b2]) & (E2[r1, b2] == E2[r2, b1]))
        quads = quads[keep]
        if not len(quads):
            return None
        r1, r2, b1, b2 = quads.T
        keep = (_e3(G, r1, r2, b1) == _e3(G, r1, r2, b2)) & (_e3(G, b1, b2, r1) == _e3(G, b1, b2, r2))
        for a in anchors:
            if not keep.any():
                break
            keep &= (_e3(G, r1, b1, a) == _e3(G, r2, b2, a)) & (_e3(G, r1, b2, a) == _e3(G, r2, b1, a))
        if not keep.any():
            return None
        return tuple(int(v) for v in quads[int(np.argmax(keep))])

    for index, (L, R, count, allot) in enumerate(plan):
        hit = _probe_bucket(L, R, count, allot, check, seed, ("quad", index))
        if hit is not None:
            logger.info(f"✅ 모순 4-튜플 발견: {hit} (버킷 쌍 {index})")
            return hit
    logger.info("⚠️ 예산 안에서 모순 4-튜플을 찾지 못했습니다.")
    return None


def check_quad_clauses(G: Hypergraph, Gp: Hypergraph, anchors, quad) -> list:
    """4-튜플 조건 (i)-(iii)을 스칼라 조회로 확인합니다."""
    r1, r2, b1, b2 = (int(v) for v in quad)
    anchors = [int(a) for a in _anchor_array(anchors, G.n)]
    if len({r1, r2, b1, b2}) != 4 or {r1, r2, b1, b2} & set(anchors):
        return []
    _, position = _outside(G.n, np.asarray(anchors, dtype=np.int64))
    pr1, pr2, pb1, pb2 = (int(position[v]) for v in (r1, r2, b1, b2))
    passed = ["distinct"]

    if (G.get((r1,)), G.get((r2,)), G.get((b1,)), G.get((b2,))) == (0, 0, 1, 1):
        passed.append("colors-G")
    if (Gp.get((pr1,)), Gp.get((pr2,)), Gp.get((pb1,)), Gp.get((pb2,))) == (0, 0, 1, 1):
        passed.append("colors-G'")

    def likes(r, b):
        return Gp.get((r,)) == 0 and Gp.get((b,)) == 1 and Gp.get((r, b)) == 1

    def prefers(r, b, b2):
        return likes(r, b) and Gp.get((b2,)) == 1 and not likes(r, b2)

    if prefers(pr1, pb1, pb2) and prefers(pr2, pb2, pb1):
        passed.append("crossed-preference")
    if all(G.get((b1, a)) == G.get((b2, a)) and G.get((r1, a)) == G.get((r2, a)) for a in anchors):
        passed.append("e2-anchor-symmetry")
    if G.get((r1, b1)) == G.get((r2, b2)) and G.get((r1, b2)) == G.get((r2, b1)):
        passed.append("e2-quad-symmetry")
    if _e3_symmetric(G, anchors, r1, r2, b1, b2):
        passed.append("e3-symmetry")
    if _swap_invariant(G, anchors, (r1, r2, b1, b2), (1, 0, 3, 2)):
        passed.append("swap-invariant")
    return passed


def _e3_symmetric(G: Hypergraph, anchors: list, r1: int, r2: int, b1: int, b2: int) -> bool:
    """교환 (r1 <-> r2, b1 <-> b2)에 대한 레벨 3 대칭 여섯 줄"""
    def e(*t):
        return G.get(t)

    if e(r1, r2, b1) != e(r1, r2, b2) or e(b1, b2, r1) != e(b1, b2, r2):
        return False
    for a in anchors:
        if e(r1, b1, a) != e(r2, b2, a) or e(r1, b2, a) != e(r2, b1, a):
            return False
    for a, a2 in combinations(anchors, 2):
        if e(r1, a, a2) != e(r2, a, a2) or e(b1, a, a2) != e(b2, a, a2):
            return False
    return True


# ==============================================================================
# 7. 모순 9-튜플 (3-균일)
# ==============================================================================

def _find_output_tetrahedron(Gp: Hypergraph, rng: np.random.Generator) -> Optional[np.ndarray]:
    """G'에서 무작위 4-부분집합 한 배치를 뽑아 첫 사면체를 돌려줍니다. (G' 번호)"""
    if Gp.n < 4:
        return None
    quads = np.sort(sample_injections(rng, Gp.n, 4, PROBE_BATCH), axis=1)
    keep = np.ones(len(quads), dtype=bool)
    for drop in range(4):
        face = np.delete(quads, drop, axis=1)
        keep &= Gp.colors(3, face) != 0
    if not keep.any():
        return None
    return quads[int(np.argmax(keep))]


def find_inconsistent_nine(G: Hypergraph, Gp: Hypergraph, anchors=(), budget: int = DEFAULT_PROBE_BUDGET,
                           seed: int = 0) -> Optional[tuple]:
    """
    (r1, r2, r3, b1, b2, g1, g2, g3, g4): G'의 사면체 g, 배제 조건, 좋아함 패턴,
    G에서의 교환 대칭을 모두 만족하는 9-튜플을 찾습니다.

    사면체는 G'에서 표본으로 찾고 (NINE_TETRA_ATTEMPTS회), 그때마다
    (r1, r2) / (b1, b2)를 앵커 서명 버킷 쌍에서 탐침하며 r3는 b1, b2를 함께 좋아하는
    가장 작은 정점으로 고릅니다.
    """
    anchors, rest, position = _require_pair(G, Gp, Palette.uniform(3), anchors)
    n_out = Gp.n
    per_attempt = max(1, int(budget) // NINE_TETRA_ATTEMPTS)
    logger.info(f"🚀 모순 9-튜플 탐색 (n={G.n}, 앵커={len(anchors)}, 예산={budget}, seed={seed})")

    for attempt in range(NINE_TETRA_ATTEMPTS):
        tetra = _find_output_tetrahedron(Gp, make_rng(seed, "nine-tetra", attempt))
        if tetra is None:
            continue
        g1, g2 = int(tetra[0]), int(tetra[1])
        others = np.setdiff1d(np.arange(n_out), tetra)
        # N: {x, g1, g2} ∉ E'
        allowed = np.zeros(n_out, dtype=bool)
        allowed[others] = Gp.colors(3, np.column_stack([others, np.full_like(others, g1),
                                                        np.full_like(others, g2)])) == 0
        # L[x, y] = {x, y, g1} ∈ E'
        y, z = np.triu_indices(n_out, 1)
        pairs = (y != g1) & (z != g1)
        y, z = y[pairs], z[pairs]
        like = np.zeros((n_out, n_out), dtype=bool)
        member = Gp.colors(3, np.column_stack([y, z, np.full_like(y, g1)])) != 0
        like[y, z] = member
        like[z, y] = member

        pool = rest[allowed]
        buckets = _buckets(pool, _signature(G, pool, anchors))
        plan = _bucket_plan(buckets, buckets, per_attempt)

        def check(quads: np.ndarray, like=like, allowed=allowed) -> Optional[tuple]:
            quads = quads[(quads[:, 0] != quads[:, 2]) & (quads[:, 0] != quads[:, 3])
                          & (quads[:, 1] != quads[:, 2]) & (quads[:, 1] != quads[:, 3])]
            r1, r2, b1, b2 = position[quads].T
            keep = like[r1, b2] & like[r2, b1] & ~like[r1, b1] & ~like[r2, b2]
            quads = quads[keep]
            if not len(quads):
                return None
            r1, r2, b1, b2 = quads.T
            keep = (_e3(G, r1, r2, b1) == _e3(G, r1, r2, b2)) & (_e3(G, b1, b2, r1) == _e3(G, b1, b2, r2))
            for a in anchors:
                if not keep.any():
                    break
                keep &= (_e3(G, r1, b1, a) == _e3(G, r2, b2, a)) & (_e3(G, r1, b2, a) == _e3(G, r2, b1, a))
            quads = quads[keep]
            if not len(quads):
                return None
            p = position[quads]
            common = like[p[:, 2]] & like[p[:, 3]] & allowed[None, :]
            common[np.arange(len(p))[:, None], p] = False
            found = common.any(axis=1)
            if not found.any():
                return None
            i = int(np.argmax(found))
            return tuple(int(v) for v in quads[i]) + (int(rest[int(np.argmax(common[i]))]),)

        for index, (L, R, count, allot) in enumerate(plan):
            hit = _probe_bucket(L, R, count, allot, check, seed, ("nine", attempt, index))
            if hit is None:
                continue
            r1, r2, b1, b2, r3 = hit
            greens = tuple(int(rest[int(g)]) for g in tetra)
            nine = (r1, r2, r3, b1, b2) + greens
            logger.info(f"✅ 모순 9-튜플 발견: {nine} (시도 {attempt}, 버킷 쌍 {index})")
            return nine
    logger.info("⚠️ 예산 안에서 모순 9-튜플을 찾지 못했습니다.")
    return None


def check_nine_clauses(G: Hypergraph, Gp: Hypergraph, anchors, nine) -> list:
    """9-튜플 조건 (i)-(iv)를 스칼라 조회로 확인합니다."""
    nine = tuple(int(v) for v in nine)
    anchors = [int(a) for a in _anchor_array(anchors, G.n)]
    if len(set(nine)) != 9 or set(nine) & set(anchors):
        return []
    _, position = _outside(G.n, np.asarray(anchors, dtype=np.int64))
    r1, r2, r3, b1, b2, g1, g2, g3, g4 = (int(position[v]) for v in nine)

    def ep(*t):
        return Gp.get(t) == 1

    passed = ["distinct"]
    if all(ep(*face) for face in combinations((g1, g2, g3, g4), 3)):
        passed.append("tetrahedron")
    if not any(ep(x, g1, g2) for x in (r1, r2, r3, b1, b2)):
        passed.append("exclusion")
    pattern = all(ep(r, b, g1) == ((i, j) not in {(1, 1), (2, 2)})
                  for i, r in enumerate((r1, r2, r3), start=1) for j, b in enumerate((b1, b2), start=1))
    if pattern:
        passed.append("like-pattern")
    o_r1, o_r2, _, o_b1, o_b2 = nine[:5]
    if _e3_symmetric(G, anchors, o_r1, o_r2, o_b1, o_b2):
        passed.append("symmetry")
    if _swap_invariant(G, anchors, (o_r1, o_r2, o_b1, o_b2), (1, 0, 3, 2)):
        passed.append("swap-invariant")
    return passed


def literal_crossed_preferences(G: Hypergraph, Gp: Hypergraph, anchors, nine) -> bool:
    """
    G'에서 순위(ranking) 조건 없는 prefers로 r1은 b2를, r2는 b1을 선호하는지 확인합니다.
    초록 증거는 사면체의 g1, 비초록 증거는 덮이지 않은 초록 쌍 {g1, g2}, 유사성 증거는 r3.
    """
    anchors = _anchor_array(anchors, G.n)
    _, position = _outside(G.n, anchors)
    r1, r2, r3, b1, b2, g1, g2, _, _ = (int(position[int(v)]) for v in nine)

    def ep(*t):
        return Gp.get(t) == 1

    if any(ep(x, g1, g2) for x in (r1, r2, r3, b1, b2)):
        return False
    if not (ep(r3, b1, g1) and ep(r3, b2, g1)):
        return False
    return ep(r1, b2, g1) and not ep(r1, b1, g1) and ep(r2, b1, g1) and not ep(r2, b2, g1)


# ==============================================================================
# 8. 보고서 조립
# ==============================================================================

def obstruction_report(kind: str, G: Hypergraph, Gp: Hypergraph, anchors, witness) -> ObstructionReport:
    """찾은 증거를 독립 검사기로 다시 확인해 보고서를 만듭니다."""
    checkers = {
        "quad": (check_quad_clauses, QUAD_CLAUSES),
        "nine": (check_nine_clauses, NINE_CLAUSES),
    }
    checker, expected = checkers[kind]
    passed = checker(G, Gp, anchors, witness)
    missing = [c for c in expected if c not in passed]
    if missing:
        raise RuntimeError(f"{kind} 증거 {witness}가 재검증에서 실패했습니다: {missing}")
    details = {}
    if kind == "nine":
        literal = literal_crossed_preferences(G, Gp, anchors, witness)
        details = {"relation": "prefers-without-ranking", "literal_crossed_preferences": literal}
        if literal:
            passed.append("literal-crossed-preferences")
    return ObstructionReport(kind=kind, witness=tuple(witness),
                             anchors=tuple(int(a) for a in _anchor_array(anchors, G.n)),
                             checked_conditions=passed, details=details)
