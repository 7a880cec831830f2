# properties.py
"""
[유전 속성 및 국소 만족도 테스트 담당]
금지 유도 부분하이퍼그래프 목록(또는 술어)으로 주어진 유전 속성을 표현하고,
표본 부분하이퍼그래프가 속성을 만족하는 비율(국소 만족도)을 계산합니다.

기능 목록:
1. Property / TesterParams / Estimate: 속성과 테스터 파라미터
2. find_embedding / obeys: 유도 포함 탐색과 만족 여부
3. local_satisfaction: 정확(전수) / 몬테카를로 모드
4. distance: k-부분집합 기준 하이퍼그래프 거리
5. find_monochromatic / ramsey_scan: 램지 탐색
6. check_meet_closed / audit_hereditary: 약단조성 및 유전성 점검
"""

import logging
import threading
from itertools import combinations, permutations
from math import comb, prod
from typing import Callable, NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, Field

from .config import (
    AUDIT_SAMPLE_COUNT,
    EMBED_BLOCK,
    HEDRA_THREADS,
    LOG_LEVEL,
    MC_SHARD,
    MEET_ENUM_LIMIT,
    MEET_SAMPLE_COUNT,
    SUBSET_BLOCK,
)
from core.hypercore import (
    Hypergraph,
    Morphism,
    Palette,
    compact_expansion,
    compact_radices,
    digit_radices,
    meet_digits,
    pullback_digits,
    restrict,
)
from core.formats import read_hgp
from core.utils import (
    colex_rank,
    make_rng,
    mixed_radix_digits,
    run_sharded,
    sample_injections,
    subset_blocks,
)

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


# ==============================================================================
# 1. 데이터 모델 (Data Models)
# ==============================================================================

class Property:
    """
    유전 속성. 금지 목록(forbidden) 또는 술어(predicate) 중 정확히 하나를 가집니다.

    Args:
        name: 속성 이름
        palette: 속성이 정의된 팔레트
        forbidden: 금지 유도 부분하이퍼그래프 목록
        predicate: Hypergraph -> bool (유전성 계약은 audit_hereditary로 점검)
        undirected_only: 무방향 하이퍼그래프만 만족할 수 있는 속성이면 True
    """

    def __init__(self, name: str, palette: Palette, forbidden=None,
                 predicate: Callable = None, undirected_only: bool = False):
        if (forbidden is None) == (predicate is None):
            raise ValueError("forbidden과 predicate 중 정확히 하나만 지정해야 합니다.")
        self.name = name
        self.palette = palette
        self.predicate = predicate
        self.undirected_only = undirected_only
        self.forbidden = None
        if forbidden is not None:
            members = list(forbidden)
            for member in members:
                if member.palette != palette:
                    raise ValueError(f"금지 목록의 팔레트가 속성 '{name}'의 팔레트와 다릅니다.")
            # 큰 구성원부터 탐색
            members.sort(key=lambda F: -F.n)
            self.forbidden = [member.freeze() for member in members]

    @classmethod
    def load(cls, path) -> "Property":
        """HGP v1 파일에서 금지 목록 속성을 읽습니다."""
        name, palette, members = read_hgp(path)
        return cls(name, palette, forbidden=members)

    @property
    def is_forbidden_family(self) -> bool:
        return self.forbidden is not None

    def __repr__(self):
        body = f"forbidden={len(self.forbidden)}" if self.is_forbidden_family else "predicate"
        return f"Property({self.name!r}, {body})"


def load_property(path) -> Property:
    P = Property.load(path)
    logger.info(f"✅ 속성 '{P.name}' 로드 완료 (금지 구성원 {len(P.forbidden)}개)")
    return P


class TesterParams(BaseModel):
    """국소 만족도 테스트 파라미터"""
    N: int = Field(..., ge=1, description="표본 부분하이퍼그래프 크기")
    delta: float = Field(0.0, ge=0.0, le=1.0)
    epsilon: float = Field(0.0, ge=0.0, le=1.0)
    sample_count: int = Field(1000, ge=1)
    seed: int = Field(0, ge=0, lt=1 << 64)


class Estimate(NamedTuple):
    value: float
    stderr: float
    samples: int


class _ObeysCache:
    """숫자열 키 -> obeys 결과. 샤드 스레드가 함께 씁니다."""

    def __init__(self, prop: Property, n: int):
        self.prop = prop
        self.n = n
        self._memo = {}
        self._lock = threading.Lock()

    def __call__(self, digits: np.ndarray) -> bool:
        key = digits.tobytes()
        with self._lock:
            hit = self._memo.get(key)
        if hit is None:
            G = Hypergraph.from_digits(self.prop.palette, self.n, digits).freeze()
            hit = obeys(self.prop, G)
            with self._lock:
                self._memo[key] = hit
        return hit


# ==============================================================================
# 2. 유도 포함 탐색 (Induced containment)
# ==============================================================================

def _depth_checks(F: Hypergraph, depth: int) -> list:
    """정점 depth를 새로 배정할 때 확인할 (레벨, 튜플, F의 색) 목록"""
    checks = []
    for j in range(2, min(F.order, depth + 1) + 1):
        tuples = [p for rest in combinations(range(depth), j - 1) for p in permutations(rest + (depth,))]
        tuples = np.asarray(tuples, dtype=np.int64).reshape(-1, j)
        checks.append((j, tuples, F.colors(j, tuples)))
    return checks


def _extend(G: Hypergraph, partial: np.ndarray, depth: int, checks: list, candidates: list):
    if depth == len(candidates):
        return partial[0]
    cand = candidates[depth]
    step = max(1, EMBED_BLOCK // max(1, len(cand)))
    for start in range(0, len(partial), step):
        block = partial[start:start + step]
        grown = np.column_stack([np.repeat(block, len(cand), axis=0), np.tile(cand, len(block))])
        if depth:
            grown = grown[(grown[:, :depth] != grown[:, depth:]).all(axis=1)]
        for j, tuples, want in checks[depth]:
            if not len(grown):
                break
            got = G.colors(j, grown[:, tuples].reshape(-1, j)).reshape(len(grown), len(tuples))
            grown = grown[(got == want).all(axis=1)]
        if len(grown):
            found = _extend(G, grown, depth + 1, checks, candidates)
            if found is not None:
                return found
    return None


def find_embedding(F: Hypergraph, G: Hypergraph) -> Optional[Morphism]:
    """
    pullback(G, φ) = F 인 단사 φ: [m] -> [n] 중 사전식으로 가장 작은 것을 찾습니다.
    레벨 1 색의 다중집합으로 먼저 가지치기합니다.
    """
    if F.palette != G.palette:
        raise ValueError("유도 포함 탐색은 같은 팔레트에서만 가능합니다.")
    if F.n > G.n or F.color0 != G.color0:
        return None
    first_f, first_g = F.level1.astype(np.int64), G.level1.astype(np.int64)
    if F.order >= 1:
        size = F.palette.sizes[1]
        if (np.bincount(first_f, minlength=size) > np.bincount(first_g, minlength=size)).any():
            return None
    if F.n == 0:
        return Morphism((), G.n)

    candidates = [np.flatnonzero(first_g == first_f[i]) for i in range(F.n)]
    checks = [_depth_checks(F, i) for i in range(F.n)]
    found = _extend(G, np.empty((1, 0), dtype=np.int64), 0, checks, candidates)
    return None if found is None else Morphism(found, G.n)


def obeys(P: Property, G: Hypergraph) -> bool:
    """G가 속성 P를 만족하는지 판정합니다."""
    if P.palette != G.palette:
        raise ValueError(f"속성 '{P.name}'의 팔레트와 하이퍼그래프의 팔레트가 다릅니다.")
    if not P.is_forbidden_family:
        return bool(P.predicate(G))
    return all(find_embedding(F, G) is None for F in P.forbidden)


# ==============================================================================
# 3. 국소 만족도 (Local satisfaction)
# ==============================================================================

def _count_obeying(cache: _ObeysCache, G: Hypergraph, subsets: np.ndarray) -> int:
    digits = pullback_digits(G, subsets)
    unique, counts = np.unique(digits, axis=0, return_counts=True)
    return int(sum(c for row, c in zip(unique, counts) if cache(row)))


def satisfaction_over(P: Property, G: Hypergraph, subsets) -> Estimate:
    """주어진 N-부분집합 목록 위에서의 만족 비율 (몬테카를로 추정기의 본체)"""
    subsets = np.sort(np.asarray(subsets, dtype=np.int64), axis=1)
    cache = _ObeysCache(P, subsets.shape[1])
    total = len(subsets)
    hits = _count_obeying(cache, G, subsets) if total else 0
    p = hits / total if total else 1.0
    return Estimate(p, float(np.sqrt(p * (1 - p) / total)) if total else 0.0, total)


def local_satisfaction(P: Property, G: Hypergraph, N: int, mode: str = "exact",
                       sample_count: int = 1000, seed: int = 0) -> Estimate:
    """
    N-정점 부분하이퍼그래프가 P를 만족하는 비율을 계산합니다.

    Args:
        mode: "exact" (모든 C(n, N) 부분집합, colex 순서) 또는 "mc" (균등 표본)
        sample_count: mc 모드 표본 수
        seed: mc 모드 시드 (샤드 i는 (seed, "mc", i) 스트림 사용)
    Returns:
        Estimate: (비율, 표준오차, 표본 수). exact 모드의 표준오차는 0
    Raises:
        ValueError: N < 1, N > n, 또는 알 수 없는 mode
    """
    if P.palette != G.palette:
        raise ValueError(f"속성 '{P.name}'의 팔레트와 하이퍼그래프의 팔레트가 다릅니다.")
    if N < 1:
        raise ValueError(f"표본 크기 N은 1 이상이어야 합니다: {N}")
    if N > G.n:
        raise ValueError(f"표본 크기 N={N}이(가) 정점 수 n={G.n}보다 큽니다.")
    cache = _ObeysCache(P, N)

    if mode == "exact":
        total = comb(G.n, N)
        # 금지 목록 속성은 유전적이므로 전체가 만족하면 모든 부분도 만족
        if P.is_forbidden_family and obeys(P, G):
            return Estimate(1.0, 0.0, total)
        step = max(1, SUBSET_BLOCK // max(1, N))
        hits, batch = 0, []
        for _, subsets in subset_blocks(G.n, N, step):
            batch.append((subsets,))
            if len(batch) == HEDRA_THREADS:
                hits += sum(run_sharded(lambda s: _count_obeying(cache, G, s), batch))
                batch = []
        hits += sum(run_sharded(lambda s: _count_obeying(cache, G, s), batch))
        return Estimate(hits / total, 0.0, total)

    if mode == "mc":
        if sample_count < 1:
            raise ValueError(f"표본 수는 1 이상이어야 합니다: {sample_count}")
        logger.info(f"🚀 몬테카를로 국소 만족도 시작 (n={G.n}, N={N}, samples={sample_count}, seed={seed})")

        def shard(index: int, count: int) -> int:
            rng = make_rng(seed, "mc", index)
            subsets = np.sort(sample_injections(rng, G.n, N, count), axis=1)
            return _count_obeying(cache, G, subsets)

        jobs = [(i, min(MC_SHARD, sample_count - start))
                for i, start in enumerate(range(0, sample_count, MC_SHARD))]
        hits = sum(run_sharded(shard, jobs))
        p = hits / sample_count
        return Estimate(p, float(np.sqrt(p * (1 - p) / sample_count)), sample_count)

    raise ValueError(f"알 수 없는 모드입니다: {mode}")


def run_tester(P: Property, G: Hypergraph, params: TesterParams, mode: str = "exact") -> dict:
    """파라미터 모델로 국소 만족도를 계산하고 보고서 딕셔너리를 만듭니다."""
    estimate = local_satisfaction(P, G, params.N, mode, params.sample_count, params.seed)
    return {
        "property": P.name,
        "n": G.n,
        "N": params.N,
        "mode": mode,
        "seed": params.seed,
        "samples": estimate.samples,
        "fraction": estimate.value,
        "stderr": estimate.stderr,
        "locally_obeys": estimate.value >= 1.0 - params.delta,
    }


# ==============================================================================
# 4. 거리 (Distance)
# ==============================================================================

def distance(G: Hypergraph, H: Hypergraph) -> float:
    """
    restrict(G, W) != restrict(H, W) 인 k-부분집합 W의 비율 (k = 팔레트 차수).
    n < k 이면 두 하이퍼그래프가 같을 때 0, 다르면 1입니다.
    """
    if G.palette != H.palette or G.n != H.n:
        raise ValueError("거리는 같은 팔레트, 같은 정점 수에서만 정의됩니다.")
    k, n = G.order, G.n
    if n < k:
        return 0.0 if G == H else 1.0
    if G.color0 != H.color0:
        return 1.0
    if k == 0:
        return 0.0

    # 레벨별로 "이 j-부분집합의 어떤 순서라도 색이 다르다" 플래그
    differs = []
    for j in range(1, k + 1):
        a, b = G.levels[j], H.levels[j]
        width = max(a.shape[1], b.shape[1])
        a = np.broadcast_to(a, (a.shape[0], width))
        b = np.broadcast_to(b, (b.shape[0], width))
        differs.append((a != b).any(axis=1))

    bad = 0
    for _, subsets in subset_blocks(n, k):
        hit = np.zeros(len(subsets), dtype=bool)
        for j in range(1, k + 1):
            for cols in combinations(range(k), j):
                hit |= differs[j - 1][colex_rank(subsets[:, cols])]
        bad += int(hit.sum())
    return bad / comb(n, k)


# ==============================================================================
# 5. 램지 탐색 (Ramsey search)
# ==============================================================================

def find_monochromatic(G: Hypergraph, n_target: int) -> Optional[tuple]:
    """
    레벨 1 색과 레벨 2 색이 각각 모두 같은 n_target-부분집합을 colex 순서로 처음 찾습니다.

    Raises:
        ValueError: 방향 하이퍼그래프이거나 차수가 2보다 큰 경우
    """
    if G.order > 2:
        raise ValueError("find_monochromatic은 차수 2 이하에서만 지원합니다.")
    if not G.is_undirected():
        raise ValueError("find_monochromatic은 무방향 하이퍼그래프만 받습니다.")
    if n_target > G.n:
        return None
    if n_target <= 1:
        return tuple(range(n_target))

    first = G.level1
    pairs = list(combinations(range(n_target), 2))
    for _, subsets in subset_blocks(G.n, n_target):
        shade = first[subsets]
        mono = (shade == shade[:, :1]).all(axis=1)
        if G.order == 2:
            edge = np.column_stack([G.levels[2][colex_rank(subsets[:, list(p)]), 0] for p in pairs])
            mono &= (edge == edge[:, :1]).all(axis=1)
        hits = np.flatnonzero(mono)
        if hits.size:
            return tuple(int(v) for v in subsets[hits[0]])
    return None


def ramsey_scan(n: int, target: int, block: int = 1 << 14) -> Optional[Hypergraph]:
    """
    K_n의 모든 2-색칠(2^C(n,2)개)을 훑어 단색 target-클리크가 없는 색칠을 찾습니다.
    모든 색칠에 단색 클리크가 있으면 None (예: R(3,3) = 6).
    """
    edges = comb(n, 2)
    if edges > 40:
        raise ValueError(f"K_{n}의 색칠 2^{edges}개는 전수 탐색 범위를 넘습니다.")
    if target < 2 or target > n:
        raise ValueError(f"목표 클리크 크기는 2..{n} 이어야 합니다: {target}")

    cliques = np.asarray(list(combinations(range(n), target)), dtype=np.int64)
    pair_cols = np.asarray(list(combinations(range(target), 2)), dtype=np.int64)
    # 클리크별 간선의 colex 순위 (Q, e)
    clique_edges = np.stack([colex_rank(cliques[:, list(p)]) for p in pair_cols], axis=1)
    shifts = np.arange(edges, dtype=np.int64)

    logger.info(f"🚀 램지 전수 탐색 시작 (n={n}, target={target}, colorings={1 << edges})")
    for start in range(0, 1 << edges, block):
        codes = np.arange(start, min(1 << edges, start + block), dtype=np.int64)
        bits = ((codes[:, None] >> shifts) & 1).astype(bool)
        sub = bits[:, clique_edges]
        mono = (sub.all(axis=2) | ~sub.any(axis=2)).any(axis=1)
        free = np.flatnonzero(~mono)
        if free.size:
            code = bits[free[0]]
            logger.info(f"✅ 단색 클리크 없는 색칠 발견 (code={int(codes[free[0]])})")
            return Hypergraph(Palette.graph(), n, [np.zeros((1, 1)), np.zeros((n, 1)),
                                                  code.astype(np.int64).reshape(-1, 1)])
    logger.info(f"✅ 모든 색칠에 단색 {target}-클리크가 있습니다.")
    return None


# ==============================================================================
# 6. 약단조성 / 유전성 점검 (Meet closure, heredity audit)
# ==============================================================================

def _obeying_digits(P: Property, n: int, rng: np.random.Generator) -> tuple:
    """크기 n에서 P를 만족하는 숫자열 목록과 전수 여부"""
    palette = P.palette
    if P.undirected_only:
        radices, expand = compact_radices(palette, n), compact_expansion(palette, n)
    else:
        radices, expand = digit_radices(palette, n), None
    total = prod(int(r) for r in radices)
    exhaustive = total <= MEET_ENUM_LIMIT
    if exhaustive:
        digits = mixed_radix_digits(np.arange(total, dtype=np.int64), radices)
    else:
        digits = rng.integers(0, radices, size=(MEET_SAMPLE_COUNT, radices.size))
    if expand is not None:
        digits = digits[:, expand]
    cache = _ObeysCache(P, n)
    keep = [row for row in digits.astype(palette.dtype) if cache(row)]
    rows = np.asarray(keep, dtype=np.int64).reshape(len(keep), -1)
    return rows, exhaustive, cache


def check_meet_closed(P: Property, bound: int, seed: int = 0) -> Optional[tuple]:
    """
    P를 만족하는 G, G' 중 meet(G, G')가 P를 위반하는 쌍을 찾습니다.
    크기별로 전수 열거가 MEET_ENUM_LIMIT 이하이면 전수, 아니면 시드 고정 랜덤 표본을 씁니다.

    Returns:
        (G, G') 또는 None
    """
    if not P.palette.is_ordered:
        raise ValueError("순서 지정이 없는 팔레트의 속성은 만남 닫힘을 검사할 수 없습니다.")
    rng = make_rng(seed, "meet-closed")
    for n in range(bound + 1):
        rows, exhaustive, cache = _obeying_digits(P, n, rng)
        logger.debug(f"n={n}: 만족 {len(rows)}개 ({'전수' if exhaustive else '표본'})")
        for i in range(len(rows)):
            meets = meet_digits(P.palette, n, rows[i:i + 1], rows[i + 1:])
            for offset, row in enumerate(meets.astype(P.palette.dtype)):
                if not cache(row):
                    G = Hypergraph.from_digits(P.palette, n, rows[i])
                    H = Hypergraph.from_digits(P.palette, n, rows[i + 1 + offset])
                    logger.info(f"⚠️ 만남 닫힘 반례 발견 (n={n})")
                    return G, H
    return None


def audit_hereditary(P: Property, G: Hypergraph, samples: int = AUDIT_SAMPLE_COUNT,
                     seed: int = 0) -> Optional[tuple]:
    """
    obeys(P, G)인데 obeys(P, restrict(G, W))가 거짓인 W를 무작위로 찾습니다.
    술어 속성의 유전성 계약을 점검하는 용도입니다.
    """
    if not obeys(P, G):
        return None
    rng = make_rng(seed, "audit")
    for _ in range(samples):
        size = int(rng.integers(0, G.n + 1))
        W = tuple(sorted(int(v) for v in rng.choice(G.n, size=size, replace=False)))
        if not obeys(P, restrict(G, W)):
            logger.warning(f"⚠️ 속성 '{P.name}'의 유전성 위반: W={W}")
            return W
    return None
