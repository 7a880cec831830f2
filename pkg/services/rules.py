# rules.py
"""
[국소 수정 규칙 담당]
훈련 정점 A와 레벨별 재색칠 함수 f_j로 이루어진 국소 규칙을 표현하고,
수정 사상 T(G), 규칙 적용 T_φ(G), 유한 함의 검증을 수행합니다.

기능 목록:
1. LocalRule / PullbackView: 규칙 표현과 풀백 뷰 (f_j는 풀백만 볼 수 있음)
2. modification_map / apply_rule / recolor_tuples: 규칙 적용
3. verify_entailment_upto: 크기 n_max까지의 전수(또는 표본) 함의 검증
4. Builtin Rules: 항등 복사, 상수, 이분 삭제, 이분 다수결, 앵커 투표, 랜덤 테이블
5. materialize / rule_from_table: 룩업 테이블 변환
"""

import logging
import threading
from math import comb, factorial, prod
from typing import NamedTuple, Optional

import numpy as np

from .config import (
    ENTAILMENT_CEILING,
    ENTAILMENT_CHUNK,
    LOG_LEVEL,
    MAJORITY_EXACT_LIMIT,
    MAJORITY_RANDOM_BIPARTITIONS,
    MAJORITY_TRAINING_SIZE,
    SUBSET_BLOCK,
    TABLE_LIMIT,
)
from .properties import Property, obeys
from core.hypercore import (
    Hypergraph,
    Morphism,
    Palette,
    digit_layout,
    digit_radices,
    local_tuples,
    slot_index,
)
from core.utils import make_rng, mixed_radix_digits, permutation_table, subset_blocks

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


class EntailmentLimitError(ValueError):
    """전수 함의 검증의 입력 개수가 상한을 넘을 때"""

    def __init__(self, count: int, ceiling: int):
        self.count = count
        self.ceiling = ceiling
        super().__init__(f"전수 열거 입력 {count}개가 상한 {ceiling}개를 넘습니다.")


class Counterexample(NamedTuple):
    G: Hypergraph
    n: int
    output: Hypergraph


# ==============================================================================
# 1. 풀백 뷰 (Pullback views)
# ==============================================================================

class _GraphSource:
    """하나의 하이퍼그래프. relabel[i] = 규칙 기준 정점 i의 실제 정점"""

    def __init__(self, G: Hypergraph, relabel: np.ndarray = None):
        self.G = G
        self.relabel = np.arange(G.n, dtype=np.int64) if relabel is None else relabel

    def colors(self, j: int, tuples: np.ndarray, graph_index=None) -> np.ndarray:
        return self.G.colors(j, self.relabel[tuples]).astype(np.int64)


class _DigitSource:
    """숫자열 (B, D)로 주어진 같은 크기 하이퍼그래프 묶음"""

    def __init__(self, digits: np.ndarray, palette: Palette, n: int):
        self.digits = digits
        self.offsets = [offset for offset, _, _ in digit_layout(palette, n)]

    def colors(self, j: int, tuples: np.ndarray, graph_index=None) -> np.ndarray:
        position = self.offsets[j] + slot_index(j, tuples)
        return self.digits[graph_index, position].astype(np.int64)


class PullbackView:
    """
    (하이퍼그래프, 단사 ψ: [a+j] -> V) 묶음을 풀백 하이퍼그래프로 보는 창.
    재색칠 커널은 이 뷰를 통해서만 입력을 읽습니다.
    """

    def __init__(self, source, psi: np.ndarray, a_size: int, graph_index: np.ndarray = None):
        self.source = source
        self.psi = psi
        self.a_size = a_size
        self.graph_index = graph_index

    def __len__(self):
        return len(self.psi)

    def colors_at(self, local) -> np.ndarray:
        """국소 튜플 묶음 (T, l) 의 색 (B, T)"""
        local = np.asarray(local, dtype=np.int64)
        count, (T, l) = len(self.psi), local.shape
        mapped = self.psi[:, local].reshape(count * T, l)
        index = None if self.graph_index is None else np.repeat(self.graph_index, T)
        return self.source.colors(l, mapped, index).reshape(count, T)

    def color(self, local) -> np.ndarray:
        local = tuple(local)
        return self.colors_at(np.asarray([local], dtype=np.int64).reshape(1, len(local)))[:, 0]

    def digits(self, palette: Palette) -> np.ndarray:
        """전체 풀백의 숫자열 (B, D)"""
        m = self.psi.shape[1]
        parts = [self.colors_at(np.zeros((1, 0), dtype=np.int64))]
        for j in range(1, palette.order + 1):
            local = local_tuples(m, j)
            if len(local):
                parts.append(self.colors_at(local))
        return np.concatenate(parts, axis=1).astype(palette.dtype)

    def training_groups(self, palette: Palette) -> tuple:
        """
        훈련 제한 restrict(·, A)의 서로 다른 숫자열과 행별 그룹 번호.
        모든 행이 같은 훈련 집합을 보면 한 번만 계산합니다.
        """
        a = self.a_size
        anchors = self.psi[:, :a]
        shared = (anchors == anchors[:1]).all() and (
            self.graph_index is None or (self.graph_index == self.graph_index[0]).all())
        if shared:
            head = PullbackView(self.source, self.psi[:1, :a], a,
                                None if self.graph_index is None else self.graph_index[:1])
            return head.digits(palette), np.zeros(len(self.psi), dtype=np.int64)
        train = PullbackView(self.source, anchors, a, self.graph_index).digits(palette)
        unique, inverse = np.unique(train, axis=0, return_inverse=True)
        return unique, inverse.reshape(-1)


# ==============================================================================
# 2. 국소 규칙 (LocalRule)
# ==============================================================================

class LocalRule:
    """
    국소 수정 규칙 (A, f_0..f_k).

    f_j는 [a+j] 위의 하이퍼그래프 (훈련 정점 0..a-1, 그 뒤 간선 정점이 튜플 순서대로) 를 받아
    K_j의 색 하나를 돌려줍니다. kernels[j]는 같은 함수를 PullbackView 묶음에 대해 벡터화한 것입니다.

    Args:
        symmetric: 무방향 입력에 대해 항상 무방향 출력을 내는 규칙이면 True
    """

    def __init__(self, name: str, palette: Palette, a_size: int, fns: dict = None,
                 kernels: dict = None, symmetric: bool = False):
        if a_size < 0:
            raise ValueError(f"훈련 집합 크기는 0 이상이어야 합니다: {a_size}")
        self.name = name
        self.palette = palette
        self.a_size = int(a_size)
        self.fns = dict(fns or {})
        self.kernels = dict(kernels or {})
        self.symmetric = symmetric
        missing = [j for j in range(palette.order + 1) if j not in self.fns and j not in self.kernels]
        if missing:
            raise ValueError(f"규칙 '{name}'에 레벨 {missing}의 재색칠 함수가 없습니다.")
        self._memo = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"LocalRule({self.name!r}, a_size={self.a_size})"

    # --- 캐시 ---
    def cached(self, key, compute):
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            self._memo[key] = value
        return value

    def f(self, j: int, H: Hypergraph) -> int:
        """스칼라 재색칠 f_j(H). H는 [a+j] 위의 하이퍼그래프"""
        if H.n != self.a_size + j:
            raise ValueError(f"f_{j}의 입력은 {self.a_size + j}정점이어야 합니다: {H.n}")
        if j in self.fns:
            return int(self.fns[j](H))
        view = PullbackView(_GraphSource(H), np.arange(H.n, dtype=np.int64)[None, :], self.a_size)
        return int(self.kernels[j](view)[0])

    def recolor(self, j: int, view: PullbackView) -> np.ndarray:
        """뷰 묶음의 각 행에 대한 레벨 j 출력 색"""
        if not len(view):
            return np.zeros(0, dtype=np.int64)
        kernel = self.kernels.get(j)
        if kernel is not None:
            return np.asarray(kernel(view), dtype=np.int64)
        # 풀백이 같은 행은 한 번만 계산
        digits = view.digits(self.palette)
        unique, inverse = np.unique(digits, axis=0, return_inverse=True)
        m = self.a_size + j
        values = np.array([
            self.cached((j, row.tobytes()),
                        lambda row=row: int(self.fns[j](Hypergraph.from_digits(self.palette, m, row).freeze())))
            for row in unique
        ], dtype=np.int64)
        return values[inverse.reshape(-1)]


# ==============================================================================
# 3. 규칙 적용 (Applying rules)
# ==============================================================================

def _modify(rule: LocalRule, source, n_out: int, compact: bool) -> Hypergraph:
    a = rule.a_size
    anchors = np.arange(a, dtype=np.int64)
    levels = [rule.recolor(0, PullbackView(source, anchors[None, :], a)).reshape(1, 1)]
    for j in range(1, rule.palette.order + 1):
        squash = compact and j >= 2
        width = 1 if squash else factorial(j)
        out = np.empty((comb(n_out, j), width), dtype=np.int64)
        perms = permutation_table(j)
        for start, subsets in subset_blocks(n_out, j, max(1, SUBSET_BLOCK // width)):
            tuples = subsets if squash else subsets[:, perms].reshape(-1, j)
            psi = np.column_stack([np.broadcast_to(anchors, (len(tuples), a)), a + tuples])
            out[start:start + len(subsets)] = rule.recolor(j, PullbackView(source, psi, a)).reshape(-1, width)
        levels.append(out)
    return Hypergraph(rule.palette, n_out, levels)


def modification_map(rule: LocalRule, G: Hypergraph) -> Hypergraph:
    """
    T(G): 앞의 a_size개 정점을 훈련 집합으로 보고 나머지 정점 위의 하이퍼그래프를 만듭니다.
    """
    if G.palette != rule.palette:
        raise ValueError(f"규칙 '{rule.name}'과 하이퍼그래프의 팔레트가 다릅니다.")
    if G.n < rule.a_size:
        raise ValueError(f"정점 수 {G.n}가 훈련 집합 크기 {rule.a_size}보다 작습니다.")
    compact = rule.symmetric and G.is_undirected()
    return _modify(rule, _GraphSource(G), G.n - rule.a_size, compact)


def _relabel(G: Hypergraph, phi: Morphism, a_size: int) -> np.ndarray:
    if phi.n != G.n:
        raise ValueError(f"사상의 대상 크기 {phi.n}가 정점 수 {G.n}와 다릅니다.")
    if phi.m != a_size:
        raise ValueError(f"사상의 정의역 크기 {phi.m}가 훈련 집합 크기 {a_size}와 다릅니다.")
    image = phi.as_array()
    rest = np.setdiff1d(np.arange(G.n, dtype=np.int64), image)
    return np.concatenate([image, rest])


def apply_rule(rule: LocalRule, G: Hypergraph, phi: Morphism) -> Hypergraph:
    """
    T_φ(G): φ(A)를 앞으로 옮긴 뒤 modification_map을 적용합니다.
    결과 정점은 V \\ φ(A)를 오름차순으로 0..n-a-1에 대응시킨 것입니다.
    """
    if G.palette != rule.palette:
        raise ValueError(f"규칙 '{rule.name}'과 하이퍼그래프의 팔레트가 다릅니다.")
    relabel = _relabel(G, phi, rule.a_size)
    compact = rule.symmetric and G.is_undirected()
    return _modify(rule, _GraphSource(G, relabel), G.n - rule.a_size, compact)


def recolor_tuples(rule: LocalRule, G: Hypergraph, phi: Morphism, j: int, tuples) -> np.ndarray:
    """
    T_φ(G)의 레벨 j 색을 지정한 출력 튜플에서만 계산합니다.
    tuples는 출력 정점 번호(V \\ φ(A)의 오름차순 번호)로 씁니다.
    """
    relabel = _relabel(G, phi, rule.a_size)
    a = rule.a_size
    tuples = np.asarray(tuples, dtype=np.int64).reshape(-1, j)
    if tuples.size and (tuples.min() < 0 or tuples.max() >= G.n - a):
        raise ValueError("출력 튜플의 정점이 범위를 벗어났습니다.")
    psi = np.column_stack([np.broadcast_to(np.arange(a), (len(tuples), a)), a + tuples])
    return rule.recolor(j, PullbackView(_GraphSource(G, relabel), psi, a))


def _modify_digits(rule: LocalRule, digits: np.ndarray, nv: int) -> np.ndarray:
    """숫자열 묶음 (B, D) 입력 각각의 T(G) 숫자열"""
    a = rule.a_size
    count = len(digits)
    source = _DigitSource(digits, rule.palette, a + nv)
    graphs = np.arange(count, dtype=np.int64)
    anchors = np.arange(a, dtype=np.int64)
    parts = [rule.recolor(0, PullbackView(source, np.broadcast_to(anchors, (count, a)), a, graphs))[:, None]]
    for j in range(1, rule.palette.order + 1):
        local = local_tuples(nv, j)
        T = len(local)
        if not T:
            continue
        psi = np.column_stack([np.broadcast_to(anchors, (count * T, a)), a + np.tile(local, (count, 1))])
        view = PullbackView(source, psi, a, np.repeat(graphs, T))
        parts.append(rule.recolor(j, view).reshape(count, T))
    return np.concatenate(parts, axis=1).astype(rule.palette.dtype)


def entailment_count(rule: LocalRule, n_max: int) -> int:
    """크기 0..n_max 입력 하이퍼그래프의 총 개수"""
    return sum(prod(int(r) for r in digit_radices(rule.palette, rule.a_size + nv)) for nv in range(n_max + 1))


def _first_violation(rule: LocalRule, P: Property, digits: np.ndarray, nv: int, memo: dict):
    outputs = _modify_digits(rule, digits, nv)
    unique, inverse = np.unique(outputs, axis=0, return_inverse=True)
    bad = np.zeros(len(unique), dtype=bool)
    for i, row in enumerate(unique):
        key = row.tobytes()
        if key not in memo:
            memo[key] = obeys(P, Hypergraph.from_digits(P.palette, nv, row))
        bad[i] = not memo[key]
    hits = np.flatnonzero(bad[inverse.reshape(-1)])
    if not hits.size:
        return None
    row = hits[0]
    return Counterexample(Hypergraph.from_digits(rule.palette, rule.a_size + nv, digits[row]), nv,
                          Hypergraph.from_digits(P.palette, nv, outputs[row]))


def verify_entailment_upto(rule: LocalRule, P: Property, n_max: int, mode: str = "exhaustive",
                           samples: int = 10_000, seed: int = 0,
                           ceiling: int = ENTAILMENT_CEILING) -> Optional[Counterexample]:
    """
    |V| = 0..n_max 인 모든 입력(또는 표본)에 대해 obeys(P, T(G))를 확인합니다.

    Args:
        mode: "exhaustive" 또는 "mc"
        samples: mc 모드에서 크기별 표본 수
    Returns:
        첫 번째 반례 Counterexample(G, |V|, T(G)) 또는 None
    Raises:
        EntailmentLimitError: 전수 모드 입력 개수가 ceiling을 넘는 경우
    """
    if rule.palette != P.palette:
        raise ValueError(f"규칙 '{rule.name}'과 속성 '{P.name}'의 팔레트가 다릅니다.")
    if mode not in ("exhaustive", "mc"):
        raise ValueError(f"알 수 없는 모드입니다: {mode}")
    if mode == "exhaustive":
        count = entailment_count(rule, n_max)
        if count > ceiling:
            raise EntailmentLimitError(count, ceiling)
        logger.info(f"🚀 함의 전수 검증 시작 (rule={rule.name}, property={P.name}, n_max={n_max}, inputs={count})")

    memo = {}
    for nv in range(n_max + 1):
        radices = digit_radices(rule.palette, rule.a_size + nv)
        if mode == "exhaustive":
            total = prod(int(r) for r in radices)
            for start in range(0, total, ENTAILMENT_CHUNK):
                codes = np.arange(start, min(total, start + ENTAILMENT_CHUNK), dtype=np.int64)
                found = _first_violation(rule, P, mixed_radix_digits(codes, radices), nv, memo)
                if found is not None:
                    logger.info(f"⚠️ 함의 반례 발견 (|V|={nv})")
                    return found
        else:
            rng = make_rng(seed, "entail", nv)
            for start in range(0, samples, ENTAILMENT_CHUNK):
                size = min(ENTAILMENT_CHUNK, samples - start)
                digits = rng.integers(0, radices, size=(size, radices.size))
                found = _first_violation(rule, P, digits, nv, memo)
                if found is not None:
                    logger.info(f"⚠️ 함의 반례 발견 (|V|={nv}, seed={seed})")
                    return found
    logger.info(f"✅ 반례 없음 (rule={rule.name}, property={P.name}, n_max={n_max})")
    return None


# ==============================================================================
# 4. 내장 규칙 (Builtin Rules)
# ==============================================================================

def rule_identity_copy(palette: Palette, a_size: int = 0) -> LocalRule:
    """각 간선의 기존 색을 그대로 복사 (T(G) = restrict(G, V))"""
    def make(j):
        return lambda view: view.color(range(a_size, a_size + j))
    kernels = {j: make(j) for j in range(palette.order + 1)}
    return LocalRule("identity-copy", palette, a_size, kernels=kernels, symmetric=True)


def rule_constant(palette: Palette, color: int = 0, a_size: int = 0) -> LocalRule:
    def make(j):
        value = min(color, palette.sizes[j] - 1)
        return lambda view: np.full(len(view), value, dtype=np.int64)
    kernels = {j: make(j) for j in range(palette.order + 1)}
    return LocalRule(f"constant-{color}", palette, a_size, kernels=kernels, symmetric=True)


def rule_bipartite_delete() -> LocalRule:
    """
    훈련 정점 하나(0)를 기준으로 방향 간선 (v, w)를
    G(v, w) = G(w, 0) = 1 이고 G(v, 0) = 0 일 때만 남깁니다.
    """
    palette = Palette.graph()

    def edge(view):
        # 국소 번호: 0 = 훈련 정점, 1 = v, 2 = w
        keep = (view.color((1, 2)) == 1) & (view.color((2, 0)) == 1) & (view.color((1, 0)) == 0)
        return keep.astype(np.int64)

    copy = rule_identity_copy(palette, 1).kernels
    return LocalRule("bipartite-delete", palette, 1, kernels={0: copy[0], 1: copy[1], 2: edge})


def rule_anchor_vote(a_size: int = 5) -> LocalRule:
    """
    전순서 복구용 국소 규칙: v 앞에 오는 앵커 수가 w보다 적으면 v < w.
    같으면 기존 G(v, w)를 유지합니다.
    """
    palette = Palette.graph()

    def edge(view):
        a = a_size
        before = np.array([(u, a) for u in range(a)] + [(u, a + 1) for u in range(a)], dtype=np.int64)
        votes = view.colors_at(before.reshape(-1, 2)) if a else np.zeros((len(view), 0), dtype=np.int64)
        score_v, score_w = votes[:, :a].sum(axis=1), votes[:, a:].sum(axis=1)
        return np.where(score_v == score_w, view.color((a, a + 1)), (score_v < score_w).astype(np.int64))

    copy = rule_identity_copy(palette, a_size).kernels
    return LocalRule(f"anchor-vote-{a_size}", palette, a_size, kernels={0: copy[0], 1: copy[1], 2: edge})


# --- 랜덤 테이블 규칙 ---
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix64(x: np.ndarray) -> np.ndarray:
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def rule_random_table(palette: Palette, a_size: int = 3, seed: int = 0) -> LocalRule:
    """
    풀백 숫자열의 해시로 색을 정하는 결정적 의사난수 규칙 (규칙 집합을 무작위로 고를 때 사용).
    """
    salt = int(make_rng(seed, "random-table").integers(0, 1 << 63))

    def make(j):
        def kernel(view):
            digits = view.digits(palette)
            radices = digit_radices(palette, a_size + j).astype(np.uint64)
            code = np.zeros(len(view), dtype=np.uint64)
            with np.errstate(over="ignore"):
                for i in range(digits.shape[1]):
                    code = code * radices[i] + digits[:, i].astype(np.uint64)
                mixed = _splitmix64(code ^ np.uint64(salt) ^ np.uint64(j))
            return (mixed % np.uint64(palette.sizes[j])).astype(np.int64)
        return kernel

    kernels = {j: make(j) for j in range(palette.order + 1)}
    return LocalRule(f"random-table-{seed}", palette, a_size, kernels=kernels)


# --- 이분 다수결 규칙 ---
def _fit_bipartition(A: np.ndarray, seed: int) -> np.ndarray:
    """
    훈련 그래프 A와의 대칭차가 가장 작은 완전 이분 분할 (A_1, A_2)를 찾습니다.
    지시 벡터 x (x_u = 1 이면 A_2) 중 사전식 최소를 고르므로 항상 x_0 = 0입니다.
    """
    a = len(A)
    if a <= 1:
        return np.zeros(a, dtype=np.int64)
    # 대칭차 최소화 == σ^T W σ 최대화 (σ = 1 - 2x, W = 1 - A - A^T, 대각선 0)
    A = A.astype(np.int64)
    W = 1 - A - A.T
    np.fill_diagonal(W, 0)

    if a <= MAJORITY_EXACT_LIMIT:
        best_q, best = None, None
        total = 1 << (a - 1)
        for start in range(0, total, 1 << 16):
            codes = np.arange(start, min(total, start + (1 << 16)), dtype=np.int64)
            x = np.column_stack([np.zeros(len(codes), dtype=np.int64), mixed_radix_digits(codes, [2] * (a - 1))])
            s = 1 - 2 * x
            q = ((s @ W) * s).sum(axis=1)
            i = int(np.argmax(q))
            if best_q is None or q[i] > best_q:
                best_q, best = q[i], x[i]
        return best

    rng = make_rng(seed, "majority-fit", a)
    x = rng.integers(0, 2, size=(MAJORITY_RANDOM_BIPARTITIONS, a))
    x ^= x[:, :1]
    s = 1 - 2 * x
    q = ((s @ W) * s).sum(axis=1)
    top = x[q == q.max()]
    best = top[np.lexsort(top.T[::-1])[0]]

    # 한 정점씩 옮겨서 더 좋아지지 않을 때까지 개선
    s = 1 - 2 * best
    while True:
        gain = -4 * s * (W @ s)
        i = int(np.argmax(gain))
        if gain[i] <= 0:
            break
        s[i] = -s[i]
    best = (1 - s) // 2
    return best ^ best[0]


def rule_bipartite_majority(a_size: int = MAJORITY_TRAINING_SIZE, seed: int = 0) -> LocalRule:
    """
    훈련 집합에서 가장 잘 맞는 완전 이분 분할 (A_1, A_2)를 구하고,
    간선 정점을 A_2와 더 많이 연결되면 V_1, 아니면 V_2로 분류한 뒤
    두 정점의 분류가 다를 때만 간선을 둡니다.
    """
    palette = Palette.graph()
    a = a_size
    rule = None

    def edge(view):
        groups, inverse = view.training_groups(palette)
        sides = np.stack([
            rule.cached(("fit", row.tobytes()),
                        lambda row=row: _fit_bipartition(
                            Hypergraph.from_digits(palette, a, row).adjacency(), seed))
            for row in groups
        ]) if a else np.zeros((1, 0), dtype=np.int64)
        side = sides[inverse]
        classes = []
        for x in (a, a + 1):
            links = view.colors_at(np.array([(u, x) for u in range(a)], dtype=np.int64).reshape(-1, 2))
            to_second = (links * side).sum(axis=1)
            to_first = (links * (1 - side)).sum(axis=1)
            classes.append(to_second > to_first)
        return (classes[0] != classes[1]).astype(np.int64)

    copy = rule_identity_copy(palette, a).kernels
    rule = LocalRule(f"bipartite-majority-{a}", palette, a, kernels={0: copy[0], 1: copy[1], 2: edge},
                     symmetric=True)
    return rule


# ==============================================================================
# 5. 룩업 테이블 (Lookup tables)
# ==============================================================================

def materialize(rule: LocalRule) -> dict:
    """
    규칙을 {레벨 j: {풀백 숫자열 bytes: 출력 색}} 테이블로 펼칩니다.

    Raises:
        ValueError: 어떤 레벨의 풀백 개수가 TABLE_LIMIT를 넘는 경우
    """
    table = {}
    for j in range(rule.palette.order + 1):
        m = rule.a_size + j
        radices = digit_radices(rule.palette, m)
        total = prod(int(r) for r in radices)
        if total > TABLE_LIMIT:
            raise ValueError(f"레벨 {j} 풀백 {total}개는 테이블 한도 {TABLE_LIMIT}를 넘습니다.")
        digits = mixed_radix_digits(np.arange(total, dtype=np.int64), radices)
        psi = np.broadcast_to(np.arange(m, dtype=np.int64), (total, m))
        view = PullbackView(_DigitSource(digits, rule.palette, m), psi, rule.a_size,
                            np.arange(total, dtype=np.int64))
        values = rule.recolor(j, view)
        keys = digits.astype(rule.palette.dtype)
        table[j] = {row.tobytes(): int(v) for row, v in zip(keys, values)}
    return table


def rule_from_table(palette: Palette, a_size: int, table: dict, name: str = "table") -> LocalRule:
    for j in range(palette.order + 1):
        if j not in table:
            raise ValueError(f"테이블에 레벨 {j}가 없습니다.")

    def make(j):
        entries = table[j]

        def kernel(view):
            digits = view.digits(palette)
            unique, inverse = np.unique(digits, axis=0, return_inverse=True)
            try:
                values = np.array([entries[row.tobytes()] for row in unique], dtype=np.int64)
            except KeyError:
                raise ValueError(f"테이블 규칙 '{name}'에 없는 레벨 {j} 풀백입니다.") from None
            return values[inverse.reshape(-1)]
        return kernel

    return LocalRule(name, palette, a_size, kernels={j: make(j) for j in range(palette.order + 1)})


# ==============================================================================
# 6. 규칙 레지스트리
# ==============================================================================

BUILTIN_RULES = ("identity-copy", "constant", "bipartite-delete", "bipartite-majority",
                 "anchor-vote", "random-table")


def get_builtin_rule(name: str, palette: Palette = None, a_size: int = None, seed: int = 0,
                     color: int = 0) -> Optional[LocalRule]:
    """
    이름으로 내장 규칙을 만듭니다. palette 기본값은 방향 그래프 팔레트입니다.

    Returns:
        LocalRule 또는 None (등록되지 않은 이름)
    """
    palette = palette or Palette.graph()
    rule_map = {
        "identity-copy": lambda: rule_identity_copy(palette, 0 if a_size is None else a_size),
        "constant": lambda: rule_constant(palette, color, 0 if a_size is None else a_size),
        "bipartite-delete": rule_bipartite_delete,
        "bipartite-majority": lambda: rule_bipartite_majority(
            MAJORITY_TRAINING_SIZE if a_size is None else a_size, seed),
        "anchor-vote": lambda: rule_anchor_vote(5 if a_size is None else a_size),
        "random-table": lambda: rule_random_table(palette, 3 if a_size is None else a_size, seed),
    }
    builder = rule_map.get(name)
    return builder() if builder else None
