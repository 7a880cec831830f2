# hypercore.py
"""
[하이퍼그래프 핵심 자료구조]
색이 칠해진 방향성/비균일 하이퍼그래프를 저장하고 다루는 기반 모듈입니다.

저장 방식:
- 레벨 j의 색은 (C(n, j), j!) 배열에 저장합니다.
  행 = 정점 부분집합의 colex 순위, 열 = 그 부분집합 순서쌍의 순열(사전식) 순위
- 무방향 하이퍼그래프는 (C(n, j), 1) 압축 배열을 쓸 수 있으며 인터페이스는 동일합니다.

기능 목록:
1. Palette: 레벨별 색 집합 및 (선택) 부분순서 / 만남(meet) 테이블
2. Morphism: 정점 집합 사이의 단사 사상
3. Hypergraph: 색 저장소, 벡터화 조회/기록, 숫자열(digits) 인코딩
4. Operations: 풀백, 제한, 무방향 검사, 만남, 분할(partite) 동치
"""

import logging
from itertools import permutations
from math import comb, factorial

import networkx as nx
import numpy as np

from services.config import LOG_LEVEL
from core.utils import (
    colex_rank,
    colex_unrank,
    make_rng,
    ordering_pattern,
    perm_rank,
    permutation_table,
    subset_blocks,
)

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


# ==============================================================================
# 1. 팔레트 (Palette)
# ==============================================================================

def _meet_table(size: int, pairs) -> np.ndarray:
    """
    덮개(covering) 쌍 목록으로 주어진 부분순서의 만남 테이블을 만듭니다.
    부분순서가 아니거나 어떤 두 색의 만남이 유일하지 않으면 ValueError를 냅니다.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(size))
    for x, y in pairs:
        if not (0 <= x < size and 0 <= y < size) or x == y:
            raise ValueError(f"잘못된 순서 쌍입니다: ({x}, {y}), 색 개수 {size}")
        graph.add_edge(x, y)
    if not nx.is_directed_acyclic_graph(graph):
        raise ValueError("순서 관계에 순환이 있어 부분순서가 아닙니다.")

    # leq[x, y] == True  <=>  x <= y
    leq = np.eye(size, dtype=bool)
    for x, y in nx.transitive_closure_dag(graph).edges():
        leq[x, y] = True

    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            greatest = [c for c in lower if leq[lower, c].all()]
            if len(greatest) != 1:
                raise ValueError(f"색 {a}와 {b}의 만남(meet)이 유일하지 않습니다.")
            table[a, b] = greatest[0]
    return table


class Palette:
    """
    레벨 0..k의 유한 색 집합 K_0..K_k. 색은 0..|K_j|-1 정수로 식별합니다.

    Args:
        sizes: (|K_0|, ..., |K_k|)
        orders: {레벨: [(x, y), ...]} 형태의 덮개 쌍 (x < y), 선택
        labels: {레벨: (이름, ...)} 사람이 읽는 색 이름, 선택
    """

    def __init__(self, sizes, orders: dict = None, labels: dict = None):
        sizes = tuple(int(s) for s in sizes)
        if not sizes:
            raise ValueError("팔레트에는 최소한 레벨 0(K_0)이 필요합니다.")
        if any(s < 1 for s in sizes):
            raise ValueError(f"색 개수는 1 이상이어야 합니다: {sizes}")
        self.sizes = sizes
        self.order = len(sizes) - 1
        self.orders = {}
        self._meet = {}
        for j, pairs in (orders or {}).items():
            j = int(j)
            if not 0 <= j <= self.order:
                raise ValueError(f"존재하지 않는 레벨의 순서 지정입니다: {j}")
            pairs = tuple(sorted({(int(x), int(y)) for x, y in pairs}))
            self._meet[j] = _meet_table(sizes[j], pairs)
            self.orders[j] = pairs
        self.labels = dict(labels or {})
        if max(sizes) <= 256:
            self.dtype = np.uint8
        elif max(sizes) <= 65536:
            self.dtype = np.uint16
        else:
            self.dtype = np.uint32

    # --- 자주 쓰는 팔레트 ---
    @classmethod
    def graph(cls) -> "Palette":
        """(pt, pt, {0,1}) : 방향 그래프"""
        return cls((1, 1, 2), orders={2: [(0, 1)]})

    @classmethod
    def leq3(cls) -> "Palette":
        """(pt, {0,1}, {0,1}, {0,1}) : 레벨 1의 1 = 파랑, 0 = 빨강"""
        return cls((1, 2, 2, 2), orders={1: [(0, 1)], 2: [(0, 1)], 3: [(0, 1)]},
                   labels={1: ("red", "blue")})

    @classmethod
    def uniform(cls, k: int) -> "Palette":
        """레벨 k에서만 {0,1}인 k-균일 팔레트"""
        return cls((1,) * k + (2,), orders={k: [(0, 1)]})

    @classmethod
    def standard(cls, sizes) -> "Palette":
        """
        크기만 주어진 팔레트 (파일에서 읽은 경우).
        색이 2개인 레벨에는 불리언 순서 0 < 1을 붙입니다.
        """
        sizes = tuple(int(s) for s in sizes)
        return cls(sizes, orders={j: [(0, 1)] for j, s in enumerate(sizes) if s == 2})

    @property
    def is_ordered(self) -> bool:
        # 색이 하나뿐인 레벨은 자명하게 순서가 있음
        return all(j in self._meet or self.sizes[j] == 1 for j in range(self.order + 1))

    def meet_table(self, j: int) -> np.ndarray:
        if j in self._meet:
            return self._meet[j]
        if self.sizes[j] == 1:
            return np.zeros((1, 1), dtype=np.int64)
        raise ValueError(f"레벨 {j}에 순서 지정이 없어 만남을 계산할 수 없습니다.")

    def __eq__(self, other):
        return isinstance(other, Palette) and self.sizes == other.sizes and self.orders == other.orders

    def __hash__(self):
        return hash((self.sizes, tuple(sorted(self.orders.items()))))

    def __repr__(self):
        return f"Palette(sizes={self.sizes}, ordered_levels={sorted(self.orders)})"


# ==============================================================================
# 2. 단사 사상 (Morphism)
# ==============================================================================

class Morphism:
    """[m] -> [n] 단사 사상. image[i]는 정점 i의 상."""

    __slots__ = ("m", "n", "image")

    def __init__(self, image, n: int):
        image = tuple(int(v) for v in image)
        n = int(n)
        if len(set(image)) != len(image):
            raise ValueError(f"사상의 상(image)에 중복이 있습니다: {image}")
        if any(v < 0 or v >= n for v in image):
            raise ValueError(f"사상의 상이 대상 범위 0..{n - 1}를 벗어났습니다: {image}")
        self.m = len(image)
        self.n = n
        self.image = image

    @classmethod
    def identity(cls, n: int) -> "Morphism":
        return cls(range(n), n)

    @classmethod
    def inclusion(cls, subset, n: int) -> "Morphism":
        """오름차순으로 정렬한 부분집합으로의 포함 사상"""
        return cls(sorted(set(int(v) for v in subset)), n)

    def compose(self, other: "Morphism") -> "Morphism":
        """self ∘ other (other: [k] -> [m], self: [m] -> [n])"""
        if other.n != self.m:
            raise ValueError(f"합성할 수 없는 사상입니다: {other.n} != {self.m}")
        return Morphism([self.image[i] for i in other.image], self.n)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.n == other.n and self.image == other.image

    def __hash__(self):
        return hash((self.image, self.n))

    def __repr__(self):
        return f"Morphism({list(self.image)} -> [{self.n}])"


# ==============================================================================
# 3. 하이퍼그래프 (Hypergraph)
# ==============================================================================

class Hypergraph:
    """
    팔레트 K와 정점 0..n-1 위의 색칠된 하이퍼그래프.

    levels[j]는 (C(n, j), j!) 또는 무방향 압축 (C(n, j), 1) 배열입니다.
    생성 후 freeze()를 호출하면 읽기 전용이 됩니다.
    """

    def __init__(self, palette: Palette, n: int, levels: list = None, compact: bool = False):
        n = int(n)
        if n < 0:
            raise ValueError(f"정점 수는 0 이상이어야 합니다: {n}")
        self.palette = palette
        self.n = n
        k = palette.order

        if levels is None:
            levels = [
                np.zeros((comb(n, j), 1 if (compact and j >= 2) else factorial(j)), dtype=palette.dtype)
                for j in range(k + 1)
            ]
        if len(levels) != k + 1:
            raise ValueError(f"레벨 배열 개수 {len(levels)}가 팔레트 차수 {k}+1과 다릅니다.")

        checked = []
        for j, store in enumerate(levels):
            store = np.asarray(store)
            if store.ndim != 2 or store.shape[0] != comb(n, j) or store.shape[1] not in (1, factorial(j)):
                raise ValueError(f"레벨 {j} 저장소의 모양이 잘못되었습니다: {store.shape}")
            if store.size and (int(store.min()) < 0 or int(store.max()) >= palette.sizes[j]):
                raise ValueError(f"레벨 {j}에 0..{palette.sizes[j] - 1} 범위를 벗어난 색이 있습니다.")
            checked.append(np.ascontiguousarray(store, dtype=palette.dtype))
        self.levels = checked
        self._frozen = False
        self._undirected = None

    # --------------------------------------------------------------------------
    # 기본 정보
    # --------------------------------------------------------------------------
    @property
    def order(self) -> int:
        return self.palette.order

    @property
    def color0(self) -> int:
        return int(self.levels[0][0, 0])

    @property
    def level1(self) -> np.ndarray:
        """정점별 레벨 1 색 (차수 0 팔레트면 0)"""
        if self.order < 1:
            return np.zeros(self.n, dtype=self.palette.dtype)
        return self.levels[1][:, 0]

    def is_compact(self, j: int) -> bool:
        return j >= 2 and self.levels[j].shape[1] == 1

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "Hypergraph":
        for store in self.levels:
            store.setflags(write=False)
        self._frozen = True
        return self

    def copy(self) -> "Hypergraph":
        return Hypergraph(self.palette, self.n, [store.copy() for store in self.levels])

    # --------------------------------------------------------------------------
    # 조회 / 기록
    # --------------------------------------------------------------------------
    def _locate(self, j: int, tuples) -> tuple:
        if not 0 <= j <= self.order:
            raise ValueError(f"레벨 {j}는 팔레트 차수 {self.order} 범위 밖입니다.")
        t = as_tuples(tuples, j)
        if t.size and (t.min() < 0 or t.max() >= self.n):
            raise ValueError(f"정점 번호가 범위 0..{self.n - 1}를 벗어났습니다.")
        ordered = np.sort(t, axis=1)
        if j >= 2 and (ordered[:, 1:] == ordered[:, :-1]).any():
            raise ValueError("튜플의 정점은 서로 달라야 합니다.")
        rank = colex_rank(ordered)
        if j < 2 or self.is_compact(j):
            return rank, np.zeros(len(t), dtype=np.int64)
        return rank, perm_rank(ordering_pattern(t))

    def colors(self, j: int, tuples) -> np.ndarray:
        """
        순서 있는 j-튜플들의 색을 한 번에 읽습니다.

        Args:
            j (int): 레벨
            tuples: (B, j) 서로 다른 정점으로 된 튜플 배열
        """
        rank, slot = self._locate(j, tuples)
        return self.levels[j][rank, slot]

    def _check_writable(self):
        if self._frozen:
            raise ValueError("고정된(frozen) 하이퍼그래프는 수정할 수 없습니다.")
        self._undirected = None

    def _check_values(self, j: int, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64)
        if values.size and (values.min() < 0 or values.max() >= self.palette.sizes[j]):
            raise ValueError(f"레벨 {j} 색은 0..{self.palette.sizes[j] - 1} 범위여야 합니다.")
        return values.astype(self.palette.dtype)

    def _expand_level(self, j: int):
        if self.is_compact(j):
            self.levels[j] = np.repeat(self.levels[j], factorial(j), axis=1)

    def set_colors(self, j: int, tuples, values):
        """순서 있는 튜플 하나하나에 색을 씁니다. (같은 부분집합의 다른 순서는 그대로)"""
        self._check_writable()
        values = self._check_values(j, values)
        self._expand_level(j)
        rank, slot = self._locate(j, tuples)
        self.levels[j][rank, slot] = values

    def set_subset_colors(self, j: int, subsets, values):
        """부분집합의 모든 순서에 같은 색을 씁니다."""
        self._check_writable()
        values = self._check_values(j, values)
        s = np.sort(as_tuples(subsets, j), axis=1)
        rank, _ = self._locate(j, s)
        self.levels[j][rank, :] = values.reshape(-1, 1)

    def get(self, t) -> int:
        t = tuple(t)
        return int(self.colors(len(t), [t])[0])

    def set(self, t, color: int):
        t = tuple(t)
        self.set_colors(len(t), [t], [color])

    # --------------------------------------------------------------------------
    # 저장 방식 변환 및 비교
    # --------------------------------------------------------------------------
    def expanded(self) -> "Hypergraph":
        levels = [np.ascontiguousarray(np.broadcast_to(store, (store.shape[0], factorial(j))))
                  for j, store in enumerate(self.levels)]
        return Hypergraph(self.palette, self.n, levels)

    def compacted(self) -> "Hypergraph":
        """대칭인 레벨만 1칸 저장으로 바꾼 사본"""
        levels = []
        for j, store in enumerate(self.levels):
            if j >= 2 and store.shape[1] > 1 and (store == store[:, :1]).all():
                levels.append(store[:, :1].copy())
            else:
                levels.append(store.copy())
        return Hypergraph(self.palette, self.n, levels)

    def is_undirected(self) -> bool:
        if self._undirected is not None:
            return self._undirected
        result = all(store.shape[1] == 1 or bool((store == store[:, :1]).all())
                     for j, store in enumerate(self.levels) if j >= 2)
        if self._frozen:
            self._undirected = result
        return result

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        if self.palette != other.palette or self.n != other.n:
            return False
        return all(bool(np.all(a == b)) for a, b in zip(self.levels, other.levels))

    __hash__ = None

    def __repr__(self):
        mode = "undirected" if self.is_undirected() else "directed"
        return f"Hypergraph(n={self.n}, palette={self.palette.sizes}, {mode})"

    # --------------------------------------------------------------------------
    # 숫자열(digits) 인코딩
    # --------------------------------------------------------------------------
    def digits(self) -> np.ndarray:
        """
        전체 저장소를 레벨 순서대로 펼친 숫자열.
        (레벨 -> 부분집합 colex 순위 -> 순열 사전식 순위)
        메모이제이션, 룩업 테이블, 전수 열거의 표준 키로 사용합니다.
        """
        parts = [np.broadcast_to(store, (store.shape[0], factorial(j))).reshape(-1)
                 for j, store in enumerate(self.levels)]
        return np.concatenate(parts).astype(self.palette.dtype, copy=False)

    def key(self) -> bytes:
        return self.digits().tobytes()

    @classmethod
    def from_digits(cls, palette: Palette, n: int, digits) -> "Hypergraph":
        digits = np.asarray(digits).reshape(-1)
        layout = digit_layout(palette, n)
        if digits.size != layout[-1][0] + layout[-1][1] * layout[-1][2]:
            raise ValueError(f"숫자열 길이 {digits.size}가 n={n} 배치와 맞지 않습니다.")
        levels = [digits[offset:offset + rows * width].reshape(rows, width).copy()
                  for offset, rows, width in layout]
        return cls(palette, n, levels)

    # --------------------------------------------------------------------------
    # 그래프(차수 2) 편의 기능
    # --------------------------------------------------------------------------
    def adjacency(self) -> np.ndarray:
        """A[v, w] = G_2(v, w) 인 n x n 행렬 (대각선 0)"""
        if self.order < 2:
            raise ValueError("인접 행렬은 차수 2 이상의 팔레트에서만 정의됩니다.")
        store = self.levels[2]
        matrix = np.zeros((self.n, self.n), dtype=self.palette.dtype)
        for b in range(1, self.n):
            start = b * (b - 1) // 2
            block = store[start:start + b]
            # 순열 0 = (a, b), 순열 1 = (b, a)
            matrix[:b, b] = block[:, 0]
            matrix[b, :b] = block[:, -1]
        return matrix

    @classmethod
    def from_adjacency(cls, palette: Palette, matrix, colors1=None, color0: int = 0) -> "Hypergraph":
        """
        인접 행렬에서 차수 2 하이퍼그래프를 만듭니다. 대칭 행렬이면 압축 저장합니다.
        """
        matrix = np.asarray(matrix)
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise ValueError(f"인접 행렬은 정사각형이어야 합니다: {matrix.shape}")
        if palette.order != 2:
            raise ValueError("from_adjacency는 차수 2 팔레트 전용입니다.")
        symmetric = bool((matrix == matrix.T).all())
        store = np.zeros((comb(n, 2), 1 if symmetric else 2), dtype=np.int64)
        for b in range(1, n):
            start = b * (b - 1) // 2
            store[start:start + b, 0] = matrix[:b, b]
            if not symmetric:
                store[start:start + b, 1] = matrix[b, :b]
        first = np.zeros((n, 1), dtype=np.int64) if colors1 is None else np.asarray(colors1).reshape(n, 1)
        return cls(palette, n, [np.array([[color0]]), first, store])


# ==============================================================================
# 4. 숫자열 배치 (Digit layout)
# ==============================================================================

def digit_layout(palette: Palette, n: int) -> list:
    """레벨별 (시작 오프셋, 행 수, 열 수) 목록"""
    layout, offset = [], 0
    for j in range(palette.order + 1):
        rows, width = comb(n, j), factorial(j)
        layout.append((offset, rows, width))
        offset += rows * width
    return layout


def digit_radices(palette: Palette, n: int) -> np.ndarray:
    """숫자열 각 자리의 기수(|K_j|)"""
    return np.concatenate([np.full(rows * width, palette.sizes[j], dtype=np.int64)
                           for j, (_, rows, width) in enumerate(digit_layout(palette, n))])


def as_tuples(tuples, j: int) -> np.ndarray:
    """입력을 (B, j) int64 배열로 정리합니다. (j = 0이면 빈 튜플 B개)"""
    t = np.asarray(tuples, dtype=np.int64)
    if j == 0:
        return t.reshape(t.shape[0] if t.ndim else 1, 0)
    return t.reshape(-1, j)


def pullback_digits(G: Hypergraph, injections) -> np.ndarray:
    """
    단사 묶음 (B, m) 각각에 대한 pullback(G, ψ)의 숫자열 (B, D).
    오름차순 부분집합을 넘기면 restrict(G, W)의 숫자열이 됩니다.
    """
    injections = np.asarray(injections, dtype=np.int64)
    count, m = injections.shape
    parts = [np.full((count, 1), G.color0, dtype=np.int64)]
    for j in range(1, G.order + 1):
        local = local_tuples(m, j)
        if not len(local):
            continue
        mapped = injections[:, local].reshape(-1, j)
        parts.append(G.colors(j, mapped).reshape(count, len(local)))
    return np.concatenate(parts, axis=1).astype(G.palette.dtype)


def compact_expansion(palette: Palette, n: int) -> np.ndarray:
    """
    무방향 압축 숫자열(레벨 j >= 2는 부분집합당 1자리)을 전체 숫자열로 펼치는 인덱스.
    full = compact[..., compact_expansion(palette, n)]
    """
    index, offset = [], 0
    for j, (_, rows, width) in enumerate(digit_layout(palette, n)):
        if j >= 2:
            index.append(np.repeat(np.arange(offset, offset + rows), width))
            offset += rows
        else:
            index.append(np.arange(offset, offset + rows * width))
            offset += rows * width
    return np.concatenate(index)


def compact_radices(palette: Palette, n: int) -> np.ndarray:
    return np.concatenate([np.full(rows if j >= 2 else rows * width, palette.sizes[j], dtype=np.int64)
                           for j, (_, rows, width) in enumerate(digit_layout(palette, n))])


def meet_digits(palette: Palette, n: int, left, right) -> np.ndarray:
    """숫자열 (B, D) 두 묶음의 자리별 만남"""
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    out = np.empty(np.broadcast_shapes(left.shape, right.shape), dtype=np.int64)
    for j, (offset, rows, width) in enumerate(digit_layout(palette, n)):
        cols = slice(offset, offset + rows * width)
        out[..., cols] = palette.meet_table(j)[left[..., cols], right[..., cols]]
    return out


def slot_index(j: int, tuples) -> np.ndarray:
    """레벨 j 안에서 순서 있는 튜플의 평탄 위치 (순위 * j! + 순열 순위)"""
    t = as_tuples(tuples, j)
    if j == 0:
        return np.zeros(len(t), dtype=np.int64)
    rank = colex_rank(np.sort(t, axis=1))
    return rank * factorial(j) + perm_rank(ordering_pattern(t))


def local_tuples(m: int, j: int) -> np.ndarray:
    """[m] 위의 모든 순서 있는 j-튜플을 저장소 배치 순서대로 나열 (C(m,j)*j!, j)"""
    subsets = colex_unrank(np.arange(comb(m, j), dtype=np.int64), j, m)
    return subsets[:, permutation_table(j)].reshape(-1, j)


# ==============================================================================
# 5. 연산 (Operations)
# ==============================================================================

def enumerate_injections(j: int, n: int):
    """
    Inj([j], [n]): 서로 다른 정점으로 된 순서 있는 j-튜플을 사전식 순서로 내보냅니다.
    j > n이면 아무것도 내보내지 않습니다.
    """
    if j < 0:
        raise ValueError(f"튜플 길이는 0 이상이어야 합니다: {j}")
    yield from permutations(range(n), j)


def pullback(G: Hypergraph, phi: Morphism) -> Hypergraph:
    """
    G'_j(ψ) = G_j(φ∘ψ) 를 만족하는 [m] 위의 하이퍼그래프를 만듭니다.
    압축(무방향) 레벨은 압축된 채로 당겨옵니다.
    """
    if phi.n != G.n:
        raise ValueError(f"사상의 대상 크기 {phi.n}가 하이퍼그래프 정점 수 {G.n}와 다릅니다.")
    image = phi.as_array()
    m = phi.m
    levels = [G.levels[0].copy()]
    for j in range(1, G.order + 1):
        compact = G.is_compact(j)
        width = 1 if compact else factorial(j)
        out = np.empty((comb(m, j), width), dtype=G.palette.dtype)
        perms = permutation_table(j)
        for start, subsets in subset_blocks(m, j):
            count = len(subsets)
            if compact:
                out[start:start + count, 0] = G.colors(j, image[subsets])
            else:
                ordered = image[subsets[:, perms]].reshape(-1, j)
                out[start:start + count] = G.colors(j, ordered).reshape(count, width)
        levels.append(out)
    return Hypergraph(G.palette, m, levels)


def restrict(G: Hypergraph, subset) -> Hypergraph:
    """W를 오름차순으로 다시 번호 붙여 제한한 하이퍼그래프 (포함 사상 풀백)"""
    vertices = sorted(set(int(v) for v in subset))
    if vertices and (vertices[0] < 0 or vertices[-1] >= G.n):
        raise ValueError(f"부분집합의 정점이 범위 0..{G.n - 1}를 벗어났습니다.")
    return pullback(G, Morphism(vertices, G.n))


def is_undirected(G: Hypergraph) -> bool:
    return G.is_undirected()


def symmetrize(G: Hypergraph) -> Hypergraph:
    """각 부분집합을 사전식 최소 순서(정렬된 튜플)의 색으로 통일합니다."""
    levels = [store[:, :1].copy() if j >= 2 else store.copy() for j, store in enumerate(G.levels)]
    return Hypergraph(G.palette, G.n, levels)


def meet(G: Hypergraph, H: Hypergraph) -> Hypergraph:
    """
    순서 팔레트에서 레벨/튜플별 점별 만남 (G ∧ H).

    Raises:
        ValueError: 팔레트가 다르거나 순서 지정이 없는 경우
    """
    if G.palette != H.palette or G.n != H.n:
        raise ValueError("만남은 같은 팔레트, 같은 정점 수에서만 정의됩니다.")
    if not G.palette.is_ordered:
        raise ValueError("순서 지정이 없는 팔레트에서는 만남을 계산할 수 없습니다.")
    levels = []
    for j, (a, b) in enumerate(zip(G.levels, H.levels)):
        table = G.palette.meet_table(j)
        if a.shape != b.shape:
            width = factorial(j)
            a = np.broadcast_to(a, (a.shape[0], width))
            b = np.broadcast_to(b, (b.shape[0], width))
        levels.append(table[a, b])
    return Hypergraph(G.palette, G.n, levels)


def is_partite_edge(G: Hypergraph, phi) -> bool:
    """레벨 1 색이 튜플 위에서 단사이면 분할 간선(partite edge)"""
    vertices = [int(v) for v in phi]
    if len(set(vertices)) != len(vertices):
        raise ValueError(f"튜플의 정점이 서로 다르지 않습니다: {vertices}")
    colors = G.level1[vertices]
    return len(set(colors.tolist())) == len(vertices)


def partite_equivalent(G: Hypergraph, H: Hypergraph) -> bool:
    """G_1 = H_1 이고 모든 레벨의 모든 분할 간선에서 색이 같으면 True"""
    if G.palette != H.palette or G.n != H.n:
        raise ValueError("분할 동치는 같은 팔레트, 같은 정점 수에서만 비교합니다.")
    if G.color0 != H.color0 or not np.array_equal(G.level1, H.level1):
        return False
    first = G.level1
    for j in range(2, G.order + 1):
        width = factorial(j)
        a_store, b_store = G.levels[j], H.levels[j]
        for start, subsets in subset_blocks(G.n, j):
            count = len(subsets)
            shade = np.sort(first[subsets], axis=1)
            partite = (shade[:, 1:] != shade[:, :-1]).all(axis=1)
            if not partite.any():
                continue
            a = np.broadcast_to(a_store[start:start + count], (count, width))[partite]
            b = np.broadcast_to(b_store[start:start + count], (count, width))[partite]
            if not np.array_equal(a, b):
                return False
    return True


def random_hypergraph(palette: Palette, n: int, seed: int = 0, undirected: bool = False,
                      rng: np.random.Generator = None) -> Hypergraph:
    """모든 자리에 균등한 랜덤 색을 칠한 하이퍼그래프 (테스트/샘플링용)"""
    rng = rng if rng is not None else make_rng(seed, "random-hypergraph", n)
    levels = []
    for j in range(palette.order + 1):
        width = 1 if (undirected and j >= 2) else factorial(j)
        levels.append(rng.integers(0, palette.sizes[j], size=(comb(n, j), width)))
    return Hypergraph(palette, n, levels)
