# graphon.py
"""
[그래폰 샘플링 및 삼각형 제거 복구 담당]
[0,1]^2 위의 대칭 함수 p(그래폰)에서 랜덤 그래프를 뽑고,
삼각형 밀도를 추정하며, 셀 대표값 ζ를 이용해 삼각형 없는 그래프로 복구합니다.

기능 목록:
1. Graphon / CellAssignment: 계단 함수 그래폰과 셀 배정
2. sample_graphon_graph: 정점 색 균등 추출 + 간선 독립 추출
3. triangle_density / count_triangles / zeta_triangle_sum: 삼각형 통계
4. repair_triangle_free: 다섯 조항 셀 규칙으로 복구
"""

import logging
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .config import DENSITY_CHUNK, LOG_LEVEL
from .properties import Estimate, distance
from core.formats import read_gwn
from core.hypercore import Hypergraph, Palette
from core.utils import make_rng, run_sharded

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


# ==============================================================================
# 1. 그래폰 (Graphon)
# ==============================================================================

class Graphon:
    """
    계단 함수(m x m 격자, 반열린 셀) 또는 벡터화된 순수 함수로 주어진 그래폰.

    Args:
        grid: (m, m) 값 격자, [0, 1] 범위
        func: p(u, v) -> [0, 1] (numpy 브로드캐스팅 지원)
        symmetric: True이면 격자가 대칭이어야 함
    """

    def __init__(self, grid=None, func: Callable = None, name: str = "custom", symmetric: bool = True):
        if (grid is None) == (func is None):
            raise ValueError("그래폰은 grid와 func 중 정확히 하나로 만들어야 합니다.")
        self.name = name
        self.symmetric = symmetric
        self.func = func
        self.grid = None
        if grid is not None:
            grid = np.asarray(grid, dtype=float)
            if grid.ndim != 2 or grid.shape[0] != grid.shape[1] or grid.size == 0:
                raise ValueError(f"그래폰 격자는 비어 있지 않은 정사각 행렬이어야 합니다: {grid.shape}")
            if not np.all((grid >= 0.0) & (grid <= 1.0)):
                raise ValueError("그래폰 값은 [0, 1] 범위여야 합니다.")
            if symmetric and not np.array_equal(grid, grid.T):
                raise ValueError("대칭 그래폰의 격자가 대칭이 아닙니다.")
            self.grid = grid

    @classmethod
    def from_grid(cls, grid, name: str = "grid") -> "Graphon":
        return cls(grid=grid, name=name)

    @classmethod
    def read(cls, path) -> "Graphon":
        """GWN v1 파일에서 계단 함수 그래폰을 읽습니다."""
        return cls(grid=read_gwn(path), name=str(path))

    @classmethod
    def named(cls, name: str):
        """
        등록된 이름의 그래폰.

        Returns:
            Graphon 또는 None (등록되지 않은 이름)
        """
        graphon_map = {
            "zero": [[0.0]],
            "one": [[1.0]],
            "half": [[0.5]],
            # 색이 1/2을 사이에 두고 갈라질 때만 1
            "complete-bipartite": [[0.0, 1.0], [1.0, 0.0]],
            "sbm-2": [[0.8, 0.1], [0.1, 0.6]],
        }
        grid = graphon_map.get(name)
        return cls(grid=grid, name=name) if grid is not None else None

    def cell(self, u) -> np.ndarray:
        m = self.grid.shape[0]
        return np.minimum(np.floor(np.asarray(u, dtype=float) * m).astype(np.int64), m - 1)

    def __call__(self, u, v) -> np.ndarray:
        if self.grid is not None:
            return self.grid[self.cell(u), self.cell(v)]
        values = np.asarray(self.func(np.asarray(u, dtype=float), np.asarray(v, dtype=float)), dtype=float)
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError(f"그래폰 '{self.name}'이 [0, 1] 밖의 값을 돌려주었습니다.")
        return values

    def __repr__(self):
        body = f"grid={self.grid.shape[0]}" if self.grid is not None else "func"
        return f"Graphon({self.name!r}, {body})"


GRAPHON_NAMES = ("zero", "one", "half", "complete-bipartite", "sbm-2")


class CellAssignment(BaseModel):
    """N개 구간 I_i = [i/N, (i+1)/N)과 대표값 ζ_i, 임계값 σ"""
    N: int = Field(..., ge=1)
    zeta: list[float]
    sigma: float = Field(..., gt=0.0, lt=0.5)

    @model_validator(mode="after")
    def _zeta_in_cells(self):
        if len(self.zeta) != self.N:
            raise ValueError(f"ζ 개수 {len(self.zeta)}가 셀 수 {self.N}와 다릅니다.")
        for i, z in enumerate(self.zeta):
            if not i / self.N <= z < (i + 1) / self.N:
                raise ValueError(f"ζ_{i} = {z}가 구간 [{i}/{self.N}, {i + 1}/{self.N}) 밖입니다.")
        return self

    @classmethod
    def draw(cls, N: int, sigma: float, seed: int = 0) -> "CellAssignment":
        """각 구간에서 ζ_i를 독립 균등 추출합니다."""
        u = make_rng(seed, "zeta", N).random(N)
        upper = np.nextafter((np.arange(N) + 1) / N, 0.0)
        zeta = np.minimum((np.arange(N) + u) / N, upper)
        return cls(N=N, zeta=zeta.tolist(), sigma=sigma)

    def cell_of(self, colors) -> np.ndarray:
        """정점 색 -> 셀 번호 min(floor(c N), N-1)"""
        return np.minimum(np.floor(np.asarray(colors, dtype=float) * self.N).astype(np.int64), self.N - 1)


# ==============================================================================
# 2. 샘플링 (Sampling)
# ==============================================================================

def sample_graphon_graph(p: Graphon, n: int, seed: int = 0) -> tuple:
    """
    정점 색을 [0,1]에서 균등 추출하고 간선 {v, w}를 확률 p(c_v, c_w)로 독립 추출합니다.

    Returns:
        (colors, G): (n,) 실수 색과 무방향 그래프
    """
    if n < 0:
        raise ValueError(f"정점 수는 0 이상이어야 합니다: {n}")
    colors = make_rng(seed, "graphon-colors").random(n)
    prob = p(colors[:, None], colors[None, :])
    coins = make_rng(seed, "graphon-edges").random((n, n))
    upper = np.triu(coins < prob, 1)
    G = Hypergraph.from_adjacency(Palette.graph(), (upper | upper.T).astype(np.int64)).freeze()
    logger.info(f"✅ 그래폰 '{p.name}'에서 그래프 추출 (n={n}, seed={seed}, 간선={int(upper.sum())})")
    return colors, G


# ==============================================================================
# 3. 삼각형 통계 (Triangle statistics)
# ==============================================================================

def triangle_density(p: Graphon, sample_count: int, seed: int = 0) -> Estimate:
    """p(x,y) p(y,z) p(z,x)의 몬테카를로 평균과 표준오차"""
    if sample_count < 1:
        raise ValueError(f"표본 수는 1 이상이어야 합니다: {sample_count}")

    def chunk(index: int, count: int) -> tuple:
        rng = make_rng(seed, "triangle-density", index)
        x, y, z = rng.random((3, count))
        values = p(x, y) * p(y, z) * p(z, x)
        return float(values.sum()), float((values * values).sum())

    jobs = [(i, min(DENSITY_CHUNK, sample_count - start))
            for i, start in enumerate(range(0, sample_count, DENSITY_CHUNK))]
    parts = run_sharded(chunk, jobs)
    total = sum(s for s, _ in parts)
    squares = sum(q for _, q in parts)
    mean = total / sample_count
    variance = max(squares / sample_count - mean * mean, 0.0)
    stderr = float(np.sqrt(variance / sample_count))
    return Estimate(mean, stderr, sample_count)


def count_triangles(G: Hypergraph) -> int:
    """방향을 무시한 그래프의 삼각형 수"""
    A = G.adjacency().astype(np.int64)
    A = A | A.T
    return int(((A @ A) * A).sum()) // 6


def zeta_triangle_sum(p: Graphon, cells: CellAssignment, cell_of) -> float:
    """서로 다른 정점 순서 삼중쌍에 대한 p(ζ_u, ζ_v) p(ζ_v, ζ_w) p(ζ_w, ζ_u)의 합"""
    cell_of = np.asarray(cell_of, dtype=np.int64)
    z = np.asarray(cells.zeta, dtype=float)[cell_of]
    Q = p(z[:, None], z[None, :]).astype(float)
    np.fill_diagonal(Q, 0.0)
    return float(np.trace(Q @ Q @ Q))


# ==============================================================================
# 4. 삼각형 없는 복구 (Triangle-free repair)
# ==============================================================================

REPAIR_CLAUSES = ("keep", "drop_low", "stay_absent", "add", "same_cell")


def repair_triangle_free(G: Hypergraph, colors, p: Graphon, N: int, sigma: float, seed: int = 0) -> tuple:
    """
    셀 대표값 ζ로 간선마다 다섯 조항 중 하나를 적용합니다.
      keep        : 간선 있음, 셀 다름, p >= σ      -> 유지
      drop_low    : 간선 있음, 셀 다름, p < σ       -> 삭제
      stay_absent : 간선 없음, 셀 다름, p <= 1-σ    -> 그대로 없음
      add         : 간선 없음, 셀 다름, p > 1-σ     -> 추가
      same_cell   : 같은 셀                          -> 삭제

    Returns:
        (G', report)
    """
    cells = CellAssignment.draw(N, sigma, seed)
    colors = np.asarray(colors, dtype=float)
    if G.palette != Palette.graph() or not G.is_undirected():
        raise ValueError("삼각형 없는 복구는 무방향 그래프 전용입니다.")
    if colors.shape != (G.n,):
        raise ValueError(f"정점 색 개수 {colors.shape}가 정점 수 {G.n}와 다릅니다.")

    cell = cells.cell_of(colors)
    z = np.asarray(cells.zeta)[cell]
    prob = p(z[:, None], z[None, :])
    present = G.adjacency().astype(bool)
    cross = cell[:, None] != cell[None, :]
    upper = np.triu(np.ones((G.n, G.n), dtype=bool), 1)

    clauses = {
        "keep": present & cross & (prob >= sigma),
        "drop_low": present & cross & (prob < sigma),
        "stay_absent": ~present & cross & (prob <= 1.0 - sigma),
        "add": ~present & cross & (prob > 1.0 - sigma),
        "same_cell": ~cross,
    }
    kept = clauses["keep"] | clauses["add"]
    repaired = Hypergraph.from_adjacency(Palette.graph(), (kept & upper | (kept & upper).T).astype(np.int64))
    repaired.freeze()

    residual = count_triangles(repaired)
    zeta_sum = zeta_triangle_sum(p, cells, cell)
    report = {
        "n": G.n,
        "N": N,
        "sigma": sigma,
        "seed": seed,
    }
    report.update({f"clause_{name}": int((clauses[name] & upper).sum()) for name in REPAIR_CLAUSES})
    report.update({
        "edit_fraction": distance(repaired, G),
        "residual_triangles": residual,
        # G'에는 같은 셀 간선이 없으므로 남은 삼각형의 세 셀은 모두 다름
        "residual_distinct_cell_triangles": residual,
        "zeta_triangle_sum": zeta_sum,
    })
    logger.info(f"✅ 삼각형 제거 복구 완료 (n={G.n}, N={N}, sigma={sigma}, 남은 삼각형={residual})")
    return repaired, report
