# utils.py
"""
[공통 유틸리티 담당]
하이퍼그래프 저장소와 각 서비스 모듈이 함께 쓰는 저수준 도구 모음입니다.

기능 목록:
1. Combinatorics: 이항계수 테이블, colex 순위/역순위, 순열(Lehmer) 순위
2. Randomness: 이름 붙은 시드 스트림, 부분 Fisher–Yates 단사 샘플링
3. Parallel: joblib 기반 샤드 실행기
4. Reporting: key=value 보고서 포맷
"""

import hashlib
import logging
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

import numpy as np
from joblib import Parallel, delayed

from services.config import HEDRA_THREADS, LOG_LEVEL, SUBSET_BLOCK

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


# ==============================================================================
# 1. 조합론 도구 (Combinatorics)
# ==============================================================================

@lru_cache(maxsize=64)
def binomial_table(n: int, k: int) -> np.ndarray:
    """
    C(c, i) 값을 담은 (n+1, k+1) 테이블을 만듭니다. (0 <= c <= n, 0 <= i <= k)

    Returns:
        np.ndarray: 읽기 전용 int64 테이블
    """
    table = np.zeros((n + 1, k + 1), dtype=np.int64)
    table[:, 0] = 1
    for i in range(1, k + 1):
        # 하키스틱 항등식: C(c, i) = sum_{t < c} C(t, i-1)
        table[1:, i] = np.cumsum(table[:-1, i - 1])
    table.setflags(write=False)
    return table


def _table_for(top: int, k: int) -> np.ndarray:
    # 캐시 재사용을 위해 행 개수를 2의 거듭제곱으로 올림
    rows = 1
    while rows < top + 1:
        rows <<= 1
    return binomial_table(rows, k)


def colex_rank(subsets) -> np.ndarray:
    """
    오름차순 정렬된 부분집합들의 colex 순위(조합 수 체계)를 계산합니다.
    rank({s_0 < s_1 < ... < s_{j-1}}) = sum_i C(s_i, i+1)

    Args:
        subsets: (B, j) 정수 배열, 각 행은 오름차순
    """
    s = np.asarray(subsets, dtype=np.int64)
    count, j = s.shape
    if j == 0 or count == 0:
        return np.zeros(count, dtype=np.int64)
    table = _table_for(int(s.max()), j)
    rank = np.zeros(count, dtype=np.int64)
    for i in range(j):
        rank += table[s[:, i], i + 1]
    return rank


def colex_unrank(ranks, j: int, n: int) -> np.ndarray:
    """
    colex 순위를 j-부분집합으로 되돌립니다. (탐욕적 역순위, searchsorted로 벡터화)

    Returns:
        np.ndarray: (B, j) 오름차순 부분집합
    """
    r = np.array(ranks, dtype=np.int64).reshape(-1)
    out = np.empty((r.size, j), dtype=np.int64)
    table = binomial_table(n, j)
    for i in range(j, 0, -1):
        column = table[:, i]
        c = np.searchsorted(column, r, side="right") - 1
        out[:, i - 1] = c
        r -= column[c]
    return out


def subset_blocks(n: int, j: int, block: int = SUBSET_BLOCK):
    """
    [n]의 j-부분집합을 colex 순서대로 블록 단위로 내보냅니다.

    Yields:
        (start_rank, subsets): 시작 순위와 (B, j) 부분집합 배열
    """
    total = comb(n, j)
    for start in range(0, total, block):
        stop = min(total, start + block)
        yield start, colex_unrank(np.arange(start, stop, dtype=np.int64), j, n)


@lru_cache(maxsize=16)
def permutation_table(j: int) -> np.ndarray:
    """range(j)의 모든 순열을 사전식 순서로 담은 (j!, j) 배열"""
    table = np.array(list(permutations(range(j))), dtype=np.int64).reshape(factorial(j), j)
    table.setflags(write=False)
    return table


def ordering_pattern(tuples) -> np.ndarray:
    """각 튜플 원소의 튜플 내 순위 (t[i] = sorted(t)[pattern[i]])"""
    t = np.asarray(tuples, dtype=np.int64)
    return np.argsort(np.argsort(t, axis=1, kind="stable"), axis=1, kind="stable")


def perm_rank(patterns) -> np.ndarray:
    """
    순열 패턴들의 사전식 순위(Lehmer code)를 계산합니다.
    permutation_table(j)[perm_rank(p)] == p 가 성립합니다.
    """
    p = np.asarray(patterns, dtype=np.int64)
    count, j = p.shape
    rank = np.zeros(count, dtype=np.int64)
    for i in range(j - 1):
        smaller = (p[:, i + 1:] < p[:, i:i + 1]).sum(axis=1)
        rank += smaller * factorial(j - 1 - i)
    return rank


def mixed_radix_digits(codes, radices) -> np.ndarray:
    """
    정수 코드를 혼합 기수 숫자열로 풉니다. 마지막 자리가 가장 빠르게 변합니다.

    Args:
        codes: (B,) 0 이상 정수 (int64 범위)
        radices: (D,) 자리별 기수
    Returns:
        np.ndarray: (B, D) 숫자 배열
    """
    rest = np.array(codes, dtype=np.int64).reshape(-1)
    radices = np.asarray(radices, dtype=np.int64)
    out = np.empty((rest.size, radices.size), dtype=np.int64)
    for i in range(radices.size - 1, -1, -1):
        out[:, i] = rest % radices[i]
        rest //= radices[i]
    return out


# ==============================================================================
# 2. 난수 스트림 (Randomness)
# ==============================================================================

def _label_entropy(label) -> int:
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        return int(label) & MASK64
    digest = hashlib.blake2b(str(label).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_rng(seed: int, *labels) -> np.random.Generator:
    """
    (seed, 라벨...)로부터 독립적인 numpy Generator를 만듭니다.
    같은 인자는 항상 같은 스트림을 만들고, 라벨이 다르면 스트림도 독립입니다.

    Args:
        seed (int): 0 이상의 64비트 시드
        labels: 용도 이름(str) 또는 샤드 번호(int)
    """
    if int(seed) < 0:
        raise ValueError(f"시드는 0 이상이어야 합니다: {seed}")
    entropy = [int(seed) & MASK64] + [_label_entropy(x) for x in labels]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def sample_injections(rng: np.random.Generator, n: int, size: int, count: int) -> np.ndarray:
    """
    부분 Fisher–Yates 셔플로 균등한 단사 (size개의 서로 다른 정점 순서쌍)를 count개 뽑습니다.
    샘플끼리는 벡터화되어 있고, 각 샘플 안에서는 size번의 교환만 수행합니다.

    Returns:
        np.ndarray: (count, size) 정점 배열 (정렬되지 않은 단사)
    """
    if size > n:
        raise ValueError(f"표본 크기 {size}가 정점 수 {n}보다 큽니다.")
    pool = np.tile(np.arange(n, dtype=np.int64), (count, 1))
    rows = np.arange(count)
    for i in range(size):
        pick = rng.integers(i, n, size=count)
        chosen = pool[rows, pick]
        pool[rows, pick] = pool[rows, i]
        pool[rows, i] = chosen
    return pool[:, :size]


# ==============================================================================
# 3. 병렬 실행 (Parallel)
# ==============================================================================

def run_sharded(fn, jobs, n_jobs: int = None) -> list:
    """
    샤드 작업 목록을 joblib 스레드 풀에서 실행하고 입력 순서대로 결과를 돌려줍니다.
    워커 수는 HEDRA_THREADS로 제한되며, 결과 순서는 워커 수와 무관합니다.

    Args:
        fn: 샤드 하나를 처리하는 함수
        jobs: fn에 넘길 인자 튜플들
    """
    jobs = list(jobs)
    if not jobs:
        return []
    workers = min(n_jobs or HEDRA_THREADS, len(jobs))
    if workers <= 1:
        return [fn(*args) for args in jobs]
    logger.debug(f"샤드 {len(jobs)}개를 워커 {workers}개로 실행합니다.")
    return Parallel(n_jobs=workers, prefer="threads")(delayed(fn)(*args) for args in jobs)


# ==============================================================================
# 4. 보고서 (Reporting)
# ==============================================================================

def _format_value(value) -> str:
    """값 하나를 보고서 문자열로 (numpy 스칼라와 배열은 파이썬 값으로 풀어서)"""
    if isinstance(value, np.ndarray):
        value = value.tolist()
    elif isinstance(value, np.generic):
        value = value.item()
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_format_value(v) for v in value)
    return str(value)


def format_report(fields: dict) -> str:
    """
    보고서 딕셔너리를 key=value 줄 목록으로 바꿉니다. (입력 순서 유지)
    """
    return "\n".join(f"{key}={_format_value(value)}" for key, value in fields.items())
