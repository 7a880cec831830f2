# config.py
"""
[전역 설정 및 상수 관리]
하이퍼그래프 저장소, 테스터, 국소 수정 규칙, 장애물 탐색, 그래폰 모듈이
공통으로 사용하는 모든 상수를 관리합니다.

목차:
1. SYSTEM : 병렬 처리 및 로깅 설정
2. STORAGE : 부분집합 블록 처리 크기
3. TESTER : 국소 만족도 / 만남(meet) 검사 설정
4. RULES : 국소 수정 규칙 및 함의 검증 한도
5. OBSTRUCTIONS : 장애물 탐색 예산 및 생성기 블록 크기
6. GRAPHON : 몬테카를로 밀도 추정 설정
7. CLI : 종료 코드
"""

import os
from dotenv import load_dotenv

# .env 파일 로드 (환경변수 설정)
load_dotenv()


def _env_int(name: str, default: int) -> int:
    """
    정수형 환경변수를 읽습니다. 값이 잘못되면 변수 이름과 함께 ValueError를 냅니다.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"환경변수 {name}의 값이 정수가 아닙니다: {raw!r}") from None


# ==============================================================================
# 1. SYSTEM (병렬 처리 및 로깅)
# ==============================================================================

# 내부 병렬 처리(joblib 워커 수) 상한. 기본값은 하드웨어 코어 수
HEDRA_THREADS = max(1, _env_int("HEDRA_THREADS", os.cpu_count() or 1))

# 로그 레벨 (DEBUG / INFO / WARNING ...)
LOG_LEVEL = os.getenv("HEDRA_LOG_LEVEL", "INFO").upper()

# ==============================================================================
# 2. STORAGE (하이퍼그래프 저장소)
# ==============================================================================

# 벡터화 연산 시 한 번에 처리하는 부분집합 개수
SUBSET_BLOCK = 1 << 15

# ==============================================================================
# 3. TESTER (국소 만족도 테스트)
# ==============================================================================

# 몬테카를로 샘플을 나누는 샤드 크기 (샤드마다 독립 시드 스트림 사용)
MC_SHARD = 4096

# check_meet_closed: 크기별 전수 열거 허용 한도 / 랜덤 모드 샘플 수
MEET_ENUM_LIMIT = 1 << 16
MEET_SAMPLE_COUNT = 4000

# 유도 부분하이퍼그래프 탐색에서 한 번에 펼치는 부분 단사 개수
EMBED_BLOCK = 1 << 18

# 유전성 감사(audit) 기본 샘플 수
AUDIT_SAMPLE_COUNT = 200

# ==============================================================================
# 4. RULES (국소 수정 규칙)
# ==============================================================================

# [함의 검증] 전수 열거 상한 (기본 2^26)
ENTAILMENT_CEILING = _env_int("HEDRA_ENTAILMENT_CEILING", 1 << 26)

# [함의 검증] 한 번에 디코딩하는 입력 개수
ENTAILMENT_CHUNK = 1 << 16

# [다수결 규칙] 이분할 전수 탐색 한도와 초과 시 랜덤 이분할 개수
MAJORITY_EXACT_LIMIT = 20
MAJORITY_RANDOM_BIPARTITIONS = 100_000
MAJORITY_TRAINING_SIZE = 30

# 룩업 테이블로 물질화(materialize)할 수 있는 최대 풀백 개수
TABLE_LIMIT = 1 << 16

# ==============================================================================
# 5. OBSTRUCTIONS (장애물 탐색)
# ==============================================================================

# 사분/구분 튜플 탐색의 기본 프로브 예산
DEFAULT_PROBE_BUDGET = _env_int("HEDRA_PROBE_BUDGET", 10_000_000)

# 프로브를 한 번에 평가하는 배치 크기
PROBE_BATCH = 1 << 16

# 9-튜플 탐색에서 시도하는 사면체(tetrahedron) 개수
NINE_TETRA_ATTEMPTS = 4

# 생성기에서 난수를 뽑는 행 블록 크기
ROW_BLOCK = 256

# ==============================================================================
# 6. GRAPHON (그래폰)
# ==============================================================================

# 삼각형 밀도 추정 시 한 번에 뽑는 샘플 수
DENSITY_CHUNK = 1 << 20

# ==============================================================================
# 7. CLI (종료 코드)
# ==============================================================================

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_FOUND = 2
EXIT_IO = 3
