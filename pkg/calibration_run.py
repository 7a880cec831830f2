# calibration_run.py
'''
몬테카를로 보정 실행 스크립트입니다.
장애물 탐색과 복구 절차를 여러 시드로 돌려 성공률과 통계를 CSV로 남깁니다.

사용 예:
    python calibration_run.py --suite pair --seeds 100
    python calibration_run.py --suite all --seeds 20 --out calibration_summary.csv
'''

import argparse
import logging
import time

import pandas as pd
from joblib import Parallel, delayed

# ✅ 설정은 config.py에서 가져옵니다
from services.config import HEDRA_THREADS, LOG_LEVEL
from services.catalog import get_property
from services.properties import obeys
from services.rules import apply_rule, get_builtin_rule
from services.obstructions import (
    CorruptionSpec, defeat_rule_order, find_inconsistent_nine, find_inconsistent_quad,
    find_indistinguishable_pair, gen_3uniform, gen_corrupted_order, gen_leq3,
)
from services.repairs import gen_corrupted_bipartite, repair_bipartite, repair_total_order
from services.graphon import Graphon, repair_triangle_free, sample_graphon_graph
from core.hypercore import Morphism, Palette
from core.utils import make_rng, sample_injections

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


def _anchors(seed: int, n: int, count: int):
    return sample_injections(make_rng(seed, "calibration-anchors"), n, count, 1)[0]


# ==============================================================================
# 1. 스위트 (시드 하나당 한 행)
# ==============================================================================

def run_pair(seed: int) -> dict:
    """M=2000, σ=0.01, 앵커 5개: 구별 불가능 쌍과 세 규칙의 패배"""
    _, G = gen_corrupted_order(CorruptionSpec(M=2000, sigma=0.01, seed=seed))
    anchors = _anchors(seed, G.n, 5)
    found = find_indistinguishable_pair(G, anchors) is not None
    rules = [
        get_builtin_rule("anchor-vote", a_size=5),
        get_builtin_rule("random-table", a_size=5, seed=seed),
        get_builtin_rule("random-table", a_size=5, seed=seed + 1),
    ]
    phi = Morphism(anchors, G.n)
    defeated = False
    if found:
        reports = [defeat_rule_order(G, rule, phi) for rule in rules]
        defeated = all(r is not None and "rule-not-total-order" in r.checked_conditions for r in reports)
    return {"success": found, "defeated": defeated}


def run_order(seed: int) -> dict:
    """M=5000, σ=0.01, N'=50: 전순서 복구"""
    _, G = gen_corrupted_order(CorruptionSpec(M=5000, sigma=0.01, seed=seed))
    result = repair_total_order(G, 50, seed)
    if result.graph is None:
        return {"success": False}
    leftover = result.report["leftover_fraction"]
    return {"success": True, "edit_fraction": result.edit_fraction, "leftover_fraction": leftover,
            "edit_ok": result.edit_fraction <= 0.05, "leftover_ok": leftover <= 0.02}


def _run_tuple_search(seed: int, generator, palette: Palette, M: int, count: int, search) -> dict:
    _, G = generator(CorruptionSpec(M=M, sigma=0.02, seed=seed))
    anchors = _anchors(seed, G.n, count)
    rule = get_builtin_rule("identity-copy", palette=palette, a_size=count)
    Gp = apply_rule(rule, G, Morphism(anchors, G.n))
    return {"success": search(G, Gp, anchors, 10_000_000, seed) is not None}


def run_quad(seed: int) -> dict:
    """M=500, σ=0.02, 앵커 4개, 예산 10^7"""
    return _run_tuple_search(seed, gen_leq3, Palette.leq3(), 500, 4, find_inconsistent_quad)


def run_nine(seed: int) -> dict:
    """M=250, σ=0.02, 앵커 3개, 예산 10^7"""
    return _run_tuple_search(seed, gen_3uniform, Palette.uniform(3), 250, 3, find_inconsistent_nine)


def run_bipartite(seed: int) -> dict:
    """n=200, 뒤집기 5%, |A|=30: 이분 다수결 복구"""
    _, G, _ = gen_corrupted_bipartite(200, 0.05, seed)
    repaired, edit_fraction = repair_bipartite(G, 30, seed)
    exact = obeys(get_property("complete-bipartite"), repaired)
    return {"success": exact, "edit_fraction": edit_fraction, "edit_ok": edit_fraction <= 0.1}


def run_graphon(seed: int) -> dict:
    """완전 이분 그래폰, n=300, N=64, σ=0.1: 삼각형 제거 복구"""
    p = Graphon.named("complete-bipartite")
    colors, G = sample_graphon_graph(p, 300, seed)
    _, report = repair_triangle_free(G, colors, p, 64, 0.1, seed)
    return {"success": report["residual_triangles"] == 0, "edit_fraction": report["edit_fraction"],
            "edit_ok": report["edit_fraction"] <= 0.05}


# 키: --suite 이름, 값: 시드 하나를 처리하는 함수
suite_map = {
    "pair": run_pair,
    "order": run_order,
    "quad": run_quad,
    "nine": run_nine,
    "bipartite": run_bipartite,
    "graphon": run_graphon,
}


def _timed(suite: str, seed: int) -> dict:
    start = time.perf_counter()
    row = suite_map[suite](seed)
    return {"suite": suite, "seed": seed, **row, "seconds": time.perf_counter() - start}


# ==============================================================================
# 2. 요약
# ==============================================================================

def summarize(rows: list) -> pd.DataFrame:
    """스위트별 평균 / 중앙값 / 90% 분위수. 불리언 열의 평균은 성공률입니다."""
    df = pd.DataFrame(rows)
    metrics = df.drop(columns=["seed"])
    for column in metrics.columns.drop("suite"):
        metrics[column] = metrics[column].astype(float)
    grouped = metrics.groupby("suite")
    summary = pd.concat({
        "mean": grouped.mean(),
        "median": grouped.median(),
        "p90": grouped.quantile(0.9),
    }, axis=1)
    summary.columns = [f"{column}_{stat}" for stat, column in summary.columns]
    summary.insert(0, "seeds", grouped.size())
    return summary.dropna(axis=1, how="all")


def main(argv=None):
    parser = argparse.ArgumentParser(description="몬테카를로 보정 실행")
    parser.add_argument("--suite", choices=[*suite_map, "all"], default="all")
    parser.add_argument("--seeds", type=int, default=100)
    parser.add_argument("--out", default="calibration_summary.csv")
    parser.add_argument("--raw-out", help="시드별 행을 저장할 CSV 경로")
    args = parser.parse_args(argv)

    suites = list(suite_map) if args.suite == "all" else [args.suite]
    jobs = [(suite, seed) for suite in suites for seed in range(args.seeds)]
    print(f"🚀 보정 실행 시작: 스위트={suites}, 시드={args.seeds}, 워커={HEDRA_THREADS}")
    rows = Parallel(n_jobs=HEDRA_THREADS)(delayed(_timed)(suite, seed) for suite, seed in jobs)

    if args.raw_out:
        pd.DataFrame(rows).to_csv(args.raw_out, index=False)
    summary = summarize(rows)
    summary.to_csv(args.out)
    print(summary.to_string())
    print(f"✅ 요약 저장 완료: {args.out}")
    return summary


if __name__ == "__main__":
    main()
