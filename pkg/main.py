# main.py
"""
[Hedra 명령줄 도구]
하이퍼그래프 생성기, 국소 테스터, 수정 규칙, 복구, 장애물 탐색을
재현 가능한 실험으로 묶어 주는 진입점입니다.

보고서는 표준 출력에 key=value 줄로, 로그는 표준 에러로 나갑니다.
무작위 명령은 항상 전체 파라미터와 시드를 보고서 머리에 다시 적습니다.

종료 코드: 0 성공, 1 사용법 오류, 2 예산 안에서 찾지 못함, 3 입출력/형식 오류
"""

import argparse
import logging
import sys

from services.config import EXIT_IO, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE, DEFAULT_PROBE_BUDGET, LOG_LEVEL
from services.catalog import PROPERTY_NAMES, get_property
from services.properties import Property, TesterParams, distance, find_monochromatic, load_property, ramsey_scan, run_tester
from services.rules import (
    BUILTIN_RULES, apply_rule, get_builtin_rule, materialize, rule_from_table, verify_entailment_upto,
)
from services.obstructions import (
    CorruptionSpec, defeat_rule_order, find_inconsistent_nine, find_inconsistent_quad, format_obstruction,
    gen_3uniform, gen_corrupted_order, gen_leq3, obstruction_report,
)
from services.repairs import repair_bipartite, repair_total_order
from services.graphon import GRAPHON_NAMES, Graphon, repair_triangle_free, sample_graphon_graph, triangle_density
from core.formats import FormatError, dumps_hgr, read_hgr, read_hgt, write_hgr, write_hgt
from core.hypercore import Morphism, Palette
from core.utils import format_report, make_rng, sample_injections

# 로깅 설정 (표준 에러)
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


class CliUsageError(Exception):
    """argparse 오류를 종료 대신 예외로 바꿉니다."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _emit(fields: dict, block: str = None):
    print(format_report(fields))
    if block:
        print(block)


# ---------------------------------------------------------
# [gen] 손상 인스턴스 / 그래폰 그래프 생성
# ---------------------------------------------------------
def cmd_gen(args) -> int:
    fields = {"command": "gen", "kind": args.kind}
    if args.kind == "graphon":
        p = _resolve_graphon(args)
        if args.n is None:
            raise CliUsageError("gen graphon에는 --n이 필요합니다.")
        _, G = sample_graphon_graph(p, args.n, args.seed)
        write_hgr(G, args.out)
        fields.update({"graphon": p.name, "n": args.n, "seed": args.seed, "out": args.out,
                       "edges": int(G.adjacency().sum()) // 2})
        _emit(fields)
        return EXIT_OK

    if args.m is None:
        raise CliUsageError(f"gen {args.kind}에는 --m이 필요합니다.")
    generator_map = {
        "order": gen_corrupted_order,
        "leq3": gen_leq3,
        "3uniform": gen_3uniform,
    }
    spec = CorruptionSpec(M=args.m, sigma=args.sigma, seed=args.seed)
    clean, noisy = generator_map[args.kind](spec)
    write_hgr(noisy, args.out)
    if args.clean_out:
        write_hgr(clean, args.clean_out)
    fields.update({"m": args.m, "sigma": args.sigma, "seed": args.seed, "n": noisy.n, "out": args.out,
                   "clean_out": args.clean_out, "distance_to_clean": distance(noisy, clean)})
    _emit(fields)
    return EXIT_OK


# ---------------------------------------------------------
# [test] 국소 만족도
# ---------------------------------------------------------
def _resolve_property(args) -> Property:
    if args.hgp:
        return load_property(args.hgp)
    if not args.property:
        raise CliUsageError("--property 또는 --hgp 중 하나가 필요합니다.")
    P = get_property(args.property)
    if P is None:
        raise CliUsageError(f"알 수 없는 속성: {args.property} (가능: {', '.join(PROPERTY_NAMES)})")
    return P


def cmd_test(args) -> int:
    G = read_hgr(args.input)
    P = _resolve_property(args)
    params = TesterParams(N=args.N, delta=args.delta, sample_count=args.samples, seed=args.seed)
    report = run_tester(P, G, params, args.mode)
    _emit({"command": "test", "input": args.input, **report})
    return EXIT_OK


# ---------------------------------------------------------
# [dist] 두 하이퍼그래프 사이 거리
# ---------------------------------------------------------
def cmd_dist(args) -> int:
    G, H = read_hgr(args.left), read_hgr(args.right)
    _emit({"command": "dist", "left": args.left, "right": args.right, "n": G.n, "distance": distance(G, H)})
    return EXIT_OK


# ---------------------------------------------------------
# [repair] 비국소 복구
# ---------------------------------------------------------
def cmd_repair(args) -> int:
    G = read_hgr(args.input)
    header = {"command": "repair", "input": args.input, "output": args.output}
    if args.algo == "order":
        result = repair_total_order(G, args.train, args.seed)
        if result.graph is not None and args.output:
            write_hgr(result.graph, args.output)
        _emit({**header, **result.report})
        return EXIT_OK

    repaired, edit_fraction = repair_bipartite(G, args.train, args.seed)
    if args.output:
        write_hgr(repaired, args.output)
    _emit({**header, "algo": "bipartite", "n": G.n, "train": args.train, "seed": args.seed,
           "status": "ok", "output_n": repaired.n, "edit_fraction": edit_fraction})
    return EXIT_OK


# ---------------------------------------------------------
# [rule] 규칙 적용 / 함의 검증 / 테이블 저장
# ---------------------------------------------------------
# 기본 속성: --property 없이 --entail-upto를 쓸 때
RULE_DEFAULT_PROPERTY = {
    "bipartite-delete": "bipartite",
    "bipartite-majority": "complete-bipartite",
    "anchor-vote": "total-order",
}


def _parse_vertices(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CliUsageError(f"정점 목록은 쉼표로 구분한 정수여야 합니다: {text!r}") from None


def cmd_rule(args) -> int:
    if args.table:
        table_name, palette, a_size, table = read_hgt(args.table)
        rule = rule_from_table(palette, a_size, table, table_name)
    else:
        if not args.name:
            raise CliUsageError("--name 또는 --table 중 하나가 필요합니다.")
        rule = get_builtin_rule(args.name, a_size=args.a_size, seed=args.seed, color=args.color)
        if rule is None:
            raise CliUsageError(f"알 수 없는 규칙: {args.name} (가능: {', '.join(BUILTIN_RULES)})")

    fields = {"command": "rule", "rule": rule.name, "a_size": rule.a_size, "seed": args.seed}
    acted = False

    if args.input:
        if args.anchors is None:
            raise CliUsageError("--input에는 --anchors가 필요합니다.")
        G = read_hgr(args.input)
        anchors = _parse_vertices(args.anchors)
        if len(anchors) != rule.a_size:
            raise CliUsageError(f"앵커 {len(anchors)}개가 규칙의 훈련 크기 {rule.a_size}와 다릅니다.")
        repaired = apply_rule(rule, G, Morphism(anchors, G.n))
        if args.out:
            write_hgr(repaired, args.out)
        fields.update({"input": args.input, "anchors": anchors, "out": args.out, "output_n": repaired.n})
        acted = True

    block = None
    if args.entail_upto is not None:
        name = args.property or RULE_DEFAULT_PROPERTY.get(args.name)
        if name is None:
            raise CliUsageError(f"규칙 '{rule.name}'의 함의 검증에는 --property가 필요합니다.")
        P = get_property(name)
        if P is None:
            raise CliUsageError(f"알 수 없는 속성: {name}")
        found = verify_entailment_upto(rule, P, args.entail_upto, args.mode, args.samples, args.seed)
        fields.update({"property": P.name, "entail_upto": args.entail_upto, "mode": args.mode,
                       "samples": args.samples if args.mode == "mc" else None,
                       "counterexample": None if found is None else "found"})
        if found is not None:
            fields["counterexample_n"] = found.n
            block = "# input\n" + dumps_hgr(found.G) + "# output\n" + dumps_hgr(found.output)
        acted = True

    if args.table_out:
        write_hgt(rule.name, rule.palette, rule.a_size, materialize(rule), args.table_out)
        fields["table_out"] = args.table_out
        acted = True

    if not acted:
        raise CliUsageError("--input, --entail-upto, --table-out 중 하나 이상이 필요합니다.")
    _emit(fields, block)
    return EXIT_OK


# ---------------------------------------------------------
# [obstruct] 장애물 탐색
# ---------------------------------------------------------
def cmd_obstruct(args) -> int:
    # 종류별 (생성기, 팔레트, 기본 규칙)
    kind_map = {
        "pair": (gen_corrupted_order, Palette.graph(), "anchor-vote"),
        "quad": (gen_leq3, Palette.leq3(), "identity-copy"),
        "nine": (gen_3uniform, Palette.uniform(3), "identity-copy"),
    }
    generator, palette, default_rule = kind_map[args.kind]
    rule_name = args.rule or default_rule
    rule = get_builtin_rule(rule_name, palette=palette, a_size=args.anchors, seed=args.seed)
    if rule is None:
        raise CliUsageError(f"알 수 없는 규칙: {rule_name}")
    if rule.a_size != args.anchors:
        raise CliUsageError(f"규칙 '{rule.name}'의 훈련 크기 {rule.a_size}가 --anchors {args.anchors}와 다릅니다.")

    spec = CorruptionSpec(M=args.m, sigma=args.sigma, seed=args.seed)
    _, G = generator(spec)
    anchors = sample_injections(make_rng(args.seed, "obstruct-anchors"), G.n, args.anchors, 1)[0]
    phi = Morphism(anchors, G.n)
    fields = {"command": "obstruct", "kind": args.kind, "m": args.m, "sigma": args.sigma, "seed": args.seed,
              "anchors_count": args.anchors, "budget": args.budget, "rule": rule.name, "n": G.n}

    if args.kind == "pair":
        report = defeat_rule_order(G, rule, phi)
    else:
        Gp = apply_rule(rule, G, phi)
        search = find_inconsistent_quad if args.kind == "quad" else find_inconsistent_nine
        witness = search(G, Gp, anchors, args.budget, args.seed)
        report = None if witness is None else obstruction_report(args.kind, G, Gp, anchors, witness)

    if report is None:
        _emit({**fields, "result": "none"})
        return EXIT_NOT_FOUND
    _emit({**fields, "result": "found"}, format_obstruction(report))
    return EXIT_OK


# ---------------------------------------------------------
# [ramsey] 단색 클리크 / 색칠 전수 탐색
# ---------------------------------------------------------
def cmd_ramsey(args) -> int:
    fields = {"command": "ramsey", "target": args.target}
    if args.input:
        G = read_hgr(args.input)
        clique = find_monochromatic(G, args.target)
        _emit({**fields, "input": args.input, "n": G.n,
               "clique": None if clique is None else list(clique)})
        return EXIT_OK if clique is not None else EXIT_NOT_FOUND

    coloring = ramsey_scan(args.scan, args.target)
    fields.update({"scan": args.scan, "coloring": None if coloring is None else "found"})
    if coloring is None:
        _emit(fields)
        return EXIT_NOT_FOUND
    if args.out:
        write_hgr(coloring, args.out)
        fields["out"] = args.out
    _emit(fields, dumps_hgr(coloring).rstrip("\n"))
    return EXIT_OK


# ---------------------------------------------------------
# [graphon] 샘플링 / 밀도 / 삼각형 제거 복구
# ---------------------------------------------------------
def _resolve_graphon(args) -> Graphon:
    if args.gwn:
        return Graphon.read(args.gwn)
    if not args.graphon:
        raise CliUsageError("--graphon 또는 --gwn 중 하나가 필요합니다.")
    p = Graphon.named(args.graphon)
    if p is None:
        raise CliUsageError(f"알 수 없는 그래폰: {args.graphon} (가능: {', '.join(GRAPHON_NAMES)})")
    return p


def cmd_graphon(args) -> int:
    p = _resolve_graphon(args)
    fields = {"command": "graphon", "graphon": p.name, "seed": args.seed}
    acted = False

    if args.density is not None:
        estimate = triangle_density(p, args.density, args.seed)
        fields.update({"density_samples": estimate.samples, "triangle_density": estimate.value,
                       "triangle_density_stderr": estimate.stderr})
        acted = True

    if args.sample is not None:
        colors, G = sample_graphon_graph(p, args.sample, args.seed)
        if args.out:
            write_hgr(G, args.out)
        fields.update({"sample": args.sample, "out": args.out, "edges": int(G.adjacency().sum()) // 2})
        if args.repair is not None:
            N, sigma = int(args.repair[0]), float(args.repair[1])
            repaired, report = repair_triangle_free(G, colors, p, N, sigma, args.seed)
            if args.repair_out:
                write_hgr(repaired, args.repair_out)
            fields["repair_out"] = args.repair_out
            fields.update({f"repair_{key}": value for key, value in report.items()
                           if key not in ("n", "seed")})
        acted = True
    elif args.repair is not None:
        raise CliUsageError("--repair에는 --sample이 필요합니다.")

    if not acted:
        raise CliUsageError("--sample 또는 --density 중 하나 이상이 필요합니다.")
    _emit(fields)
    return EXIT_OK


# ---------------------------------------------------------
# [Parser]
# ---------------------------------------------------------
def build_parser() -> _Parser:
    parser = _Parser(prog="hedra", description="하이퍼그래프 속성 테스트 및 국소 복구 실험 도구")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    gen = sub.add_parser("gen", help="손상 인스턴스 또는 그래폰 그래프 생성")
    gen.add_argument("kind", choices=["order", "leq3", "3uniform", "graphon"])
    gen.add_argument("--m", type=int)
    gen.add_argument("--sigma", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--clean-out")
    gen.add_argument("--graphon")
    gen.add_argument("--gwn")
    gen.add_argument("--n", type=int)
    gen.set_defaults(handler=cmd_gen)

    test = sub.add_parser("test", help="N-정점 부분 표본의 속성 만족 비율")
    test.add_argument("input")
    test.add_argument("--property")
    test.add_argument("--hgp")
    test.add_argument("--N", type=int, required=True)
    test.add_argument("--mode", choices=["exact", "mc"], default="exact")
    test.add_argument("--samples", type=int, default=1000)
    test.add_argument("--seed", type=int, default=0)
    test.add_argument("--delta", type=float, default=0.0)
    test.set_defaults(handler=cmd_test)

    dist = sub.add_parser("dist", help="두 HGR 파일 사이 거리")
    dist.add_argument("left")
    dist.add_argument("right")
    dist.set_defaults(handler=cmd_dist)

    repair = sub.add_parser("repair", help="전순서 / 완전 이분 복구")
    repair.add_argument("input")
    repair.add_argument("output", nargs="?")
    repair.add_argument("--algo", choices=["order", "bipartite"], required=True)
    repair.add_argument("--train", type=int, required=True)
    repair.add_argument("--seed", type=int, default=0)
    repair.set_defaults(handler=cmd_repair)

    rule = sub.add_parser("rule", help="국소 수정 규칙 적용 및 함의 검증")
    rule.add_argument("--name")
    rule.add_argument("--table")
    rule.add_argument("--a-size", type=int)
    rule.add_argument("--seed", type=int, default=0)
    rule.add_argument("--color", type=int, default=0)
    rule.add_argument("--input")
    rule.add_argument("--anchors")
    rule.add_argument("--out")
    rule.add_argument("--entail-upto", type=int)
    rule.add_argument("--property")
    rule.add_argument("--mode", choices=["exhaustive", "mc"], default="exhaustive")
    rule.add_argument("--samples", type=int, default=10_000)
    rule.add_argument("--table-out")
    rule.set_defaults(handler=cmd_rule)

    obstruct = sub.add_parser("obstruct", help="국소 규칙을 무너뜨리는 장애물 탐색")
    obstruct.add_argument("--kind", choices=["pair", "quad", "nine"], required=True)
    obstruct.add_argument("--m", type=int, required=True)
    obstruct.add_argument("--sigma", type=float, required=True)
    obstruct.add_argument("--seed", type=int, default=0)
    obstruct.add_argument("--anchors", type=int, default=0)
    obstruct.add_argument("--budget", type=int, default=DEFAULT_PROBE_BUDGET)
    obstruct.add_argument("--rule")
    obstruct.set_defaults(handler=cmd_obstruct)

    ramsey = sub.add_parser("ramsey", help="단색 클리크 탐색 / 램지 색칠 전수 탐색")
    ramsey.add_argument("--target", type=int, required=True)
    source = ramsey.add_mutually_exclusive_group(required=True)
    source.add_argument("--input")
    source.add_argument("--scan", type=int)
    ramsey.add_argument("--out")
    ramsey.set_defaults(handler=cmd_ramsey)

    graphon = sub.add_parser("graphon", help="그래폰 샘플링, 삼각형 밀도, 삼각형 제거 복구")
    graphon.add_argument("--graphon")
    graphon.add_argument("--gwn")
    graphon.add_argument("--seed", type=int, default=0)
    graphon.add_argument("--sample", type=int)
    graphon.add_argument("--out")
    graphon.add_argument("--density", type=int)
    graphon.add_argument("--repair", nargs=2, metavar=("N", "SIGMA"))
    graphon.add_argument("--repair-out")
    graphon.set_defaults(handler=cmd_graphon)

    return parser


def cli_dispatch(argv=None) -> int:
    """명령줄 인자를 해석해 하위 명령을 실행하고 종료 코드를 돌려줍니다."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:
        # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except CliUsageError as exc:
        logger.error(f"❌ 사용법 오류: {exc}")
        return EXIT_USAGE
    except (FormatError, OSError) as exc:
        logger.error(f"❌ 입출력/형식 오류: {exc}")
        return EXIT_IO
    except ValueError as exc:
        logger.error(f"❌ 잘못된 입력: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(cli_dispatch(sys.argv[1:]))
