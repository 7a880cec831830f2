# formats.py
"""
[텍스트 교환 포맷 담당]
하이퍼그래프, 속성, 룩업 테이블 규칙, 그래폰을 줄 단위 UTF-8 텍스트로 읽고 씁니다.
모든 포맷은 '#' 이후를 주석으로 무시합니다.

기능 목록:
1. HGR v1: 하이퍼그래프 (헤더 + edge 줄)
2. HGP v1: 금지 유도 부분하이퍼그래프 목록으로 된 속성
3. HGT v1: 룩업 테이블 국소 규칙
4. GWN v1: 균일 격자 계단함수 그래폰
"""

import io
import logging
from math import prod

import numpy as np

from services.config import LOG_LEVEL
from core.hypercore import Hypergraph, Palette, digit_layout, digit_radices
from core.utils import colex_unrank, permutation_table

# 로깅 설정
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


class FormatError(ValueError):
    """입력 파일 형식 오류 (가능하면 줄 번호 포함)"""

    def __init__(self, message: str, line: int = None):
        self.line = line
        prefix = f"{line}번째 줄: " if line is not None else ""
        super().__init__(prefix + message)


# ==============================================================================
# 0. 공통 파서 도구
# ==============================================================================

def _content_lines(text: str):
    """(줄 번호, 토큰 목록) 을 내보냅니다. 빈 줄과 주석은 건너뜁니다."""
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield number, body.split()


def _expect(tokens, number: int, keyword: str, count: int = None) -> list:
    if tokens[0] != keyword:
        raise FormatError(f"'{keyword}' 줄이 필요하지만 '{tokens[0]}'이(가) 왔습니다.", number)
    if count is not None and len(tokens) != count + 1:
        raise FormatError(f"'{keyword}' 줄의 값 개수가 잘못되었습니다.", number)
    return tokens[1:]


def _ints(values, number: int) -> list:
    try:
        return [int(v) for v in values]
    except ValueError:
        raise FormatError(f"정수가 아닌 값이 있습니다: {' '.join(values)}", number) from None


def _read_text(path) -> str:
    logger.info(f"📂 파일 읽기: {path}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except UnicodeDecodeError as exc:
        raise FormatError(f"UTF-8 텍스트가 아닙니다 ({path}, 바이트 {exc.start})") from None


def _write_text(path, text: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    logger.info(f"📂 파일 저장 완료: {path}")


# ==============================================================================
# 1. HGR v1 (하이퍼그래프)
# ==============================================================================

def dumps_hgr(G: Hypergraph) -> str:
    """
    하이퍼그래프를 HGR v1 텍스트로 직렬화합니다.
    색 0이 아닌 튜플만 (레벨, 부분집합 순위, 순열 순위) 순서로 씁니다.
    """
    out = io.StringIO()
    out.write("HGR 1\n")
    out.write(f"order {G.order}\n")
    out.write("palette " + " ".join(str(s) for s in G.palette.sizes) + "\n")
    out.write(f"n {G.n}\n")
    out.write(f"color0 {G.color0}\n")
    for j in range(1, G.order + 1):
        store = G.levels[j]
        full = np.broadcast_to(store, (store.shape[0], permutation_table(j).shape[0]))
        rank, perm = np.nonzero(full)
        if rank.size == 0:
            continue
        subsets = colex_unrank(rank, j, G.n)
        tuples = np.take_along_axis(subsets, permutation_table(j)[perm], axis=1)
        rows = np.column_stack([np.full(rank.size, j), tuples, full[rank, perm]])
        np.savetxt(out, rows, fmt="edge " + " ".join(["%d"] * (j + 2)))
    return out.getvalue()


def loads_hgr(text: str) -> Hypergraph:
    """
    HGR v1 텍스트를 읽습니다. edge 줄의 순서는 자유이며 같은 튜플은 마지막 값이 남습니다.
    읽은 결과가 무방향이면 압축 저장으로 돌려줍니다.
    """
    lines = list(_content_lines(text))
    if len(lines) < 5:
        raise FormatError("HGR 헤더가 불완전합니다.")
    (n1, t1), (n2, t2), (n3, t3), (n4, t4), (n5, t5) = lines[:5]
    if t1 != ["HGR", "1"]:
        raise FormatError("첫 줄은 'HGR 1' 이어야 합니다.", n1)
    order = _ints(_expect(t2, n2, "order", 1), n2)[0]
    sizes = _ints(_expect(t3, n3, "palette"), n3)
    if len(sizes) != order + 1:
        raise FormatError(f"palette 값 개수 {len(sizes)}가 order {order}+1과 다릅니다.", n3)
    n = _ints(_expect(t4, n4, "n", 1), n4)[0]
    color0 = _ints(_expect(t5, n5, "color0", 1), n5)[0]

    try:
        palette = Palette.standard(sizes)
        G = Hypergraph(palette, n)
        G.set_colors(0, np.zeros((1, 0), dtype=np.int64), [color0])
    except ValueError as exc:
        raise FormatError(str(exc), n5) from None

    pending = {j: ([], [], []) for j in range(1, order + 1)}
    for number, tokens in lines[5:]:
        values = _ints(_expect(tokens, number, "edge"), number)
        j = values[0] if values else -1
        if not 1 <= j <= order or len(values) != j + 2:
            raise FormatError(f"edge 줄의 형식이 잘못되었습니다: {' '.join(tokens)}", number)
        tuple_, color = values[1:-1], values[-1]
        if len(set(tuple_)) != j or min(tuple_) < 0 or max(tuple_) >= n:
            raise FormatError(f"edge 튜플의 정점이 잘못되었습니다: {tuple_}", number)
        if not 0 <= color < sizes[j]:
            raise FormatError(f"레벨 {j} 색 {color}가 범위를 벗어났습니다.", number)
        pending[j][0].append(tuple_)
        pending[j][1].append(color)
        pending[j][2].append(number)

    for j, (tuples, colors, _) in pending.items():
        if not tuples:
            continue
        tuples = np.asarray(tuples, dtype=np.int64)
        colors = np.asarray(colors, dtype=np.int64)
        # 마지막 기록만 남기기: 뒤집은 순서의 첫 등장 위치
        keys = np.unique(tuples[::-1], axis=0, return_index=True)[1]
        last = len(tuples) - 1 - keys
        G.set_colors(j, tuples[last], colors[last])

    if G.is_undirected():
        G = G.compacted()
    return G


def write_hgr(G: Hypergraph, path):
    _write_text(path, dumps_hgr(G))


def read_hgr(path) -> Hypergraph:
    return loads_hgr(_read_text(path))


# ==============================================================================
# 2. HGP v1 (금지 유도 부분하이퍼그래프 속성)
# ==============================================================================

def dumps_hgp(name: str, palette: Palette, members) -> str:
    lines = ["HGP 1", "palette " + " ".join(str(s) for s in palette.sizes), f"name {name}"]
    for member in members:
        lines.append("forbid")
        lines.append(dumps_hgr(member).rstrip("\n"))
        lines.append("end")
    return "\n".join(lines) + "\n"


def loads_hgp(text: str) -> tuple:
    """
    HGP v1 텍스트를 (이름, 팔레트, 금지 목록) 으로 읽습니다.
    forbid ... end 블록 안은 HGR v1 본문입니다.
    """
    raw_lines = text.splitlines()
    lines = list(_content_lines(text))
    if len(lines) < 2 or lines[0][1] != ["HGP", "1"]:
        raise FormatError("첫 줄은 'HGP 1' 이어야 합니다.", lines[0][0] if lines else None)
    number, tokens = lines[1]
    sizes = _ints(_expect(tokens, number, "palette"), number)
    try:
        palette = Palette.standard(sizes)
    except ValueError as exc:
        raise FormatError(str(exc), number) from None

    name = "unnamed"
    members = []
    index = 2
    if index < len(lines) and lines[index][1][0] == "name":
        name = " ".join(lines[index][1][1:]) or name
        index += 1

    while index < len(lines):
        number, tokens = lines[index]
        _expect(tokens, number, "forbid", 0)
        close = index + 1
        while close < len(lines) and lines[close][1] != ["end"]:
            close += 1
        if close == len(lines):
            raise FormatError("forbid 블록이 'end'로 닫히지 않았습니다.", number)
        body = "\n".join(raw_lines[number:lines[close][0] - 1])
        member = loads_hgr(body)
        if member.palette.sizes != palette.sizes:
            raise FormatError("forbid 블록의 팔레트가 헤더와 다릅니다.", number)
        members.append(member)
        index = close + 1
    return name, palette, members


def write_hgp(name: str, palette: Palette, members, path):
    _write_text(path, dumps_hgp(name, palette, members))


def read_hgp(path) -> tuple:
    return loads_hgp(_read_text(path))


# ==============================================================================
# 3. HGT v1 (룩업 테이블 규칙)
# ==============================================================================

_BASE36 = "0123456789abcdefghijklmnopqrstuvwxyz"


def encode_pullback(palette: Palette, m: int, digits) -> str:
    """풀백 숫자열을 레벨별 36진 문자열로 만들고 '/'로 잇습니다."""
    digits = np.asarray(digits).reshape(-1)
    parts = []
    for offset, rows, width in digit_layout(palette, m):
        parts.append("".join(_BASE36[int(d)] for d in digits[offset:offset + rows * width]))
    return "/".join(parts)


def decode_pullback(palette: Palette, m: int, encoding: str, line: int = None) -> np.ndarray:
    parts = encoding.split("/")
    layout = digit_layout(palette, m)
    if len(parts) != len(layout):
        raise FormatError(f"레벨 개수가 맞지 않는 인코딩입니다: {encoding}", line)
    digits = []
    for j, (part, (_, rows, width)) in enumerate(zip(parts, layout)):
        if len(part) != rows * width:
            raise FormatError(f"레벨 {j}의 자리 수가 맞지 않습니다: {encoding}", line)
        for ch in part:
            value = _BASE36.find(ch)
            if not 0 <= value < palette.sizes[j]:
                raise FormatError(f"레벨 {j} 자리 '{ch}'가 범위를 벗어났습니다.", line)
            digits.append(value)
    return np.asarray(digits, dtype=palette.dtype)


def dumps_hgt(name: str, palette: Palette, a_size: int, table: dict) -> str:
    """
    table: {레벨 j: {풀백 숫자열 bytes: 출력 색}}
    """
    if max(palette.sizes) > len(_BASE36):
        raise FormatError("HGT v1은 레벨당 색이 36개 이하인 팔레트만 지원합니다.")
    lines = ["HGT 1", "palette " + " ".join(str(s) for s in palette.sizes), f"a_size {a_size}", f"name {name}"]
    for j in sorted(table):
        m = a_size + j
        for key in sorted(table[j]):
            digits = np.frombuffer(key, dtype=palette.dtype)
            lines.append(f"table {j} {encode_pullback(palette, m, digits)} {table[j][key]}")
    return "\n".join(lines) + "\n"


def loads_hgt(text: str) -> tuple:
    """
    HGT v1 텍스트를 (이름, 팔레트, a_size, 테이블) 로 읽습니다.
    각 레벨의 테이블이 모든 풀백을 빠짐없이 담고 있는지 확인합니다.
    """
    lines = list(_content_lines(text))
    if len(lines) < 3 or lines[0][1] != ["HGT", "1"]:
        raise FormatError("첫 줄은 'HGT 1' 이어야 합니다.", lines[0][0] if lines else None)
    number, tokens = lines[1]
    sizes = _ints(_expect(tokens, number, "palette"), number)
    try:
        palette = Palette.standard(sizes)
    except ValueError as exc:
        raise FormatError(str(exc), number) from None
    number, tokens = lines[2]
    a_size = _ints(_expect(tokens, number, "a_size", 1), number)[0]
    index = 3
    name = "table"
    if index < len(lines) and lines[index][1][0] == "name":
        name = " ".join(lines[index][1][1:]) or name
        index += 1

    table = {j: {} for j in range(palette.order + 1)}
    for number, tokens in lines[index:]:
        values = _expect(tokens, number, "table", 3)
        j, color = _ints([values[0], values[2]], number)
        if not 0 <= j <= palette.order:
            raise FormatError(f"존재하지 않는 레벨입니다: {j}", number)
        if not 0 <= color < palette.sizes[j]:
            raise FormatError(f"레벨 {j} 출력 색 {color}가 범위를 벗어났습니다.", number)
        digits = decode_pullback(palette, a_size + j, values[1], number)
        table[j][digits.tobytes()] = color

    for j, entries in table.items():
        expected = prod(int(r) for r in digit_radices(palette, a_size + j))
        if len(entries) != expected:
            raise FormatError(f"레벨 {j} 테이블이 불완전합니다: {len(entries)}/{expected}")
    return name, palette, a_size, table


def write_hgt(name: str, palette: Palette, a_size: int, table: dict, path):
    _write_text(path, dumps_hgt(name, palette, a_size, table))


def read_hgt(path) -> tuple:
    return loads_hgt(_read_text(path))


# ==============================================================================
# 4. GWN v1 (계단함수 그래폰)
# ==============================================================================

def dumps_gwn(grid) -> str:
    grid = np.asarray(grid, dtype=float)
    lines = ["GWN 1", f"m {grid.shape[0]}"]
    lines.extend(" ".join(repr(float(x)) for x in row) for row in grid)
    return "\n".join(lines) + "\n"


def loads_gwn(text: str) -> np.ndarray:
    """GWN v1 텍스트를 (m, m) 실수 격자로 읽습니다. 값은 [0, 1] 범위여야 합니다."""
    lines = list(_content_lines(text))
    if len(lines) < 2 or lines[0][1] != ["GWN", "1"]:
        raise FormatError("첫 줄은 'GWN 1' 이어야 합니다.", lines[0][0] if lines else None)
    number, tokens = lines[1]
    m = _ints(_expect(tokens, number, "m", 1), number)[0]
    if m < 1 or len(lines) != m + 2:
        raise FormatError(f"격자 크기 m={m}와 행 개수 {len(lines) - 2}가 맞지 않습니다.", number)
    grid = np.empty((m, m), dtype=float)
    for i, (number, tokens) in enumerate(lines[2:]):
        if len(tokens) != m:
            raise FormatError(f"행의 값 개수 {len(tokens)}가 m={m}와 다릅니다.", number)
        try:
            grid[i] = [float(v) for v in tokens]
        except ValueError:
            raise FormatError("실수가 아닌 값이 있습니다.", number) from None
        if not np.all((grid[i] >= 0.0) & (grid[i] <= 1.0)):
            raise FormatError("그래폰 값은 [0, 1] 범위여야 합니다.", number)
    return grid


def write_gwn(grid, path):
    _write_text(path, dumps_gwn(grid))


def read_gwn(path) -> np.ndarray:
    return loads_gwn(_read_text(path))
