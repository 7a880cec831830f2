import numpy as np
import pytest

from conftest import graph_from_edges
from core.formats import (
    FormatError,
    decode_pullback,
    dumps_gwn,
    dumps_hgp,
    dumps_hgr,
    dumps_hgt,
    encode_pullback,
    loads_gwn,
    loads_hgp,
    loads_hgr,
    loads_hgt,
    read_gwn,
    read_hgr,
    write_gwn,
    write_hgr,
)
from core.hypercore import Palette, random_hypergraph
from services.catalog import triangle_family
from services.rules import materialize, rule_bipartite_delete


def test_hgr_text_layout():
    G = graph_from_edges(3, [(0, 1)])
    assert dumps_hgr(G) == "HGR 1\norder 2\npalette 1 1 2\nn 3\ncolor0 0\nedge 2 0 1 1\n"


def test_hgr_reserialization_is_byte_identical():
    G = random_hypergraph(Palette.standard((2, 3, 2, 2)), 6, seed=11)
    text = dumps_hgr(G)
    H = loads_hgr(text)
    assert H == G
    assert dumps_hgr(H) == text


def test_hgr_ignores_comments_and_keeps_last_duplicate():
    text = "# header\nHGR 1\norder 2\npalette 1 1 2\nn 3  # three\ncolor0 0\nedge 2 1 0 1\nedge 2 1 0 0\nedge 2 0 2 1\n"
    G = loads_hgr(text)
    assert G.get((1, 0)) == 0
    assert G.get((0, 2)) == 1
    assert G.get((2, 0)) == 0


def test_hgr_undirected_input_loads_compact():
    G = loads_hgr("HGR 1\norder 2\npalette 1 1 2\nn 3\ncolor0 0\nedge 2 0 1 1\nedge 2 1 0 1\n")
    assert G.is_compact(2)
    assert G.is_undirected()


@pytest.mark.parametrize("text, line", [
    ("HGR 2\norder 2\npalette 1 1 2\nn 3\ncolor0 0\n", 1),
    ("HGR 1\norder 2\npalette 1 2\nn 3\ncolor0 0\n", 3),
    ("HGR 1\norder 2\npalette 1 1 2\nn 3\ncolor0 0\nedge 2 0 3 1\n", 6),
    ("HGR 1\norder 2\npalette 1 1 2\nn 3\ncolor0 0\nedge 2 0 1 2\n", 6),
    ("HGR 1\norder 2\npalette 1 1 2\nn 3\ncolor0 0\nedge 2 0 0 1\n", 6),
    ("HGR 1\norder 2\npalette 1 1 2\nn x\ncolor0 0\n", 4),
])
def test_hgr_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as info:
        loads_hgr(text)
    assert info.value.line == line


def test_hgr_file_round_trip(tmp_path):
    G = random_hypergraph(Palette.graph(), 5, seed=2)
    path = tmp_path / "g.hgr"
    write_hgr(G, path)
    assert read_hgr(path) == G


def test_non_utf8_file_is_a_format_error(tmp_path):
    path = tmp_path / "binary.hgr"
    path.write_bytes(b"\xff\xfe")
    with pytest.raises(FormatError):
        read_hgr(path)


def test_hgp_round_trip():
    members = triangle_family()[:3]
    name, palette, loaded = loads_hgp(dumps_hgp("triangles", Palette.graph(), members))
    assert name == "triangles"
    assert palette == Palette.graph()
    assert loaded == members


def test_hgp_unclosed_block():
    text = "HGP 1\npalette 1 1 2\nname x\nforbid\nHGR 1\norder 2\npalette 1 1 2\nn 1\ncolor0 0\n"
    with pytest.raises(FormatError) as info:
        loads_hgp(text)
    assert info.value.line == 4


def test_pullback_encoding_round_trip():
    palette = Palette.graph()
    digits = np.array([0, 0, 0, 0, 1, 1, 0, 0, 1, 1], dtype=palette.dtype)
    text = encode_pullback(palette, 3, digits)
    assert text == "0/000/110011"
    assert np.array_equal(decode_pullback(palette, 3, text), digits)
    with pytest.raises(FormatError):
        decode_pullback(palette, 3, "0/000/01100")


def test_hgt_round_trip_and_completeness():
    table = materialize(rule_bipartite_delete())
    text = dumps_hgt("bipartite-delete", Palette.graph(), 1, table)
    name, palette, a_size, loaded = loads_hgt(text)
    assert (name, a_size) == ("bipartite-delete", 1)
    assert palette == Palette.graph()
    assert loaded == table

    truncated = "\n".join(text.splitlines()[:-1]) + "\n"
    with pytest.raises(FormatError):
        loads_hgt(truncated)


def test_gwn_round_trip(tmp_path):
    grid = np.array([[0.8, 0.1], [0.1, 0.6]])
    assert np.array_equal(loads_gwn(dumps_gwn(grid)), grid)
    path = tmp_path / "p.gwn"
    write_gwn(grid, path)
    assert np.array_equal(read_gwn(path), grid)


def test_gwn_rejects_values_outside_unit_interval():
    with pytest.raises(FormatError) as info:
        loads_gwn("GWN 1\nm 2\n0 1\n1 1.5\n")
    assert info.value.line == 4
