import json

import pytest
from hypothesis import given

from rainbow_preorder.coloring import (
    ColoringError,
    EdgeColoring,
    color_degree,
    color_stats,
    coloring_from_json,
    dump_coloring,
    edge_index,
    edge_list,
    is_rainbow_edge_set,
    load_coloring,
    normalize_colors,
    num_colors,
)

from conftest import colorings


def test_edge_index_is_lexicographic():
    for n in range(2, 8):
        for i, (u, v) in enumerate(edge_list(n)):
            assert edge_index(n, u, v) == i
            assert edge_index(n, v, u) == i


def test_color_lookup_is_symmetric():
    kc = EdgeColoring.from_function(5, lambda u, v: u * 10 + v)
    assert kc.color(2, 4) == kc.color(4, 2) == 24
    assert kc.matrix[4][2] == 24 and kc.matrix[3][3] == 0


def test_rejects_bad_input():
    with pytest.raises(ColoringError):
        EdgeColoring(4, (1, 2, 3))
    with pytest.raises(ColoringError):
        EdgeColoring(3, (1, 0, 2))
    with pytest.raises(ColoringError):
        EdgeColoring.from_mapping(3, {(1, 2): 1, (1, 3): 2})
    with pytest.raises(ColoringError):
        EdgeColoring(3, (1, 1, 1)).color(1, 4)


def test_color_degree_example():
    # K4, star at vertex 1 colored 1,2,3, the rest 4
    kc = EdgeColoring.from_function(4, lambda u, v: v - 1 if u == 1 else 4)
    assert color_degree(kc, 1) == 3
    assert color_degree(kc, 2) == 2
    stats = color_stats(kc)
    assert stats.num_colors == 4 and stats.max_color_degree == 3
    with pytest.raises(ColoringError):
        color_degree(kc, 5)


def test_is_rainbow_edge_set():
    kc = EdgeColoring(4, (1, 2, 3, 1, 2, 3))
    assert is_rainbow_edge_set(kc, [(1, 2), (1, 3), (1, 4)])
    assert not is_rainbow_edge_set(kc, [(1, 2), (2, 3)])
    with pytest.raises(ColoringError):
        is_rainbow_edge_set(kc, [(1, 5)])


@given(colorings(max_n=6))
def test_normalize_is_idempotent_and_preserves_partition(kc):
    a = normalize_colors(kc)
    assert normalize_colors(a) == a
    assert num_colors(a) == num_colors(kc)
    assert a.colors[:1] in ((), (1,))
    for i in range(len(kc.colors)):
        for j in range(len(kc.colors)):
            assert (kc.colors[i] == kc.colors[j]) == (a.colors[i] == a.colors[j])


@given(colorings(max_n=6))
def test_json_roundtrip(kc):
    text = dump_coloring(kc)
    back = coloring_from_json(json.loads(text))
    assert back == normalize_colors(kc)


def test_json_rejects_duplicates_and_gaps(tmp_path):
    with pytest.raises(ColoringError):
        coloring_from_json({"n": 3, "colors": [[1, 2, 1], [2, 1, 2], [1, 3, 1], [2, 3, 1]]})
    with pytest.raises(ColoringError):
        coloring_from_json({"n": 3, "colors": [[1, 2, 1], [1, 3, 1]]})
    with pytest.raises(ColoringError):
        coloring_from_json({"colors": []})
    path = tmp_path / "k3.json"
    dump_coloring(EdgeColoring(3, (5, 5, 9)), path, extra={"note": "x"})
    data = json.loads(path.read_text())
    assert list(data)[0] == "note"
    assert load_coloring(path).colors == (1, 1, 2)
