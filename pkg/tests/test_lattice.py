"""Tower construction, edge rules and Kasteleyn sign structure."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerdimer.lattice import (
    Coord,
    build_tower,
    column_split,
    edge_between,
    face_edges,
    row_bounds,
    tower_faces,
    tower_from_json,
    tower_to_json,
    vertex_colors,
)

A = Fraction(2, 3)
B = Fraction(5, 7)


def test_column_split_inverts_x():
    for x in range(0, 31):
        k, m = column_split(x)
        assert 3 * k - m == x
        assert m in (1, 2, 3)


def test_size_one_tower_vertices():
    g = build_tower(1, A, B)
    assert set(g.whites) == {Coord(0, 0), Coord(1, -1), Coord(1, 0), Coord(3, -2), Coord(3, -1)}
    assert set(g.blacks) == {Coord(1, -1), Coord(1, 0), Coord(2, -2), Coord(2, -1), Coord(2, 0)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_white_black_balance(n):
    g = build_tower(n, A, B)
    assert len(g.whites) == len(g.blacks)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_row_bounds_match_vertex_set(n):
    g = build_tower(n, A, B)
    whites = set(g.whites) | set(g.blacks)
    for x in range(0, 3 * n + 1):
        lo, hi = row_bounds(n, x)
        for u in range(lo, hi + 1):
            assert any(Coord(x, u) in s for s in (set(g.whites), set(g.blacks)))
        assert Coord(x, lo - 1) not in whites
        assert Coord(x, hi + 1) not in whites


def test_face_sign_products():
    # squares have sign product -1, hexagons +1
    for n in (1, 2):
        g = build_tower(n, A, B)
        for fx, fu in tower_faces(g):
            edges = face_edges(fx, fu, A, B)
            prod = 1
            for e in edges:
                prod *= e.sign
            assert prod == (1 if fx % 3 == 1 else -1), (fx, fu)


def test_edge_weights_by_type():
    # horizontal edges weigh 1, the two diagonal types weigh alpha / beta
    e = edge_between(Coord(3, -1), Coord(4, -2), A, B)  # down-right from X%3==0
    assert e.weight == A
    e = edge_between(Coord(3, -1), Coord(2, 0), A, B)  # up-left from X%3==0
    assert e.weight == B
    e = edge_between(Coord(1, 0), Coord(1, 0), A, B)  # doubled site
    assert e.weight == 1


def test_no_edge_between_far_vertices():
    assert edge_between(Coord(0, 0), Coord(2, 0), A, B) is None
    assert edge_between(Coord(0, 0), Coord(1, 1), A, B) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=4))
def test_json_roundtrip(n):
    g = build_tower(n, A, B)
    assert tower_from_json(tower_to_json(g)) == g
