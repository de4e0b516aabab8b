"""Square-hexagon lattice and finite tower graphs.

Vertices sit at integer points (X, U).  Column X carries white vertices when
X % 3 in {0, 1} and black vertices when X % 3 in {1, 2}; columns X % 3 == 1
carry one of each.  Edge weights are 1 except for one beta edge and one alpha
edge per fundamental domain.  Kasteleyn signs are baked into the edge table;
the face products are checked in the tests (squares multiply to -1, hexagons
to +1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple


class Coord(NamedTuple):
    x: int
    u: int


class Edge(NamedTuple):
    white: Coord
    black: Coord
    weight: Fraction
    sign: int

    @property
    def signed_weight(self) -> Fraction:
        return self.sign * self.weight


WHITE = "white"
BLACK = "black"


def column_split(x: int) -> tuple[int, int]:
    """Write X = 3k - m with m in {1, 2, 3}; return (k, m)."""
    r = x % 3
    m = {0: 3, 1: 2, 2: 1}[r]
    return (x + m) // 3, m


def vertex_colors(x: int) -> frozenset[str]:
    """Colors of vertices present in column X."""
    r = x % 3
    if r == 0:
        return frozenset({WHITE})
    if r == 1:
        return frozenset({WHITE, BLACK})
    return frozenset({BLACK})


def is_white_column(x: int) -> bool:
    return x % 3 in (0, 1)


def is_black_column(x: int) -> bool:
    return x % 3 in (1, 2)


# Adjacency table, keyed by white-column residue and the offset from the
# white vertex to the black vertex.  Entries are (sign, kind) where kind
# selects the weight: "unit" -> 1, "alpha" -> alpha, "beta" -> beta.
_WHITE_RULES = {
    0: {
        (-1, 0): (1, "unit"),    # horizontal, black column on the left
        (1, 0): (-1, "unit"),    # horizontal, black column on the right
        (-1, 1): (1, "beta"),    # up-left beta edge
        (1, -1): (1, "alpha"),   # down-right alpha edge
    },
    1: {
        (0, 0): (1, "unit"),     # doubled-site edge
        (1, 0): (-1, "unit"),    # horizontal, black column on the right
        (1, -1): (1, "unit"),    # down-right edge
    },
}


def edge_between(
    white: Coord, black: Coord, alpha: Fraction, beta: Fraction
) -> Edge | None:
    """The lattice edge joining a white and a black vertex, if any."""
    white = Coord(*white)
    black = Coord(*black)
    if not is_white_column(white.x) or not is_black_column(black.x):
        return None
    rules = _WHITE_RULES[white.x % 3]
    off = (black.x - white.x, black.u - white.u)
    if off not in rules:
        return None
    sign, kind = rules[off]
    weight = {"unit": Fraction(1), "alpha": Fraction(alpha), "beta": Fraction(beta)}[kind]
    return Edge(white, black, weight, sign)


def incident_edges(c: Coord, color: str, alpha, beta) -> list[Edge]:
    """All lattice edges at the vertex of the given color at c."""
    c = Coord(*c)
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    out = []
    if color == WHITE:
        if not is_white_column(c.x):
            raise ValueError(f"no white vertex in column {c.x}")
        for off in _WHITE_RULES[c.x % 3]:
            e = edge_between(c, Coord(c.x + off[0], c.u + off[1]), alpha, beta)
            assert e is not None
            out.append(e)
    elif color == BLACK:
        if not is_black_column(c.x):
            raise ValueError(f"no black vertex in column {c.x}")
        for dx in (-1, 0, 1):
            wx = c.x + dx
            if not is_white_column(wx):
                continue
            for du in (-1, 0, 1):
                e = edge_between(Coord(wx, c.u + du), c, alpha, beta)
                if e is not None:
                    out.append(e)
    else:
        raise ValueError(f"unknown color {color!r}")
    return sorted(out)


def row_bounds(n: int, x: int) -> tuple[int, int]:
    """Inclusive (low, high) range of U for column X of the size-n tower."""
    q = x // 3
    return -x + q, n - q - 1


def vertex_in_tower(n: int, c: Coord) -> bool:
    x, u = c
    if not 0 <= x <= 3 * n:
        return False
    lo, hi = row_bounds(n, x)
    return lo <= u <= hi


@dataclass(frozen=True)
class TowerGraph:
    """Finite tower: the induced subgraph on columns 0..3N of the lattice."""

    n: int
    alpha: Fraction
    beta: Fraction
    whites: tuple[Coord, ...] = field(repr=False)
    blacks: tuple[Coord, ...] = field(repr=False)
    edges: tuple[Edge, ...] = field(repr=False)

    def white_index(self) -> dict[Coord, int]:
        return {c: i for i, c in enumerate(self.whites)}

    def black_index(self) -> dict[Coord, int]:
        return {c: i for i, c in enumerate(self.blacks)}

    def edges_at(self, c: Coord, color: str) -> list[Edge]:
        c = Coord(*c)
        if color == WHITE:
            return [e for e in self.edges if e.white == c]
        return [e for e in self.edges if e.black == c]


def build_tower(n: int, alpha, beta) -> TowerGraph:
    if n < 0:
        raise ValueError("tower size must be nonnegative")
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise ValueError("edge weight parameters must be positive")
    whites: list[Coord] = []
    blacks: list[Coord] = []
    for x in range(0, 3 * n + 1):
        lo, hi = row_bounds(n, x)
        for u in range(lo, hi + 1):
            if is_white_column(x):
                whites.append(Coord(x, u))
            if is_black_column(x):
                blacks.append(Coord(x, u))
    wset = set(whites)
    edges = []
    for b in blacks:
        for e in incident_edges(b, BLACK, alpha, beta):
            if e.white in wset:
                edges.append(e)
    return TowerGraph(
        n=n,
        alpha=alpha,
        beta=beta,
        whites=tuple(whites),
        blacks=tuple(blacks),
        edges=tuple(sorted(edges)),
    )


# --- faces ------------------------------------------------------------------

# Face (X, U) is the bounded face containing the point (X, U + 1/2).  Columns
# X % 3 == 0 and 2 carry quadrilateral faces, X % 3 == 1 carries hexagons.
# Boundary vertices are listed counterclockwise as (color, coord) pairs.


def face_boundary(x: int, u: int) -> list[tuple[str, Coord]]:
    r = x % 3
    if r == 0:
        return [
            (WHITE, Coord(x, u)),
            (BLACK, Coord(x + 1, u)),
            (WHITE, Coord(x, u + 1)),
            (BLACK, Coord(x - 1, u + 1)),
        ]
    if r == 1:
        return [
            (BLACK, Coord(x, u)),
            (WHITE, Coord(x, u)),
            (BLACK, Coord(x + 1, u)),
            (WHITE, Coord(x, u + 1)),
            (BLACK, Coord(x, u + 1)),
            (WHITE, Coord(x - 1, u + 1)),
        ]
    return [
        (BLACK, Coord(x, u)),
        (WHITE, Coord(x + 1, u)),
        (BLACK, Coord(x, u + 1)),
        (WHITE, Coord(x - 1, u + 1)),
    ]


def face_edges(x: int, u: int, alpha, beta) -> list[Edge]:
    cyc = face_boundary(x, u)
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    out = []
    k = len(cyc)
    for i in range(k):
        (c1, v1), (c2, v2) = cyc[i], cyc[(i + 1) % k]
        white, black = (v1, v2) if c1 == WHITE else (v2, v1)
        e = edge_between(white, black, alpha, beta)
        if e is None:
            raise ValueError(f"face ({x},{u}) boundary is not a cycle of edges")
        out.append(e)
    return out


def tower_faces(g: TowerGraph) -> list[Coord]:
    """Faces all of whose boundary edges lie in the tower."""
    eset = set(g.edges)
    out = []
    for x in range(0, 3 * g.n + 1):
        lo, hi = row_bounds(g.n, x)
        for u in range(lo - 1, hi + 1):
            try:
                fe = face_edges(x, u, g.alpha, g.beta)
            except ValueError:
                continue
            if all(e in eset for e in fe):
                out.append(Coord(x, u))
    return out


# --- geometry (for rendering and orientation decisions) ---------------------


def vertex_position(c: Coord, color: str) -> tuple[float, float]:
    """Planar embedding; doubled sites are split horizontally."""
    x, u = c
    if x % 3 == 1:
        dx = 0.22 if color == WHITE else -0.22
        return (x + dx, float(u))
    return (float(x), float(u))


def face_position(x: int, u: int) -> tuple[float, float]:
    if x % 3 == 1:
        pts = [vertex_position(c, col) for col, c in face_boundary(x, u)]
        return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
    return (float(x), u + 0.5)


# --- serialization ----------------------------------------------------------


def fraction_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fraction_from_str(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def tower_to_json(g: TowerGraph) -> str:
    doc = {
        "version": 1,
        "n": g.n,
        "alpha": fraction_to_str(g.alpha),
        "beta": fraction_to_str(g.beta),
        "whites": [list(c) for c in g.whites],
        "blacks": [list(c) for c in g.blacks],
        "edges": [
            {
                "white": list(e.white),
                "black": list(e.black),
                "weight": fraction_to_str(e.weight),
                "sign": e.sign,
            }
            for e in g.edges
        ],
    }
    return json.dumps(doc, sort_keys=True)


def tower_from_json(text: str) -> TowerGraph:
    doc = json.loads(text)
    g = build_tower(doc["n"], fraction_from_str(doc["alpha"]), fraction_from_str(doc["beta"]))
    rebuilt = [
        Edge(
            Coord(*e["white"]),
            Coord(*e["black"]),
            fraction_from_str(e["weight"]),
            e["sign"],
        )
        for e in doc["edges"]
    ]
    if sorted(rebuilt) != list(g.edges):
        raise ValueError("serialized edge table disagrees with the tower builder")
    return g
