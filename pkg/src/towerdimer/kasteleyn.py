"""Exact Kasteleyn computations on tower graphs.

Matrices are dense lists of Fractions (rows = black vertices, columns =
white vertices, both in the builder's lexicographic order).  Determinants
use fraction-free Bareiss elimination; the inverse uses Gauss-Jordan over
the rationals.  A backtracking enumerator over perfect matchings provides
an independent oracle at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .lattice import BLACK, Coord, Edge, TowerGraph

MatchingEdges = frozenset[Edge]

ENUMERATION_LIMIT = 4


def build_matrix(g: TowerGraph) -> list[list[Fraction]]:
    wi = g.white_index()
    bi = g.black_index()
    if len(wi) != len(bi):
        raise ValueError("tower has unequal color counts")
    m = [[Fraction(0)] * len(wi) for _ in range(len(bi))]
    for e in g.edges:
        m[bi[e.black]][wi[e.white]] = e.signed_weight
    return m


def determinant(matrix: list[list[Fraction]]) -> Fraction:
    """Fraction-free Bareiss determinant of a square rational matrix."""
    a = [row[:] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    # Clear denominators so the Bareiss divisions stay exact over integers.
    scale = Fraction(1)
    for i in range(n):
        den = 1
        for x in a[i]:
            den = den * x.denominator // _gcd(den, x.denominator)
        scale /= den
        a[i] = [x * den for x in a[i]]
    b = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if b[k][k] == 0:
            for i in range(k + 1, n):
                if b[i][k] != 0:
                    b[k], b[i] = b[i], b[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                b[i][j] = (b[i][j] * b[k][k] - b[i][k] * b[k][j]) // prev
            b[i][k] = 0
        prev = b[k][k]
    return scale * sign * b[n - 1][n - 1] if n else Fraction(1)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def invert(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination with partial pivoting."""
    n = len(matrix)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def partition_function(g: TowerGraph) -> Fraction:
    return abs(determinant(build_matrix(g)))


def inverse_matrix(g: TowerGraph) -> list[list[Fraction]]:
    """Inverse Kasteleyn matrix: rows = whites, columns = blacks."""
    inv = invert(build_matrix(g))
    return inv


def matching_weight(edges: Iterable[Edge]) -> Fraction:
    w = Fraction(1)
    for e in edges:
        w *= e.weight
    return w


def enumerate_matchings(g: TowerGraph) -> list[MatchingEdges]:
    """All perfect matchings by backtracking.  Guarded to small towers."""
    if g.n > ENUMERATION_LIMIT:
        raise ValueError(
            f"enumeration is limited to towers of size <= {ENUMERATION_LIMIT}"
        )
    by_black: dict[Coord, list[Edge]] = {b: [] for b in g.blacks}
    for e in g.edges:
        by_black[e.black].append(e)
    blacks = list(g.blacks)
    out: list[MatchingEdges] = []
    used_whites: set[Coord] = set()
    chosen: list[Edge] = []

    def rec() -> None:
        # Pick the uncovered black with the fewest available edges.
        best = None
        best_opts = None
        covered = {e.black for e in chosen}
        for b in blacks:
            if b in covered:
                continue
            opts = [e for e in by_black[b] if e.white not in used_whites]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = b, opts
                if len(opts) <= 1:
                    break
        if best is None:
            out.append(frozenset(chosen))
            return
        for e in best_opts:
            chosen.append(e)
            used_whites.add(e.white)
            rec()
            chosen.pop()
            used_whites.discard(e.white)

    rec()
    return out


def is_perfect_matching(g: TowerGraph, edges: Iterable[Edge]) -> bool:
    edges = list(edges)
    eset = set(g.edges)
    if any(e not in eset for e in edges):
        return False
    whites = [e.white for e in edges]
    blacks = [e.black for e in edges]
    return (
        len(set(whites)) == len(whites)
        and len(set(blacks)) == len(blacks)
        and len(whites) == len(g.whites)
        and len(blacks) == len(g.blacks)
    )


def edge_probability(g: TowerGraph, edges: Iterable[Edge]) -> Fraction:
    """Probability that all the given edges belong to a random matching.

    Determinantal formula: prod K(b_i, w_i) * det [K^{-1}(w_i, b_j)].
    """
    edges = list(edges)
    eset = set(g.edges)
    for e in edges:
        if e not in eset:
            raise ValueError(f"{e} is not an edge of the tower")
    inv = inverse_matrix(g)
    wi = g.white_index()
    bi = g.black_index()
    sub = [[inv[wi[ei.white]][bi[ej.black]] for ej in edges] for ei in edges]
    pref = Fraction(1)
    for e in edges:
        pref *= e.signed_weight
    p = pref * determinant(sub)
    return p
