"""Exact rational linear algebra against brute-force enumeration."""

from fractions import Fraction

import pytest

from towerdimer.kasteleyn import (
    build_matrix,
    determinant,
    edge_probability,
    enumerate_matchings,
    inverse_matrix,
    is_perfect_matching,
    matching_weight,
    partition_function,
)
from towerdimer.lattice import build_tower

A = Fraction(2)
B = Fraction(1, 2)


@pytest.mark.parametrize("n", [1, 2])
def test_determinant_equals_matching_sum(n):
    g = build_tower(n, A, B)
    assert partition_function(g) == sum(matching_weight(m) for m in enumerate_matchings(g))


def test_closed_form_partition_function():
    # Z = ((1+beta)(1+alpha*beta))^(N(N+1)/2)
    for n in (1, 2, 3):
        g = build_tower(n, A, B)
        assert partition_function(g) == ((1 + B) * (1 + A * B)) ** (n * (n + 1) // 2)


def test_enumerated_matchings_are_perfect():
    g = build_tower(2, A, B)
    ms = enumerate_matchings(g)
    assert len(ms) == len({frozenset(m) for m in ms})
    for m in ms:
        assert is_perfect_matching(g, m)


def test_inverse_matrix_is_exact_inverse():
    g = build_tower(2, A, B)
    k = build_matrix(g)
    inv = inverse_matrix(g)
    n = len(k)
    for i in range(n):
        for j in range(n):
            s = sum(k[i][l] * inv[l][j] for l in range(n))
            assert s == (1 if i == j else 0)


def test_single_edge_probabilities_sum_per_vertex():
    # probabilities of the edges at any one white vertex sum to 1
    g = build_tower(2, A, B)
    by_white = {}
    for e in g.edges:
        by_white.setdefault(e.white, []).append(e)
    for w, edges in by_white.items():
        total = sum(edge_probability(g, [e]) for e in edges)
        assert total == 1, w


def test_pair_probability_matches_enumeration():
    g = build_tower(1, A, B)
    z = partition_function(g)
    ms = enumerate_matchings(g)
    e1, e2 = sorted(g.edges)[0], sorted(g.edges)[3]
    direct = sum(matching_weight(m) for m in ms if e1 in m and e2 in m) / z
    assert edge_probability(g, [e1, e2]) == direct


def test_determinant_bareiss_small_cases():
    m = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    assert determinant(m) == 1
