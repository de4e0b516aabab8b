"""Contour-integral kernels against the exact inverse Kasteleyn, and the
full-plane kernel's closed-form edge probabilities."""

import cmath
import math
from fractions import Fraction

import pytest

from towerdimer.kasteleyn import inverse_matrix
from towerdimer.kernels import (
    GibbsPoint,
    adjugate,
    char_poly,
    finite_kernel,
    gibbs_edge_probabilities,
    gibbs_edge_probabilities_closed_form,
    gibbs_edge_probability,
    gibbs_kernel,
    w_of_z,
)
from towerdimer.lattice import Coord, build_tower


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (2.0, 0.5)])
def test_finite_kernel_matches_exact_inverse_small(alpha, beta):
    n = 2
    g = build_tower(n, Fraction(alpha), Fraction(beta))
    inv = inverse_matrix(g)
    worst = 0.0
    for i, w in enumerate(g.whites):
        for j, b in enumerate(g.blacks):
            worst = max(worst, abs(finite_kernel(w, b, n, alpha, beta) - complex(inv[i][j])))
    assert worst < 1e-9


def test_finite_kernel_vanishes_outside_tower():
    # white vertex one edge above the tower: the whole kernel row is zero
    n = 2
    g = build_tower(n, Fraction(1), Fraction(1))
    w = Coord(1, 2)  # row bound for X=1 at N=2 is u <= 1
    for b in g.blacks[:4]:
        assert abs(finite_kernel(w, b, n, 1.0, 1.0)) < 1e-10


def test_spectral_curve_relations():
    a, b = 0.7, 1.3
    z = complex(0.4, 0.8)
    w = w_of_z(z, a, b)
    assert abs(char_poly(z, w, a, b)) < 1e-14
    q = adjugate(z, w, a, b)
    # det(adjugate) = P * (cofactor identity for 2x2): Q11*Q22 - Q12*Q21 = det K1 * ... reduces to P
    det_q = q[0][0] * q[1][1] - q[0][1] * q[1][0]
    assert abs(det_q - char_poly(z, w, a, b)) < 1e-12


def test_gibbs_point_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        GibbsPoint(complex(0.0, -1.0), 1.0, 1.0)
    with pytest.raises(ValueError):
        GibbsPoint(complex(1.0, 0.0), 1.0, 1.0)  # pole on the real axis


def test_edge_probabilities_match_closed_forms():
    pt = GibbsPoint(complex(-0.5, math.sqrt(7) / 2), 1.0, 1.0)
    quad = gibbs_edge_probabilities(pt)
    closed = gibbs_edge_probabilities_closed_form(pt)
    for k in closed:
        assert abs(quad[k] - closed[k]) < 1e-10, k


def test_edge_probabilities_sum_to_one_at_black_vertex():
    # black b(1, 0) meets three edges: the doubled-site edge, the edge
    # from w(0, 0) and the edge from w(0, 1); probabilities sum to 1
    pt = GibbsPoint(complex(0.3, 0.9), 0.8, 1.7)
    p = gibbs_edge_probabilities(pt)
    p_diag = gibbs_edge_probability(pt, Coord(0, 1), Coord(1, 0))
    total = p["vertical_edge"] + p["right_edge"] + p_diag
    assert abs(total - 1.0) < 1e-10


def test_frozen_kernel_extrapolation_degenerates_probabilities():
    pt = GibbsPoint(complex(2.5, 0.0), 0.5, 2.0)  # real z0 beyond all zeros
    for p in gibbs_edge_probabilities(pt).values():
        assert min(abs(p), abs(p - 1)) < 1e-9


def test_current_single_entry():
    b = 1.7
    pt = GibbsPoint(complex(0.2, 1.1), 0.6, b)
    entry = gibbs_kernel(pt, Coord(0, 0), Coord(-1, 1))
    assert abs((-b * entry).real - (-cmath.phase(1 + b * pt.z0) / math.pi)) < 1e-10
