"""Dual-lattice embedding: closure, periodicity, isoradiality."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerdimer.isoradial import (
    FIGURE_Z0,
    DualEmbedding,
    edge_increment,
    embed_patch,
    flanking_faces,
    is_on_positive_locus,
    isoradiality_report,
    max_closure_residual,
    period_vectors,
)
from towerdimer.kernels import w_of_z
from towerdimer.lattice import Coord


def test_period_vectors_uniform_at_i():
    vx, vy = period_vectors(1j, 1.0, 1.0)
    assert abs(vy - 2j) < 1e-14  # -(i-1)(i-1) = 2i
    w0 = w_of_z(1j, 1.0, 1.0)
    assert abs(vx - (w0 * 1j + (1j - 1) + (1j - 1))) < 1e-14


@settings(max_examples=50, deadline=None)
@given(
    st.floats(min_value=-2, max_value=2),
    st.floats(min_value=0.05, max_value=2),
    st.floats(min_value=0.3, max_value=3),
    st.floats(min_value=0.3, max_value=3),
)
def test_closure_everywhere_on_the_curve(re, im, alpha, beta):
    z0 = complex(re, im)
    assert is_on_positive_locus(z0, alpha, beta)
    assert max_closure_residual(z0, alpha, beta) < 1e-11


def test_closure_fails_off_curve():
    # perturbing w0 off the spectral curve breaks closure: emulate by
    # comparing two inconsistent increments through a perturbed beta
    z0 = complex(0.3, 0.9)
    inc1 = edge_increment(Coord(0, 0), Coord(-1, 1), z0, 1.0, 1.0)
    inc2 = edge_increment(Coord(0, 0), Coord(-1, 1), z0, 1.0, 1.0 + 1e-3)
    assert abs(inc1 - inc2) > 1e-6


def test_embedding_anchor_and_periodicity():
    emb = embed_patch(complex(0.3, 0.9), 0.5, 2.0, (0, 9), (-4, 4))
    assert emb.positions[Coord(0, 0)] == 0j
    assert emb.translate_check() < 1e-12


def test_embedding_conjugation_equivariance():
    z0 = complex(0.4, 1.1)
    # increments are polynomial in (z0, w0) with real coefficients, so
    # conjugating z0 conjugates every position
    e1 = embed_patch(z0, 0.8, 1.2, (0, 6), (-3, 3))
    e2 = embed_patch(z0.conjugate(), 0.8, 1.2, (0, 6), (-3, 3))
    for f in e1.positions:
        assert abs(e2.positions[f] - e1.positions[f].conjugate()) < 1e-12


def test_flanking_faces_are_adjacent_labels():
    f1, f2 = flanking_faces(Coord(1, 0), Coord(1, 0))
    assert {f1, f2} == {Coord(1, 0), Coord(1, -1)}


def test_isoradiality_at_reference_point():
    rep = isoradiality_report(FIGURE_Z0, 1.0, 1.0)
    assert rep.max_face_spread < 1e-9
    assert rep.radius_spread < 1e-9
    radii = [s.radius for s in rep.stats]
    assert max(radii) - min(radii) < 1e-9


def test_generic_point_reports_finite_spread():
    rep = isoradiality_report(complex(0.3, 0.9), 0.5, 2.0)
    assert all(s.radius > 0 for s in rep.stats)
