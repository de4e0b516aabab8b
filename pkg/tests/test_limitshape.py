"""Critical points, phase classification, slopes, height, arctic curve."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerdimer.kernels import GibbsPoint
from towerdimer.limitshape import (
    LIQUID,
    action_dz,
    arctic_curve,
    characteristic_residual,
    classify,
    critical_cubic_coeffs,
    critical_point,
    current,
    hydro_residual,
    in_domain,
    law_of_sines_residuals,
    limit_height,
    slopes_of,
    z_uniform,
)


def test_uniform_closed_form_midpoint():
    z = z_uniform(0.5, 0.0)
    assert abs(z - complex(-0.5, math.sqrt(7) / 2)) < 1e-14


def test_closed_form_agrees_with_cubic_solver():
    pts = [(0.3, 0.1), (0.5, 0.0), (0.6, -0.5), (0.45, 0.3)]
    for x, u in pts:
        assert classify(x, u, 1.0, 1.0) == LIQUID
        assert abs(z_uniform(x, u) - critical_point(x, u, 1.0, 1.0)) < 1e-11


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.4, max_value=2.5),
    st.floats(min_value=0.4, max_value=2.5),
)
def test_critical_point_kills_action_derivative(x, frac, alpha, beta):
    u = -2 * x + 0.02 + frac * (1 - x + 2 * x - 0.04)
    if classify(x, u, alpha, beta) != LIQUID:
        return
    z = critical_point(x, u, alpha, beta)
    assert abs(action_dz(z, x, u, alpha, beta)) < 1e-9
    assert z.imag > 0


def test_cubic_coefficients_match_derivative():
    # the cubic is dS/dz cleared of denominators: check proportionality
    x, u, a, b = 0.37, 0.12, 0.8, 1.4
    c0, c1, c2, c3 = critical_cubic_coeffs(x, u, a, b)
    z = complex(0.5, 0.6)
    cubic = c0 + c1 * z + c2 * z**2 + c3 * z**3
    cleared = action_dz(z, x, u, a, b) * z * (z - 1) * (z - a) * (1 + b * z)
    # proportional with a fixed ratio independent of z
    z2 = complex(-0.8, 0.4)
    cubic2 = c0 + c1 * z2 + c2 * z2**2 + c3 * z2**3
    cleared2 = action_dz(z2, x, u, a, b) * z2 * (z2 - 1) * (z2 - a) * (1 + b * z2)
    assert abs(cubic / cleared - cubic2 / cleared2) < 1e-10


def test_domain_and_classification():
    assert in_domain(0.5, 0.0)
    assert not in_domain(1.2, 0.0)
    assert classify(0.5, 0.0, 1.0, 1.0) == LIQUID
    assert classify(0.05, 0.9, 1.0, 1.0) != LIQUID  # near the top corner
    with pytest.raises(ValueError):
        classify(2.0, 0.0, 1.0, 1.0)


def test_slopes_in_allowed_polygon():
    pt = GibbsPoint(complex(-0.5, math.sqrt(7) / 2), 1.0, 1.0)
    s, t = slopes_of(pt)
    assert 0 <= t <= 1 and t - 2 <= s <= 0
    assert abs(t - cmath.phase(pt.z0) / math.pi) < 1e-14


def test_law_of_sines():
    pt = GibbsPoint(complex(0.4, 0.7), 0.9, 1.8)
    assert max(abs(r) for r in law_of_sines_residuals(pt)) < 1e-12


def test_current_sign_and_range():
    pt = GibbsPoint(complex(-0.5, math.sqrt(7) / 2), 1.0, 1.0)
    j = current(pt)
    assert -1 < j < 0  # upward drift of the height, bounded by one step


def test_limit_height_boundary_values():
    # above the domain the integrand vanishes
    assert limit_height(0.3, 1.0, 1.0) == 0.0
    # deep below, arg z = pi throughout, so h ~ -(extent)/pi * pi
    h = limit_height(0.3, -0.6, 1.0, samples=600)
    assert h < 0


def test_height_slope_matches_integrand():
    x, tau = 0.5, 1.0
    u = 0.0
    d = 1e-4
    dh = (limit_height(x, u + d, tau) - limit_height(x, u - d, tau)) / (2 * d)
    expected = cmath.phase(z_uniform(x, u)) / math.pi
    assert abs(dh - expected) < 1e-6


def test_hydro_identity_interior():
    assert hydro_residual(0.4, 0.1, 1.0) < 1e-8
    assert characteristic_residual(0.4, 0.1, 0.8, 1.3) < 1e-12


def test_arctic_curve_inside_triangle():
    pts = arctic_curve(1.0, 1.0, resolution=40)
    assert pts
    for x, u in pts:
        assert 0 < x < 1 and -2 * x <= u <= 1 - x
    # points sit on the discriminant-zero locus of the critical cubic
    x, u = pts[len(pts) // 2]
    c0, c1, c2, c3 = critical_cubic_coeffs(x, u, 1.0, 1.0)
    disc = (
        18 * c3 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2
        - 4 * c3 * c1**3 - 27 * c3**2 * c0**2
    )
    assert abs(disc) < 1e-10
