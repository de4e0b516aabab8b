"""Limit shape machinery: critical points of the action, region
classification, slopes, particle current, limiting height function, the
hydrodynamic identity and the arctic curve.

Scaled coordinates (x, u) live in the triangle 0 <= x <= 1,
-2x <= u <= 1 - x.  The action has two structural zeros at 1 and alpha and
a pole direction at -1/beta; its z-derivative clears to a cubic whose
upper-half-plane root (if any) is the liquid-region critical point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .kernels import GibbsPoint, w_of_z

IM_TOLERANCE = 1e-9

LIQUID = "liquid"
FROZEN = "frozen"
BOUNDARY = "boundary"

DOMAIN_CORNERS = [(0.0, 0.0), (1.0, -2.0), (1.0, 0.0), (0.0, 1.0)]


def in_domain(x: float, u: float, pad: float = 0.0) -> bool:
    return -pad <= x <= 1 + pad and -2 * x - pad <= u <= 1 - x + pad


def action(z: complex, x: float, u: float, alpha: float, beta: float) -> complex:
    return (
        x * (cmath.log(1 - 1 / z) + cmath.log(1 - alpha / z))
        - u * cmath.log(z)
        + (1 - x) * cmath.log(1 + beta * z)
    )


def action_dz(z: complex, x: float, u: float, alpha: float, beta: float) -> complex:
    return (
        x * (1 / (z * (z - 1)) + alpha / (z * (z - alpha)))
        - u / z
        + (1 - x) * beta / (1 + beta * z)
    )


def critical_cubic_coeffs(x: float, u: float, alpha: float, beta: float) -> list[float]:
    """Coefficients [c0, c1, c2, c3] of the cubic cleared from dS/dz = 0."""
    a, b = alpha, beta
    c0 = -a * u - 2 * a * x
    c1 = a * b + u + a * u - a * b * u + x + a * x - 3 * a * b * x
    c2 = -b - a * b - u + b * u + a * b * u + 2 * b * x + 2 * a * b * x
    c3 = b - b * u - b * x
    return [c0, c1, c2, c3]


def _cubic_roots(x: float, u: float, alpha: float, beta: float) -> list[complex]:
    c0, c1, c2, c3 = critical_cubic_coeffs(x, u, alpha, beta)
    coeffs = [c3, c2, c1, c0]
    while coeffs and abs(coeffs[0]) < 1e-14:
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        raise ValueError("critical equation degenerates at this point")
    roots = np.roots(coeffs)
    # Newton polish on the rational derivative.
    out = []
    poles = (0.0, 1.0, alpha, -1.0 / beta)
    for r in roots:
        z = complex(r)
        if min(abs(z - p) for p in poles) < 1e-8:
            out.append(z)
            continue
        for _ in range(3):
            f = action_dz(z, x, u, alpha, beta)
            h = 1e-7 * max(1.0, abs(z))
            df = (action_dz(z + h, x, u, alpha, beta) - action_dz(z - h, x, u, alpha, beta)) / (2 * h)
            if df != 0 and abs(f) > 1e-15:
                z = z - f / df
        out.append(z)
    return out


def _second_derivative(z: complex, x: float, u: float, alpha: float, beta: float) -> complex:
    h = 1e-6 * max(1.0, abs(z))
    return (action_dz(z + h, x, u, alpha, beta) - action_dz(z - h, x, u, alpha, beta)) / (2 * h)


def critical_point(x: float, u: float, alpha: float, beta: float) -> complex:
    """The distinguished critical point of the action.

    Liquid points return the root in the open upper half plane; frozen
    points return the real double-root candidate where the action has a
    local maximum (the root that is not trapped between the structural
    zeros 1 and alpha).
    """
    if not in_domain(x, u, pad=1e-12):
        raise ValueError(f"({x}, {u}) lies outside the scaled domain")
    roots = _cubic_roots(x, u, alpha, beta)
    complex_roots = [z for z in roots if z.imag > IM_TOLERANCE]
    if complex_roots:
        return max(complex_roots, key=lambda z: z.imag)
    real = sorted(z.real for z in roots)
    lo, hi = sorted((1.0, alpha))
    outside = [r for r in real if not (lo - 1e-9 <= r <= hi + 1e-9)]
    if not outside:
        outside = real
    # Local maximum of the action along the real axis: S'' < 0.
    cands = sorted(outside, key=lambda r: _second_derivative(r, x, u, alpha, beta).real)
    return complex(cands[0], 0.0)


def z_uniform(x: float, u: float) -> complex:
    """Closed form for the critical point at alpha = beta = 1."""
    den = 2 * (-1 + u + x)
    disc = (1 - 3 * x) ** 2 - 4 * (-u - 2 * x) * (-1 + u + x)
    if abs(den) < 1e-12:
        # Quadratic degenerates to a linear equation.
        c1 = 1 - 3 * x
        c0 = -u - 2 * x
        if abs(c1) < 1e-14:
            raise ValueError("critical equation degenerates at this point")
        return complex(-c0 / c1, 0.0)
    z = (-1 + 3 * x + cmath.sqrt(disc)) / den
    if z.imag < 0:
        z = z.conjugate()
    return z


def classify(x: float, u: float, alpha: float, beta: float) -> str:
    if not in_domain(x, u, pad=1e-12):
        raise ValueError(f"({x}, {u}) lies outside the scaled domain")
    roots = _cubic_roots(x, u, alpha, beta)
    im = max(abs(z.imag) for z in roots)
    if im > IM_TOLERANCE:
        return LIQUID
    return FROZEN


def gibbs_point_at(x: float, u: float, alpha: float, beta: float) -> GibbsPoint:
    return GibbsPoint(critical_point(x, u, alpha, beta), alpha, beta)


def slopes_of(point: GibbsPoint) -> tuple[float, float]:
    """Slopes (s, t) of the Gibbs measure attached to z0."""
    z0 = point.z0
    t_b = cmath.phase(1 + point.beta * z0)
    t_z = cmath.phase(z0)
    t_1 = cmath.phase(z0 - 1)
    t_a = cmath.phase(z0 - point.alpha)
    s = (t_b + t_z - t_1 - t_a) / math.pi
    t = t_z / math.pi
    return s, t


def law_of_sines_residuals(point: GibbsPoint) -> tuple[float, float, float]:
    """Residuals of the three triangle relations tying the angles to |z0|."""
    z0 = point.z0
    r1 = abs(z0)
    t_b = cmath.phase(1 + point.beta * z0)
    t_z = cmath.phase(z0)
    t_1 = cmath.phase(z0 - 1)
    t_a = cmath.phase(z0 - point.alpha)
    res1 = math.sin(t_b) / math.sin(t_z - t_b) - point.beta * r1
    res2 = math.sin(t_a) / math.sin(t_a - t_z) - r1 / point.alpha
    res3 = math.sin(t_1) / math.sin(t_1 - t_z) - r1
    return res1, res2, res3


def current(point: GibbsPoint) -> float:
    """Mean particle flux through a horizontal section."""
    return -cmath.phase(1 + point.beta * point.z0) / math.pi


def height_integrand(x: float, u: float) -> float:
    """arg of the distinguished critical point at alpha = beta = 1,
    extended by 0 above the domain."""
    if u >= 1 - x:
        return 0.0
    if u <= -2 * x:
        return math.pi
    z = z_uniform(x, u)
    if abs(z.imag) > 0:
        return cmath.phase(z) if z.imag > 0 else cmath.phase(z.conjugate())
    # Frozen: classify by the sign of the distinguished real root.
    zc = critical_point(x, u, 1.0, 1.0)
    return 0.0 if zc.real > 0 else math.pi


def limit_height(x: float, u: float, tau: float, samples: int = 200) -> float:
    """h_tau(x, u) = -(1/pi) * integral_u^infty arg z((x/tau, u'/tau)) du'."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    top = tau * (1 - x / tau)  # integrand vanishes above the domain
    if u >= top:
        return 0.0

    def disc(up: float) -> float:
        xs, us = x / tau, up / tau
        return (1 - 3 * xs) ** 2 - 4 * (-us - 2 * xs) * (-1 + us + xs)

    # Split at phase boundaries so each Gauss-Legendre panel is smooth.
    breaks = [u]
    grid = np.linspace(u, top, 257)
    signs = [disc(float(v)) > 0 for v in grid]
    for i in range(len(grid) - 1):
        if signs[i] != signs[i + 1]:
            a, b = float(grid[i]), float(grid[i + 1])
            for _ in range(80):
                m = (a + b) / 2
                if (disc(m) > 0) == signs[i]:
                    a = m
                else:
                    b = m
            breaks.append((a + b) / 2)
    breaks.append(top)
    nodes, wts = np.polynomial.legendre.leggauss(samples)
    total = 0.0
    for lo, hi in zip(breaks, breaks[1:]):
        mid, half = (hi + lo) / 2, (hi - lo) / 2
        for t, wgt in zip(nodes, wts):
            total += half * wgt * height_integrand(x / tau, (mid + half * t) / tau)
    return -total / math.pi


def hydro_residual(x: float, u: float, tau: float, step: float = 1e-5) -> float:
    """Residual of the transport identity satisfied by z along rays,
    at alpha = beta = 1."""
    xs, us = x / tau, u / tau
    z = z_uniform(xs, us)
    zx = (z_uniform(xs + step, us) - z_uniform(xs - step, us)) / (2 * step)
    zu = (z_uniform(xs, us + step) - z_uniform(xs, us - step)) / (2 * step)
    lhs = (zx * xs + zu * us) / z
    rhs = zu / (1 + z)
    return abs(lhs - rhs)


def characteristic_residual(x: float, u: float, alpha: float, beta: float) -> float:
    """Residual of Q(z, w) = x*z*P_z + (x+u)*w*P_w at the critical point,
    where P is the spectral curve and Q = -beta*w."""
    z = critical_point(x, u, alpha, beta)
    if abs(z.imag) <= IM_TOLERANCE:
        raise ValueError("characteristic check needs a liquid point")
    w = w_of_z(z, alpha, beta)
    p_z = alpha / z**2 * (1 - 1 / z) + (1 - alpha / z) / z**2 + w / z**2
    p_w = -(1 / z + beta)
    q = -beta * w
    return abs(x * z * p_z + (x + u) * w * p_w - q)


def arctic_curve(
    alpha: float, beta: float, resolution: int = 200
) -> list[tuple[float, float]]:
    """Points on the liquid-frozen boundary, located by bisection on the
    sign of the cubic discriminant along vertical grid lines."""

    def discr(x: float, u: float) -> float:
        c0, c1, c2, c3 = critical_cubic_coeffs(x, u, alpha, beta)
        if abs(c3) < 1e-13:
            c3 = math.copysign(1e-13, c3 if c3 else 1.0)
        return (
            18 * c3 * c2 * c1 * c0
            - 4 * c2**3 * c0
            + c2**2 * c1**2
            - 4 * c3 * c1**3
            - 27 * c3**2 * c0**2
        )

    pts: list[tuple[float, float]] = []
    for i in range(1, resolution):
        x = i / resolution
        lo, hi = -2 * x, 1 - x
        us = np.linspace(lo + 1e-9, hi - 1e-9, 200)
        signs = [discr(x, float(v)) < 0 for v in us]
        for j in range(len(us) - 1):
            if signs[j] != signs[j + 1]:
                a, b = float(us[j]), float(us[j + 1])
                for _ in range(60):
                    m = (a + b) / 2
                    if (discr(x, m) < 0) == signs[j]:
                        a = m
                    else:
                        b = m
                pts.append((x, (a + b) / 2))
    return pts
