"""Correlation kernels: finite-tower double contour integrals and the
translation-invariant (Gibbs) single contour kernels.

Conventions.  A kernel entry K((X1,U),(X2,V)) takes the white vertex first;
for whites and blacks of the size-N tower it reproduces the inverse
Kasteleyn matrix exactly.  Contours are circles centered at c=(1+alpha)/2
containing 0, 1, alpha and excluding -1/beta; the z-contour is the outer
one when X1 >= X2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import column_split

# --- the magnitude function phi ---------------------------------------------


def phi_exponents(x: int, n: int) -> tuple[int, int, int]:
    """Exponents (of 1+beta*z, 1-1/z, 1-alpha/z) in phi(x, n; z)."""
    k, m = column_split(x)
    return n - k + 1, k - 1 + (1 if m == 1 else 0), k - 1 + (1 if m <= 2 else 0)


def phi(x: int, n: int, z, alpha, beta):
    """phi(X, N; z); works on scalars and numpy arrays."""
    e_b, e_1, e_a = phi_exponents(x, n)
    return (1 + beta * z) ** e_b * (1 - 1 / z) ** e_1 * (1 - alpha / z) ** e_a


# --- contours ---------------------------------------------------------------


@dataclass(frozen=True)
class ContourSpec:
    center: float
    r_outer: float
    r_inner: float
    nodes: int

    def __post_init__(self):
        if not self.r_outer > self.r_inner > 0:
            raise ValueError("contour radii must be nested and positive")

    def validate(self, alpha: float, beta: float) -> None:
        for r in (self.r_inner, self.r_outer):
            for p in (0.0, 1.0, alpha):
                if not abs(p - self.center) < r:
                    raise ValueError(f"contour of radius {r} does not enclose {p}")
            if not abs(-1 / beta - self.center) > r:
                raise ValueError(f"contour of radius {r} encloses -1/beta")


def default_contours(alpha: float, beta: float, nodes: int = 256) -> ContourSpec:
    c = (1 + alpha) / 2
    lo = max(c, abs(c - 1.0), abs(c - alpha))
    hi = c + 1 / beta
    r_out = c + 1 / (2 * beta)
    if not lo < r_out < hi:
        r_out = (lo + hi) / 2
    r_in = math.sqrt(r_out * lo)
    spec = ContourSpec(c, r_out, r_in, nodes)
    spec.validate(alpha, beta)
    return spec


# --- finite kernel ----------------------------------------------------------


def _quad_once_numpy(x1, u, x2, v, n, alpha, beta, spec: ContourSpec) -> complex:
    m = spec.nodes
    theta = 2 * np.pi * np.arange(m) / m
    rz, rw = (spec.r_outer, spec.r_inner) if x1 >= x2 else (spec.r_inner, spec.r_outer)
    z = spec.center + rz * np.exp(1j * theta)
    w = spec.center + rw * np.exp(1j * theta)
    f = phi(x1, n, z, alpha, beta) * z ** (-u - 1) * (z - spec.center)
    gvals = phi(x2, n, w, alpha, beta)
    g = (w - spec.center) * w ** v / gvals
    coupling = 1.0 / (z[:, None] - w[None, :])
    return complex((f @ coupling @ g) / m**2)


def _quad_once_gmpy(x1, u, x2, v, n, alpha, beta, spec: ContourSpec, prec_bits: int) -> complex:
    import gmpy2

    ctx = gmpy2.get_context()
    old = ctx.precision
    ctx.precision = prec_bits
    try:
        m = spec.nodes
        rz, rw = (spec.r_outer, spec.r_inner) if x1 >= x2 else (spec.r_inner, spec.r_outer)
        c = gmpy2.mpfr(spec.center)
        al = gmpy2.mpfr(Fraction(alpha)) if isinstance(alpha, Fraction) else gmpy2.mpfr(alpha)
        be = gmpy2.mpfr(Fraction(beta)) if isinstance(beta, Fraction) else gmpy2.mpfr(beta)
        two_pi = 2 * gmpy2.const_pi()
        eb1, e11, ea1 = phi_exponents(x1, n)
        eb2, e12, ea2 = phi_exponents(x2, n)
        zs, fs, ws, gs = [], [], [], []
        for k in range(m):
            th = two_pi * k / m
            ez = gmpy2.mpc(gmpy2.cos(th), gmpy2.sin(th))
            z = c + gmpy2.mpfr(rz) * ez
            w = c + gmpy2.mpfr(rw) * ez
            fz = (1 + be * z) ** eb1 * (1 - 1 / z) ** e11 * (1 - al / z) ** ea1
            fz = fz * z ** (-u - 1) * (z - c)
            gw = (1 + be * w) ** eb2 * (1 - 1 / w) ** e12 * (1 - al / w) ** ea2
            gw = (w - c) * w ** v / gw
            zs.append(z)
            fs.append(fz)
            ws.append(w)
            gs.append(gw)
        total = gmpy2.mpc(0)
        for i in range(m):
            zi = zs[i]
            fi = fs[i]
            acc = gmpy2.mpc(0)
            for j in range(m):
                acc += gs[j] / (zi - ws[j])
            total += fi * acc
        total = total / (m * m)
        return complex(total)
    finally:
        ctx.precision = old


def _log_spread_digits(x1, u, x2, v, n, alpha, beta, spec: ContourSpec) -> float:
    """Decimal digits spanned by the integrand magnitude on a coarse grid."""
    m = 64
    theta = 2 * np.pi * np.arange(m) / m
    rz, rw = (spec.r_outer, spec.r_inner) if x1 >= x2 else (spec.r_inner, spec.r_outer)
    z = spec.center + rz * np.exp(1j * theta)
    w = spec.center + rw * np.exp(1j * theta)
    eb1, e11, ea1 = phi_exponents(x1, n)
    eb2, e12, ea2 = phi_exponents(x2, n)

    def logmag(vals, eb, e1, ea, pw):
        return (
            eb * np.log(np.abs(1 + beta * vals))
            + e1 * np.log(np.abs(1 - 1 / vals))
            + ea * np.log(np.abs(1 - alpha / vals))
            + pw * np.log(np.abs(vals))
        )

    lf = logmag(z, eb1, e11, ea1, -u - 1)
    lg = -logmag(w, eb2, e12, ea2, -v)
    spread = (lf.max() - lf.min()) + (lg.max() - lg.min())
    return spread / math.log(10)


def finite_kernel(
    white: tuple[int, int],
    black: tuple[int, int],
    n: int,
    alpha,
    beta,
    spec: ContourSpec | None = None,
    rtol: float = 1e-10,
) -> complex:
    """Extended finite-tower kernel entry K((X1,U),(X2,V)).

    The quadrature doubles the node count until two successive values agree
    to rtol (absolutely for tiny entries).
    """
    x1, u = white
    x2, v = black
    af, bf = float(alpha), float(beta)
    if spec is None:
        spec = default_contours(af, bf)
    spec.validate(af, bf)
    digits = _log_spread_digits(x1, u, x2, v, n, af, bf, spec)
    use_mp = digits > 11
    prec_bits = int((digits + 20) * 3.33) + 16
    prev = None
    nodes = spec.nodes
    for _ in range(7):
        cur_spec = ContourSpec(spec.center, spec.r_outer, spec.r_inner, nodes)
        if use_mp:
            val = _quad_once_gmpy(x1, u, x2, v, n, alpha, beta, cur_spec, prec_bits)
        else:
            val = _quad_once_numpy(x1, u, x2, v, n, af, bf, cur_spec)
        if prev is not None and abs(val - prev) <= rtol * max(1.0, abs(val)):
            return val
        prev = val
        nodes *= 2
    raise RuntimeError("contour quadrature did not converge")


# --- spectral data ----------------------------------------------------------


def char_poly(z, w, alpha, beta):
    """P(z, w), the determinant of the magnetically altered weight matrix."""
    return (1 - alpha / z) * (1 - 1 / z) - w * (1 / z + beta)


def adjugate(z, w, alpha, beta):
    """Q(z, w), 2x2 adjugate; rows index whites, columns blacks."""
    return [[-1 + alpha / z, -1 / z - beta], [-w, -1 + 1 / z]]


def w_of_z(z, alpha, beta):
    """Solve P(z, w) = 0 for w."""
    return (1 - alpha / z) * (1 - 1 / z) / (1 / z + beta)


# --- Gibbs kernels ----------------------------------------------------------


@dataclass(frozen=True)
class GibbsPoint:
    """A point z0 in the closed upper half plane plus the weights."""

    z0: complex
    alpha: float
    beta: float

    def __post_init__(self):
        if self.z0.imag < 0:
            raise ValueError("z0 must lie in the closed upper half plane")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("weights must be positive")
        if self.z0.imag == 0 and self.z0.real in (0.0, 1.0, self.alpha, -1 / self.beta):
            raise ValueError("real z0 must avoid 0, 1, alpha and -1/beta")

    @property
    def w0(self) -> complex:
        return w_of_z(self.z0, self.alpha, self.beta)

    @property
    def frozen(self) -> bool:
        return self.z0.imag == 0


def gibbs_exponents(white: tuple[int, int], black: tuple[int, int]) -> tuple[int, int, int, int]:
    """Exponents (of 1+beta*z, 1-1/z, 1-alpha/z, z) in the Gibbs integrand."""
    xw, uw = white
    xb, ub = black
    kw, mw = column_split(xw)
    kb, mb = column_split(xb)
    e_b = kb - kw
    e_1 = kw - kb + (1 if mw == 1 else 0) - (1 if mb == 1 else 0)
    e_a = kw - kb - (1 if mw == 3 else 0) + (1 if mb == 3 else 0)
    e_z = ub - uw - 1
    return e_b, e_1, e_a, e_z


def _arc(z0: complex, crossing: float, samples: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and dz-weights along the circular arc from
    conj(z0) to z0 through the real crossing point."""
    # Circle through z0, conj(z0) and crossing, centered on the real axis.
    c = (abs(z0) ** 2 - crossing**2) / (2 * (z0.real - crossing))
    rho = abs(z0 - c)
    phi0 = cmath.phase(z0 - c)  # in (0, pi]
    xphase = 0.0 if crossing > c else math.pi
    nodes, wts = np.polynomial.legendre.leggauss(samples)
    if xphase == 0.0:
        # counterclockwise from -phi0 through 0 to +phi0
        theta = phi0 * nodes
        scale = phi0
    else:
        # clockwise from -phi0 (== 2pi - phi0) down through pi to +phi0
        theta = math.pi + (math.pi - phi0) * (-nodes)
        scale = -(math.pi - phi0)
    z = c + rho * np.exp(1j * theta)
    dz = 1j * rho * np.exp(1j * theta) * (scale * wts)
    return z, dz


def _pick_crossing(z0: complex, alpha: float, beta: float, right: bool) -> float:
    """Crossing point of the arc with the real axis, keeping clear of the
    integrand's poles (0, 1, alpha on the right; -1/beta on the left)."""
    if right:
        a, b = sorted((1.0, alpha))
        candidates = [a / 2, a / 3, math.sqrt(a * b) if a != b else None, 2 * b, 3 * b]
        candidates = [c for c in candidates if c is not None]
        poles = [0.0, 1.0, alpha]
    else:
        candidates = [-1 / (2 * beta), -1 / (3 * beta), -2 / beta, -3 / beta]
        poles = [0.0, -1 / beta]
    # A crossing at Re z0 degenerates the circle into a vertical line.
    safe = [c for c in candidates if abs(c - z0.real) > 1e-6 * (1 + abs(z0))]
    candidates = safe or candidates

    def clearance(xc: float) -> float:
        c = (abs(z0) ** 2 - xc**2) / (2 * (z0.real - xc)) if z0.real != xc else 0.0
        rho = abs(z0 - c)
        return min(abs(abs(p - c) - rho) for p in poles)

    best = max(candidates, key=clearance)
    if clearance(best) < 1e-9:
        raise ValueError("cannot find an arc separated from the poles")
    return best


def gibbs_kernel(
    point: GibbsPoint,
    white: tuple[int, int],
    black: tuple[int, int],
    samples: int = 400,
) -> complex:
    """Translation-invariant kernel entry K^{z0}(white, black).

    For real z0 (frozen measures) the value is the boundary limit from the
    upper half plane, computed by Richardson extrapolation in the offset.
    """
    if point.frozen:
        r = point.z0.real
        vals = []
        deltas = [8e-4, 4e-4, 2e-4, 1e-4]
        for d in deltas:
            p = GibbsPoint(complex(r, d), point.alpha, point.beta)
            vals.append(gibbs_kernel(p, white, black, samples))
        # Neville extrapolation to delta -> 0.
        xs = deltas
        table = list(vals)
        for lev in range(1, len(xs)):
            for i in range(len(xs) - lev):
                table[i] = table[i + 1] + (table[i + 1] - table[i]) * xs[i + lev] / (
                    xs[i] - xs[i + lev]
                )
        return table[0]
    xw = white[0]
    xb = black[0]
    right = xw >= xb
    e_b, e_1, e_a, e_z = gibbs_exponents(white, black)
    crossing = _pick_crossing(point.z0, point.alpha, point.beta, right)
    z, dz = _arc(point.z0, crossing, samples)
    vals = (
        (1 + point.beta * z) ** e_b
        * (1 - 1 / z) ** e_1
        * (1 - point.alpha / z) ** e_a
        * z**e_z
    )
    return complex(np.sum(vals * dz) / (2j * math.pi))


# --- single-edge probabilities under the Gibbs measures ---------------------

# Representative edges of the four orbits under lattice translations, given
# as ((white, black), signed Kasteleyn entry as a function of the weights).

EDGE_BETA = ((0, 0), (-1, 1))
EDGE_LEFT = ((-2, 1), (-1, 0))
EDGE_RIGHT = ((0, 0), (1, 0))
EDGE_VERTICAL = ((1, 0), (1, 0))


def _kasteleyn_entry(white, black, alpha: float, beta: float) -> float:
    from .lattice import edge_between

    e = edge_between(white, black, Fraction(alpha).limit_denominator(10**12),
                     Fraction(beta).limit_denominator(10**12))
    if e is None:
        raise ValueError(f"{white} - {black} is not an edge")
    return e.sign * float(e.weight)


def gibbs_edge_probability(point: GibbsPoint, white, black, samples: int = 400) -> float:
    entry = gibbs_kernel(point, white, black, samples)
    k = _kasteleyn_entry(white, black, point.alpha, point.beta)
    return float((k * entry).real)


def gibbs_edge_probabilities(point: GibbsPoint, samples: int = 400) -> dict[str, float]:
    """The four single-edge probabilities p1..p4 at the Gibbs point."""
    return {
        "beta_edge": gibbs_edge_probability(point, *EDGE_BETA, samples=samples),
        "left_edge": gibbs_edge_probability(point, *EDGE_LEFT, samples=samples),
        "right_edge": gibbs_edge_probability(point, *EDGE_RIGHT, samples=samples),
        "vertical_edge": gibbs_edge_probability(point, *EDGE_VERTICAL, samples=samples),
    }


def gibbs_edge_probabilities_closed_form(point: GibbsPoint) -> dict[str, float]:
    """Closed forms in terms of arguments of z0 relative to the poles."""
    z0 = point.z0 if point.z0.imag > 0 else complex(point.z0.real, 0.0)
    t_b = cmath.phase(1 + point.beta * z0)
    t_z = cmath.phase(z0)
    t_1 = cmath.phase(z0 - 1)
    t_a = cmath.phase(z0 - point.alpha)
    pi = math.pi
    return {
        "beta_edge": t_b / pi,
        "left_edge": (t_1 - t_z) / pi,
        "right_edge": 1 - t_a / pi,
        "vertical_edge": t_z / pi,
    }
