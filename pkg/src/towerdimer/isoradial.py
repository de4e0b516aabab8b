"""Planar embedding of the dual lattice driven by a point z0 in the
upper half plane.

The embedding f assigns a complex position to every face of the infinite
lattice.  Crossing a primal edge contributes a fixed complex increment
that depends only on the edge type, taken with a + sign when the dual
step keeps the white endpoint on its right.  Because (z0, w(z0)) lies on
the spectral curve, the increments around any primal vertex sum to zero,
so the face positions are path independent; for suitable z0 the drawing
is isoradial (every dual face inscribed in a circle of common radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import char_poly, w_of_z
from .lattice import Coord, column_split, face_position, vertex_position

FIGURE_Z0 = complex(0.9177956164184642, 0.7575595655669651)


def edge_increment(white: Coord, black: Coord, z0: complex, alpha: float, beta: float) -> complex:
    """f(F') - f(F) across the primal edge, for the dual step that keeps
    the white endpoint on the right."""
    w0 = w_of_z(z0, alpha, beta)
    _, m = column_split(white.x)
    dx = black.x - white.x
    du = black.u - white.u
    if m == 3:  # white column X % 3 == 0
        if (dx, du) == (-1, 0):
            return -w0 * z0
        if (dx, du) == (1, 0):
            return z0 * z0 - z0
        if (dx, du) == (-1, 1):
            return -z0 * z0 * w0 * beta
        if (dx, du) == (1, -1):
            return alpha * (1 - z0)
    elif m == 2:  # white column X % 3 == 1
        if (dx, du) == (0, 0):
            return -(z0 - 1) * (z0 - alpha)
        if (dx, du) == (1, 0):
            return z0 * (z0 - alpha)
        if (dx, du) == (1, -1):
            return -(z0 - alpha)
    raise ValueError(f"no edge of known type from {white} to {black}")


def flanking_faces(white: Coord, black: Coord) -> tuple[Coord, Coord]:
    """The two faces separated by the primal edge, as (X, U) face labels."""
    x, u = white
    _, m = column_split(x)
    dx = black.x - x
    du = black.u - u
    if m == 3:
        if (dx, du) == (-1, 0):
            return Coord(x - 1, u), Coord(x, u - 1)
        if (dx, du) == (1, 0):
            return Coord(x, u), Coord(x + 1, u - 1)
        if (dx, du) == (-1, 1):
            return Coord(x - 1, u), Coord(x, u)
        if (dx, du) == (1, -1):
            return Coord(x, u - 1), Coord(x + 1, u - 1)
    elif m == 2:
        if (dx, du) == (0, 0):
            return Coord(x, u), Coord(x, u - 1)
        if (dx, du) == (1, 0):
            return Coord(x, u), Coord(x + 1, u - 1)
        if (dx, du) == (1, -1):
            return Coord(x + 1, u - 1), Coord(x, u - 1)
    raise ValueError(f"no edge of known type from {white} to {black}")


def _cross(a: tuple[float, float], b: tuple[float, float]) -> float:
    return a[0] * b[1] - a[1] * b[0]


def dual_step(white: Coord, black: Coord) -> tuple[Coord, Coord]:
    """(F, F') with the white endpoint on the right of the step F -> F'."""
    f1, f2 = flanking_faces(white, black)
    p1 = face_position(*f1)
    p2 = face_position(*f2)
    pw = vertex_position(white, "white")
    pb = vertex_position(black, "black")
    mid = ((pw[0] + pb[0]) / 2, (pw[1] + pb[1]) / 2)
    d = (p2[0] - p1[0], p2[1] - p1[1])
    if _cross(d, (pw[0] - mid[0], pw[1] - mid[1])) < 0:
        return f1, f2
    return f2, f1


def _lattice_edges_at_white(w: Coord) -> list[Coord]:
    """Black neighbours of a white vertex in the infinite lattice."""
    _, m = column_split(w.x)
    if m == 3:
        offs = [(-1, 0), (1, 0), (-1, 1), (1, -1)]
    else:
        offs = [(0, 0), (1, 0), (1, -1)]
    return [Coord(w.x + a, w.u + b) for a, b in offs]


def _lattice_edges_at_black(b: Coord) -> list[tuple[Coord, Coord]]:
    """(white, black) pairs for all edges at a black vertex."""
    _, m = column_split(b.x)
    out = []
    if m == 1:  # X % 3 == 2: whites at (-1,0),(+1,0),(-1,+1),(+1,-1) rel black
        offs = [(1, 0), (-1, 0), (1, -1), (-1, 1)]
    else:  # X % 3 == 1: whites at (0,0),(-1,0),(-1,+1)
        offs = [(0, 0), (-1, 0), (-1, 1)]
    for a, c in offs:
        out.append((Coord(b.x + a, b.u + c), b))
    return out


def vertex_closure_residual(
    coord: Coord, color: str, z0: complex, alpha: float, beta: float
) -> float:
    """|sum of signed increments| around the dual cycle encircling a
    primal vertex; zero exactly when (z0, w0) lies on the spectral curve."""
    if color == "white":
        edges = [(coord, b) for b in _lattice_edges_at_white(coord)]
    else:
        edges = _lattice_edges_at_black(coord)
    total = 0j
    for w, b in edges:
        f_from, f_to = dual_step(w, b)
        inc = edge_increment(w, b, z0, alpha, beta)
        # Orient every step counterclockwise around the vertex.
        p0 = vertex_position(coord, color)
        p1 = face_position(*f_from)
        p2 = face_position(*f_to)
        ccw = _cross((p1[0] - p0[0], p1[1] - p0[1]), (p2[0] - p0[0], p2[1] - p0[1])) > 0
        total += inc if ccw else -inc
    return abs(total)


def max_closure_residual(z0: complex, alpha: float, beta: float) -> float:
    """Worst dual-cycle closure over the four primal vertex types."""
    reps = [
        (Coord(0, 0), "white"),
        (Coord(1, 0), "white"),
        (Coord(1, 0), "black"),
        (Coord(2, 0), "black"),
    ]
    return max(vertex_closure_residual(c, col, z0, alpha, beta) for c, col in reps)


def period_vectors(z0: complex, alpha: float, beta: float) -> tuple[complex, complex]:
    """Translation vectors of the embedded lattice: one column triple
    (with the unit row shift) and one row."""
    w0 = w_of_z(z0, alpha, beta)
    vx = w0 * z0 + (z0 - alpha) + alpha * (z0 - 1)
    vy = -(z0 - 1) * (z0 - alpha)
    return vx, vy


@dataclass(frozen=True)
class DualEmbedding:
    """Positions of the faces in a rectangular window."""

    z0: complex
    alpha: float
    beta: float
    positions: dict[Coord, complex]

    def translate_check(self) -> float:
        """Worst deviation from exact lattice periodicity."""
        vx, vy = period_vectors(self.z0, self.alpha, self.beta)
        worst = 0.0
        for f, p in self.positions.items():
            for shift, vec in ((Coord(f.x + 3, f.u - 1), vx), (Coord(f.x, f.u + 1), vy)):
                if shift in self.positions:
                    worst = max(worst, abs(self.positions[shift] - p - vec))
        return worst


def embed_patch(
    z0: complex,
    alpha: float,
    beta: float,
    x_range: tuple[int, int] = (0, 9),
    u_range: tuple[int, int] = (-4, 4),
) -> DualEmbedding:
    """Embed all faces in the window by BFS; f(0, 0) = 0.

    Raises ValueError with the offending cycle if increments are
    inconsistent (which signals P(z0, w0) != 0).
    """
    faces = {
        Coord(x, u)
        for x in range(x_range[0], x_range[1] + 1)
        for u in range(u_range[0], u_range[1] + 1)
    }
    # Dual edges: every primal edge whose two flanking faces are in the window.
    adjacency: dict[Coord, list[tuple[Coord, complex]]] = {f: [] for f in faces}
    seen = set()
    for x in range(x_range[0] - 1, x_range[1] + 2):
        for u in range(u_range[0] - 1, u_range[1] + 2):
            w = Coord(x, u)
            _, m = column_split(x)
            if m == 1:
                continue
            for b in _lattice_edges_at_white(w):
                f_from, f_to = dual_step(w, b)
                if f_from in faces and f_to in faces and (f_from, f_to) not in seen:
                    seen.add((f_from, f_to))
                    inc = edge_increment(w, b, z0, alpha, beta)
                    adjacency[f_from].append((f_to, inc))
                    adjacency[f_to].append((f_from, -inc))
    anchor = Coord(0, 0) if Coord(0, 0) in faces else min(faces)
    pos = {anchor: 0j}
    queue = [anchor]
    while queue:
        f = queue.pop()
        for g, inc in adjacency[f]:
            target = pos[f] + inc
            if g in pos:
                if abs(pos[g] - target) > 1e-9 * max(1.0, abs(target)):
                    raise ValueError(f"inconsistent increments on cycle through {f} -> {g}")
            else:
                pos[g] = target
                queue.append(g)
    missing = faces - pos.keys()
    if missing:
        raise ValueError(f"window is not dual-connected; unreached faces: {sorted(missing)[:3]}")
    return DualEmbedding(z0, alpha, beta, pos)


def is_on_positive_locus(z0: complex, alpha: float, beta: float, tol: float = 1e-9) -> bool:
    return abs(z0.imag) > tol and abs(char_poly(z0, w_of_z(z0, alpha, beta), alpha, beta)) < tol


def _circumcenter(pts: list[complex]) -> tuple[complex, float, float]:
    """Least-squares circumcenter, mean radius and spread of a point set."""
    xs = np.array([p.real for p in pts])
    ys = np.array([p.imag for p in pts])
    A = np.column_stack([2 * xs, 2 * ys, np.ones(len(pts))])
    b = xs**2 + ys**2
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = complex(sol[0], sol[1])
    dists = [abs(p - center) for p in pts]
    return center, sum(dists) / len(dists), max(dists) - min(dists)


@dataclass(frozen=True)
class FaceTypeStats:
    label: str
    center: complex
    radius: float
    spread: float


@dataclass(frozen=True)
class IsoradialityReport:
    stats: list[FaceTypeStats]
    radius_spread: float

    @property
    def max_face_spread(self) -> float:
        return max(s.spread for s in self.stats)


def _faces_around(coord: Coord, color: str) -> list[Coord]:
    if color == "white":
        edges = [(coord, b) for b in _lattice_edges_at_white(coord)]
    else:
        edges = _lattice_edges_at_black(coord)
    out = []
    for w, b in edges:
        for f in flanking_faces(w, b):
            if f not in out:
                out.append(f)
    return out


def isoradiality_report(z0: complex, alpha: float, beta: float) -> IsoradialityReport:
    """Circumcircle statistics for the dual faces around one primal
    vertex of each of the four types."""
    emb = embed_patch(z0, alpha, beta, (0, 6), (-3, 3))
    reps = [
        ("white-square-column", Coord(3, 0), "white"),
        ("white-doubled-column", Coord(4, 0), "white"),
        ("black-doubled-column", Coord(4, 0), "black"),
        ("black-square-column", Coord(5, 0), "black"),
    ]
    stats = []
    for label, c, color in reps:
        pts = [emb.positions[f] for f in _faces_around(c, color)]
        if len(pts) < 3:
            raise ValueError(f"degenerate dual face at {c}")
        center, radius, spread = _circumcenter(pts)
        stats.append(FaceTypeStats(label, center, radius, spread))
    radii = [s.radius for s in stats]
    return IsoradialityReport(stats, max(radii) - min(radii))
