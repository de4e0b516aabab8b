"""Figure and table emission: deterministic SVG drawings of matchings,
arctic curves and dual embeddings, RFC-4180 CSV tables, and matplotlib
figures for the report outputs.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .isoradial import DualEmbedding, _circumcenter, _faces_around, isoradiality_report
from .lattice import Coord, TowerGraph, vertex_position


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def emit_csv(header: Sequence[str], rows: Iterable[Sequence], path: str) -> None:
    """RFC-4180 CSV with a header row; floats at 17 significant digits."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


class _Svg:
    def __init__(self, viewbox: tuple[float, float, float, float]):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{viewbox[0]:g} {viewbox[1]:g} {viewbox[2]:g} {viewbox[3]:g}">',
        ]

    def line(self, p1, p2, stroke, width):
        self.parts.append(
            f'<line x1="{p1[0]:.6f}" y1="{p1[1]:.6f}" x2="{p2[0]:.6f}" y2="{p2[1]:.6f}" '
            f'stroke="{stroke}" stroke-width="{width:g}" stroke-linecap="round"/>'
        )

    def circle(self, center, r, fill, stroke="none", width=0.0):
        self.parts.append(
            f'<circle cx="{center[0]:.6f}" cy="{center[1]:.6f}" r="{r:.6f}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def polyline(self, pts, stroke, width):
        coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="{width:g}"/>'
        )

    def text(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _flip(p: tuple[float, float]) -> tuple[float, float]:
    return (p[0], -p[1])  # SVG y grows downward


def matching_svg(g: TowerGraph, matched) -> str:
    """Draw the tower with dimers as bold segments."""
    matched = {(e.white, e.black) for e in matched}
    xs = [vertex_position(w, "white")[0] for w in g.whites]
    ys = [-vertex_position(w, "white")[1] for w in g.whites]
    pad = 1.0
    box = (min(xs) - pad, min(ys) - pad - 1, max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad + 1)
    svg = _Svg(box)
    for e in g.edges:
        p1 = _flip(vertex_position(e.white, "white"))
        p2 = _flip(vertex_position(e.black, "black"))
        svg.line(p1, p2, "#bbbbbb", 0.03)
    for e in g.edges:
        if (e.white, e.black) in matched:
            p1 = _flip(vertex_position(e.white, "white"))
            p2 = _flip(vertex_position(e.black, "black"))
            svg.line(p1, p2, "#1040c0", 0.12)
    for w in g.whites:
        svg.circle(_flip(vertex_position(w, "white")), 0.09, "#ffffff", "#000000", 0.03)
    for b in g.blacks:
        svg.circle(_flip(vertex_position(b, "black")), 0.09, "#000000")
    return svg.text()


def arctic_svg(points: Sequence[tuple[float, float]]) -> str:
    """Arctic curve drawn over the scaled triangular domain."""
    svg = _Svg((-0.1, -1.1, 1.3, 3.2))
    triangle = [(0.0, 0.0), (1.0, 2.0), (1.0, 0.0), (0.0, -1.0), (0.0, 0.0)]
    svg.polyline(triangle, "#888888", 0.01)
    for x, u in points:
        svg.circle((x, -u), 0.008, "#c01040")
    return svg.text()


def embedding_svg(emb: DualEmbedding, circles: bool = True) -> str:
    """Dual embedding with faces as vertices; optional circumcircles
    around one primal vertex of each type."""
    pts = list(emb.positions.values())
    xs = [p.real for p in pts]
    ys = [-p.imag for p in pts]
    pad = 0.6
    svg = _Svg((min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad))
    from .isoradial import _lattice_edges_at_white, dual_step
    from .lattice import column_split

    xs_idx = [f.x for f in emb.positions]
    us_idx = [f.u for f in emb.positions]
    drawn = set()
    for x in range(min(xs_idx) - 1, max(xs_idx) + 2):
        if column_split(x)[1] == 1:
            continue
        for u in range(min(us_idx) - 1, max(us_idx) + 2):
            w = Coord(x, u)
            for b in _lattice_edges_at_white(w):
                f1, f2 = dual_step(w, b)
                key = tuple(sorted((f1, f2)))
                if key in drawn or f1 not in emb.positions or f2 not in emb.positions:
                    continue
                drawn.add(key)
                p, q = emb.positions[f1], emb.positions[f2]
                svg.line((p.real, -p.imag), (q.real, -q.imag), "#999999", 0.02)
    for f, p in sorted(emb.positions.items()):
        svg.circle((p.real, -p.imag), 0.04, "#1040c0")
    if circles:
        reps = [
            (Coord(3, 0), "white"),
            (Coord(4, 0), "white"),
            (Coord(4, 0), "black"),
            (Coord(5, 0), "black"),
        ]
        for c, color in reps:
            faces = _faces_around(c, color)
            if all(f in emb.positions for f in faces):
                pts_c = [emb.positions[f] for f in faces]
                center, radius, _ = _circumcenter(pts_c)
                svg.circle((center.real, -center.imag), radius, "none", "#c01040", 0.02)
    return svg.text()


def save_report_figures(directory: str, alpha: float, beta: float, resolution: int = 120) -> list[str]:
    """Render matplotlib figures next to the CSV tables of a report run.

    Returns the list of files written.
    """
    import os

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .limitshape import arctic_curve, classify, critical_point, LIQUID

    os.makedirs(directory, exist_ok=True)
    written = []

    pts = arctic_curve(alpha, beta, resolution=resolution)
    csv_path = os.path.join(directory, "arctic_curve.csv")
    emit_csv(["x", "u"], pts, csv_path)
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(4, 6))
    ax.plot([0, 1, 1, 0, 0], [0, -2, 0, 1, 0], color="0.6", lw=1)
    if pts:
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=2, color="crimson")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(f"arctic curve, alpha={alpha:g}, beta={beta:g}")
    fig_path = os.path.join(directory, "arctic_curve.png")
    fig.savefig(fig_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)

    # phase diagram heat map of arg z at the critical point
    import numpy as np

    n = 80
    grid = np.full((n, n), np.nan)
    rows = []
    for i in range(n):
        x = (i + 0.5) / n
        for j in range(n):
            u = -2 * x + (j + 0.5) / n * (1 - x + 2 * x)
            label = classify(x, u, alpha, beta)
            if label == LIQUID:
                import cmath

                val = cmath.phase(critical_point(x, u, alpha, beta))
            else:
                z = critical_point(x, u, alpha, beta)
                val = 0.0 if z.real > 0 else 3.141592653589793
            grid[j, i] = val
            rows.append((x, u, label, val))
    csv_path = os.path.join(directory, "phase_diagram.csv")
    emit_csv(["x", "u", "phase", "arg_z"], rows, csv_path)
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(grid, origin="lower", extent=(0, 1, 0, 1), aspect="auto", cmap="viridis")
    fig.colorbar(im, ax=ax, label="arg z")
    ax.set_xlabel("x")
    ax.set_ylabel("relative height in domain")
    ax.set_title("critical-point phase map")
    fig_path = os.path.join(directory, "phase_diagram.png")
    fig.savefig(fig_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    written.append(fig_path)
    return written
