"""Interlacing particle arrays and their bijection with perfect matchings.

A size-N configuration is the triangular family

    y^1, x^1, z^2, y^2, x^2, ..., z^N, y^N, x^N, z^{N+1}

of strictly decreasing integer vectors with |y^k| = 2k-1, |x^k| = 2k,
|z^k| = 2k-2 and z^{N+1} = (-1, ..., -2N) pinned by the right boundary of
the tower.  Reading rules, per column of the tower:

  y^t: doubled sites 3t-2 matched through their vertical edge,
  x^t: blacks in column 3t-1 matched rightward,
  z^t: whites in column 3t-3 matched leftward.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import BLACK, Coord, Edge, TowerGraph, edge_between, row_bounds


class ConfigurationError(ValueError):
    pass


def staircase(length: int) -> list[int]:
    return list(range(-1, -length - 1, -1))


@dataclass
class Configuration:
    """ys[t-1] = y^t, xs[t-1] = x^t for t = 1..N; zs[t-2] = z^t for t = 2..N+1."""

    n: int
    ys: list[list[int]]
    xs: list[list[int]]
    zs: list[list[int]]

    def copy(self) -> "Configuration":
        return Configuration(
            self.n,
            [v[:] for v in self.ys],
            [v[:] for v in self.xs],
            [v[:] for v in self.zs],
        )

    def y(self, t: int) -> list[int]:
        return self.ys[t - 1]

    def x(self, t: int) -> list[int]:
        return self.xs[t - 1]

    def z(self, t: int) -> list[int]:
        return self.zs[t - 2]


def initial_config() -> Configuration:
    return Configuration(0, [], [], [])


def _check_strict_decreasing(name: str, v: list[int]) -> None:
    for a, b in zip(v, v[1:]):
        if not a > b:
            raise ConfigurationError(f"{name} is not strictly decreasing: {v}")


def validate(c: Configuration) -> None:
    n = c.n
    if len(c.ys) != n or len(c.xs) != n or len(c.zs) != max(0, n):
        raise ConfigurationError("array counts do not match the size")
    if n == 0:
        return
    if c.z(n + 1) != staircase(2 * n):
        raise ConfigurationError(
            f"z^{n+1} must be the full staircase {staircase(2 * n)}"
        )
    for t in range(1, n + 1):
        y, x = c.y(t), c.x(t)
        if len(y) != 2 * t - 1 or len(x) != 2 * t:
            raise ConfigurationError(f"level {t} arrays have wrong lengths")
        _check_strict_decreasing(f"y^{t}", y)
        _check_strict_decreasing(f"x^{t}", x)
        for i, v in enumerate(y, start=1):
            if not -(2 * t - 1) <= v <= n - t:
                raise ConfigurationError(f"y^{t}_{i} = {v} out of range")
        for i, v in enumerate(x, start=1):
            if not -2 * t <= v <= n - t:
                raise ConfigurationError(f"x^{t}_{i} = {v} out of range")
        # y^t interlaces x^t:  x_i >= y_i > x_{i+1}
        for i in range(2 * t - 1):
            if not x[i] >= y[i]:
                raise ConfigurationError(f"x^{t}_{i+1} >= y^{t}_{i+1} fails")
            if not y[i] > x[i + 1]:
                raise ConfigurationError(f"y^{t}_{i+1} > x^{t}_{i+2} fails")
    for t in range(2, n + 2):
        z = c.z(t)
        if len(z) != 2 * t - 2:
            raise ConfigurationError(f"z^{t} has wrong length")
        _check_strict_decreasing(f"z^{t}", z)
        for i, v in enumerate(z, start=1):
            if not -(2 * t - 2) <= v <= n - t + 1:
                raise ConfigurationError(f"z^{t}_{i} = {v} out of range")
        # z^t interlaces tightly below x^{t-1}:  x_i >= z_i >= x_i - 1
        x = c.x(t - 1)
        for i in range(2 * t - 2):
            if not x[i] >= z[i] >= x[i] - 1:
                raise ConfigurationError(
                    f"x^{t-1}_{i+1} >= z^{t}_{i+1} >= x^{t-1}_{i+1} - 1 fails"
                )
        # z^t interlaces y^t (for t <= n):  y_i >= z_i > y_{i+1}
        if t <= n:
            y = c.y(t)
            for i in range(2 * t - 2):
                if not y[i] >= z[i]:
                    raise ConfigurationError(f"y^{t}_{i+1} >= z^{t}_{i+1} fails")
                if not z[i] > y[i + 1]:
                    raise ConfigurationError(f"z^{t}_{i+1} > y^{t}_{i+2} fails")


def particles(c: Configuration) -> set[Coord]:
    """Particle positions (X, U) across all columns of the tower."""
    pts: set[Coord] = set()
    for t in range(1, c.n + 1):
        for v in c.y(t):
            pts.add(Coord(3 * t - 2, v))
        for v in c.x(t):
            pts.add(Coord(3 * t - 1, v))
    for t in range(2, c.n + 2):
        for v in c.z(t):
            pts.add(Coord(3 * t - 3, v))
    return pts


# --- matching -> arrays -----------------------------------------------------


def matching_to_arrays(g: TowerGraph, edges: frozenset[Edge]) -> Configuration:
    n = g.n
    matched_white = {e.white: e for e in edges}
    matched_black = {e.black: e for e in edges}
    if len(matched_white) != len(g.whites) or len(matched_black) != len(g.blacks):
        raise ValueError("edge set is not a perfect matching of the tower")
    ys, xs, zs = [], [], []
    for t in range(1, n + 1):
        x = 3 * t - 2
        lo, hi = row_bounds(n, x)
        ys.append(
            [
                u
                for u in range(hi, lo - 1, -1)
                if matched_black[Coord(x, u)].white == Coord(x, u)
            ]
        )
        x = 3 * t - 1
        lo, hi = row_bounds(n, x)
        xs.append(
            [
                u
                for u in range(hi, lo - 1, -1)
                if matched_black[Coord(x, u)].white.x == x + 1
            ]
        )
    for t in range(2, n + 2):
        x = 3 * t - 3
        lo, hi = row_bounds(n, x)
        zs.append(
            [
                u
                for u in range(hi, lo - 1, -1)
                if matched_white[Coord(x, u)].black.x == x - 1
            ]
        )
    c = Configuration(n, ys, xs, zs)
    validate(c)
    return c


# --- arrays -> matching -----------------------------------------------------


def _pair_chain(
    lefts: list[int],
    rights: list[int],
    shift: int,
    what: str,
) -> list[tuple[int, int]]:
    """Match i-th largest left to i-th largest right; right in {left, left-shift}.

    Used per column pair; interlacing makes the pairing unique.
    """
    if len(lefts) != len(rights):
        raise ConfigurationError(f"{what}: unmatched column counts")
    out = []
    for a, b in zip(lefts, rights):
        if b == a or b == a - shift:
            out.append((a, b))
        else:
            raise ConfigurationError(f"{what}: cannot pair {a} with {b}")
    return out


def arrays_to_matching(g: TowerGraph, c: Configuration) -> frozenset[Edge]:
    validate(c)
    if c.n != g.n:
        raise ValueError("configuration size does not match the tower")
    n = g.n
    alpha, beta = g.alpha, g.beta
    edges: list[Edge] = []

    def add(white: Coord, black: Coord) -> None:
        e = edge_between(white, black, alpha, beta)
        if e is None:
            raise ConfigurationError(f"no edge {white} - {black}")
        edges.append(e)

    for t in range(1, n + 1):
        # Column pair (3t-3, 3t-2): whites without a z-particle go rightward
        # to blacks without a y-particle; offsets 0 (unit) or -1 (alpha).
        wx, bx = 3 * t - 3, 3 * t - 2
        zset = set(c.z(t)) if t >= 2 else set()
        lo, hi = row_bounds(n, wx)
        free_w = [u for u in range(hi, lo - 1, -1) if u not in zset]
        lo, hi = row_bounds(n, bx)
        free_b = [u for u in range(hi, lo - 1, -1) if u not in set(c.y(t))]
        for w, b in _pair_chain(free_w, free_b, 1, f"columns {wx}-{bx}"):
            add(Coord(wx, w), Coord(bx, b))
        # Doubled sites: vertical edges at the y-particles.
        for u in c.y(t):
            add(Coord(bx, u), Coord(bx, u))
        # Column pair (3t-2, 3t-1): whites without a y-particle go rightward
        # to blacks without an x-particle; offsets 0 (unit) or -1.
        wx, bx = 3 * t - 2, 3 * t - 1
        lo, hi = row_bounds(n, wx)
        free_w = [u for u in range(hi, lo - 1, -1) if u not in set(c.y(t))]
        lo, hi = row_bounds(n, bx)
        free_b = [u for u in range(hi, lo - 1, -1) if u not in set(c.x(t))]
        for w, b in _pair_chain(free_w, free_b, 1, f"columns {wx}-{bx}"):
            add(Coord(wx, w), Coord(bx, b))
        # Column pair (3t-1, 3t): blacks at x-particles go rightward to
        # whites at z-particles; offsets 0 (unit) or -1 (beta).
        wx, bx = 3 * t, 3 * t - 1
        for b, w in _pair_chain(c.x(t), c.z(t + 1), 1, f"columns {bx}-{wx}"):
            add(Coord(wx, w), Coord(bx, b))
    m = frozenset(edges)
    if len(m) != len(g.whites):
        raise ConfigurationError("reconstructed edge set is not a perfect matching")
    return m


# --- weights ----------------------------------------------------------------


def _partition_size(v: list[int]) -> int:
    return sum(val + i for i, val in enumerate(v, start=1))


def config_weight(c: Configuration) -> tuple[int, int]:
    """Exponents (a, b) of the weight alpha^a beta^b of the configuration."""
    validate(c)
    a = 0
    b = 0
    for t in range(1, c.n + 1):
        zsize = _partition_size(c.z(t)) if t >= 2 else 0
        a += _partition_size(c.y(t)) - zsize
        b += _partition_size(c.x(t)) - _partition_size(c.z(t + 1))
    return a, b


# --- height function --------------------------------------------------------


def reference_matching_edges(c1: Coord, c2: Coord) -> bool:
    """Whether the lattice edge with endpoints c1 (white), c2 (black) is a
    horizontal edge pointing right from the white, i.e. in the reference
    matching of the full lattice."""
    return c2.x == c1.x + 1 and c2.u == c1.u


def height_function(g: TowerGraph, edges: frozenset[Edge]) -> dict[Coord, int]:
    """Heights on tower faces, normalized to 0 at face (0, 0).

    Crossing an edge e while stepping between adjacent faces changes the
    height by +/- (1_{e in M} - 1_{e in M0}), the sign chosen by which side
    the white vertex is on; the orientation is pinned by agreement with the
    particle-count formula (see height_from_particles).
    """
    from .lattice import face_edges, face_position, vertex_position

    eset = set(g.edges)
    in_m = set(edges)
    # All faces of the window around the tower, including boundary faces
    # whose boundary cycles leave the tower; dual steps are only taken
    # across edges of the tower itself.
    faces = []
    for x in range(0, 3 * g.n + 1):
        lo, hi = row_bounds(g.n, x)
        for u in range(lo - 1, hi + 1):
            faces.append(Coord(x, u))
    adj: dict[Coord, list[tuple[Coord, int]]] = {f: [] for f in faces}
    edge_faces: dict[Edge, list[Coord]] = {}
    for f in faces:
        for e in face_edges(f.x, f.u, g.alpha, g.beta):
            if e in eset:
                edge_faces.setdefault(e, []).append(f)
    for e, fs in edge_faces.items():
        if len(fs) != 2:
            continue
        f1, f2 = fs
        step = (1 if e in in_m else 0) - (1 if reference_matching_edges(e.white, e.black) else 0)
        # Sign: crossing from f1 to f2 with the white vertex on the right
        # counts +step.
        p1 = face_position(f1.x, f1.u)
        p2 = face_position(f2.x, f2.u)
        pw = vertex_position(e.white, "white")
        pb = vertex_position(e.black, "black")
        mid = ((pw[0] + pb[0]) / 2, (pw[1] + pb[1]) / 2)
        d = (p2[0] - p1[0], p2[1] - p1[1])
        rel = (pw[0] - mid[0], pw[1] - mid[1])
        cross = d[0] * rel[1] - d[1] * rel[0]
        s = 1 if cross < 0 else -1  # white strictly right of travel -> +1
        adj[f1].append((f2, s * step))
        adj[f2].append((f1, -s * step))
    start = Coord(0, 0)
    if start not in adj:
        raise ValueError("tower has no face at (0, 0)")
    h = {start: 0}
    stack = [start]
    while stack:
        f = stack.pop()
        for f2, step in adj[f]:
            if f2 not in h:
                h[f2] = h[f] + step
                stack.append(f2)
            elif h[f2] != h[f] + step:
                raise ValueError("height increments are inconsistent around a cycle")
    return h


def height_from_particles(c: Configuration) -> dict[Coord, int]:
    """H(X, U) = -#{particles at (X, V) with V > U}, on the same face set."""
    pts = particles(c)
    by_col: dict[int, list[int]] = {}
    for p in pts:
        by_col.setdefault(p.x, []).append(p.u)
    out: dict[Coord, int] = {}
    n = c.n
    for x in range(0, 3 * n + 1):
        col = by_col.get(x, [])
        lo, hi = row_bounds(n, x)
        for u in range(lo - 1, hi + 1):
            out[Coord(x, u)] = -sum(1 for v in col if v > u)
    return out


# --- serialization ----------------------------------------------------------


def config_to_json(c: Configuration) -> str:
    return json.dumps(
        {"version": 1, "n": c.n, "y": c.ys, "x": c.xs, "z": c.zs}, sort_keys=True
    )


def config_from_json(text: str) -> Configuration:
    doc = json.loads(text)
    c = Configuration(doc["n"], doc["y"], doc["x"], doc["z"])
    validate(c)
    return c


def matching_to_json(edges: frozenset[Edge]) -> str:
    return json.dumps(
        {
            "version": 1,
            "edges": [
                {"white": list(e.white), "black": list(e.black)}
                for e in sorted(edges)
            ],
        },
        sort_keys=True,
    )
