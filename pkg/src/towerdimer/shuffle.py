"""Growth dynamics on interlacing arrays (the shuffling sampler).

One step maps a size-N configuration to a size-(N+1) configuration:

  1. every z-array is replaced by the x-array one level below,
     z^i(new) = x^{i-1}(old), and a fresh top level enters as the pair of
     full staircases;
  2. y-round: each y-particle jumps by +1 if forced from below, stays if
     blocked, and otherwise jumps with probability alpha*beta/(1+alpha*beta);
  3. x-round: same against the updated y-particles, with jump probability
     beta/(1+beta).

Run for N steps from the empty configuration this samples the Boltzmann
measure on the size-N tower exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .interlacing import Configuration, initial_config, staircase, validate
from .lattice import Edge, TowerGraph, build_tower


@dataclass
class StepRandomness:
    """Source of the Bernoulli draws used by one or more steps."""

    alpha: Fraction
    beta: Fraction
    rng: np.random.Generator

    @classmethod
    def from_seed(cls, alpha, beta, seed: int) -> "StepRandomness":
        alpha = Fraction(alpha)
        beta = Fraction(beta)
        if alpha <= 0 or beta <= 0:
            raise ValueError("weights must be positive")
        return cls(alpha, beta, np.random.default_rng(seed))

    @property
    def p_y(self) -> float:
        ab = self.alpha * self.beta
        return float(ab / (1 + ab))

    @property
    def p_x(self) -> float:
        return float(self.beta / (1 + self.beta))

    def draw_y(self) -> bool:
        return bool(self.rng.random() < self.p_y)

    def draw_x(self) -> bool:
        return bool(self.rng.random() < self.p_x)


def _round(
    movers: list[int], guides: list[int], draw, out_of_range_jumps: bool = False
) -> list[int]:
    """One jump round.  movers[j] is forced to +1 if guides[j] == movers[j]+1,
    blocked if guides[j-1] == movers[j]+1, otherwise jumps on a fresh draw.
    Out-of-range guide indices never force or block."""
    new = []
    for j, v in enumerate(movers):
        forced = j < len(guides) and guides[j] == v + 1
        blocked = j >= 1 and j - 1 < len(guides) and guides[j - 1] == v + 1
        if forced:
            new.append(v + 1)
        elif blocked:
            new.append(v)
        else:
            new.append(v + 1 if draw() else v)
    return new


def step(c: Configuration, r: StepRandomness) -> Configuration:
    n = c.n
    old_xs = [v[:] for v in c.xs] + [staircase(2 * n + 2)]
    ys = [v[:] for v in c.ys] + [staircase(2 * n + 1)]
    # z-update: shift the x-arrays up one level.
    zs = [old_xs[i][:] for i in range(n + 1)]  # z^{i+2}(new) = x^{i+1}(old)
    new_ys = []
    for i in range(1, n + 2):
        guides = old_xs[i - 2] if i >= 2 else []
        new_ys.append(_round(ys[i - 1], guides, r.draw_y))
    new_xs = []
    for i in range(1, n + 2):
        new_xs.append(_round(old_xs[i - 1], new_ys[i - 1], r.draw_x))
    out = Configuration(n + 1, new_ys, new_xs, zs)
    validate(out)
    return out


def evolve(n: int, r: StepRandomness) -> Configuration:
    c = initial_config()
    for _ in range(n):
        c = step(c, r)
    return c


def sample_config(n: int, alpha, beta, seed: int) -> Configuration:
    return evolve(n, StepRandomness.from_seed(alpha, beta, seed))


def sample_tower(n: int, alpha, beta, seed: int) -> tuple[TowerGraph, frozenset[Edge]]:
    """Sample a perfect matching of the size-n tower from its Boltzmann measure."""
    from .interlacing import arrays_to_matching

    g = build_tower(n, alpha, beta)
    c = sample_config(n, alpha, beta, seed)
    return g, arrays_to_matching(g, c)


def sample_many(n: int, alpha, beta, seed: int, count: int) -> list[Configuration]:
    r = StepRandomness.from_seed(alpha, beta, seed)
    return [evolve(n, r) for _ in range(count)]
