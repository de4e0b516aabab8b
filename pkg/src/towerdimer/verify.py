"""Verification harness: each check returns a CheckResult with the
measured quantity, its tolerance and runtime, and the CLI / test suite
render them uniformly.  `fast` runs everything that finishes in seconds;
`full` adds the bulk-convergence and Monte Carlo suites.
"""

from __future__ import annotations

import cmath
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import interlacing, isoradial, kasteleyn, kernels, lattice, limitshape, shuffle

FAST_CRITERIA = (1, 2, 3, 4, 5, 7, 8, 9)
ALL_CRITERIA = tuple(range(1, 13))


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    runtime: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"criterion {self.criterion:2d} [{status}] {self.name}: "
            f"measured={self.measured:.3e} tol={self.tolerance:.1e} "
            f"({self.runtime:.1f}s){' ' + self.detail if self.detail else ''}"
        )


def _result(criterion, name, passed, measured, tol, t0, detail=""):
    return CheckResult(criterion, name, bool(passed), float(measured), tol, time.time() - t0, detail)


def check_partition_function() -> CheckResult:
    """|det K| equals the brute-force weighted matching sum exactly."""
    t0 = time.time()
    worst = 0
    for n in (1, 2, 3):
        for a, b in ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1, 2)), (Fraction(1, 3), Fraction(3))):
            g = lattice.build_tower(n, a, b)
            z_det = kasteleyn.partition_function(g)
            z_sum = sum(kasteleyn.matching_weight(m) for m in kasteleyn.enumerate_matchings(g))
            if z_det != z_sum:
                worst += 1
    return _result(1, "partition function |det K| = sum over matchings", worst == 0, worst, 0.5, t0)


def check_inverse_kasteleyn() -> CheckResult:
    """Contour-integral kernel equals the exact inverse Kasteleyn."""
    t0 = time.time()
    worst = 0.0
    for n in (1, 2, 3):
        for a, b in ((1.0, 1.0), (2.0, 0.5)):
            g = lattice.build_tower(n, Fraction(a), Fraction(b))
            inv = kasteleyn.inverse_matrix(g)
            for i, w in enumerate(g.whites):
                for j, blk in enumerate(g.blacks):
                    val = kernels.finite_kernel(w, blk, n, a, b)
                    worst = max(worst, abs(val - complex(inv[i][j])))
    return _result(2, "double-contour kernel matches exact inverse", worst < 1e-8, worst, 1e-8, t0)


def check_boundary_vanishing() -> CheckResult:
    """Kernel rows indexed by just-outside-the-tower whites vanish."""
    t0 = time.time()
    worst = 0.0
    for n in (1, 2, 3):
        g = lattice.build_tower(n, Fraction(1), Fraction(1))
        blacks = g.blacks[:: max(1, len(g.blacks) // 4)]
        whites = []
        for x in range(0, 3 * n + 1):
            k, m = lattice.column_split(x)
            if m == 1:
                continue  # black column
            whites.append(lattice.Coord(x, n - k + 1))
            if m == 2:
                whites.append(lattice.Coord(x, -2 * k))
            if m == 3:
                whites.append(lattice.Coord(x, -2 * k + 1))
        for w in whites[:: max(1, len(whites) // 5)]:
            for blk in blacks:
                worst = max(worst, abs(kernels.finite_kernel(w, blk, n, 1.0, 1.0)))
    return _result(3, "kernel vanishes at boundary whites", worst < 1e-10, worst, 1e-10, t0)


def _chi_square_sf(stat: float, dof: int) -> float:
    from scipy.stats import chi2

    return float(chi2.sf(stat, dof))


def check_sampler(samples: int = 100_000) -> CheckResult:
    """Shuffling-chain frequencies match exact Boltzmann probabilities."""
    t0 = time.time()
    worst_z = 0.0
    worst_p = 1.0
    for n in (1, 2):
        for a, b in ((Fraction(1), Fraction(1)), (Fraction(2), Fraction(1, 2))):
            g = lattice.build_tower(n, a, b)
            matchings = kasteleyn.enumerate_matchings(g)
            z = kasteleyn.partition_function(g)
            probs = {frozenset(m): float(kasteleyn.matching_weight(m) / z) for m in matchings}
            counts = {k: 0 for k in probs}
            r = shuffle.StepRandomness.from_seed(a, b, seed=12345 + n)
            for _ in range(samples):
                c = shuffle.evolve(n, r)
                counts[frozenset(interlacing.arrays_to_matching(g, c))] += 1
            stat = 0.0
            for k, p in probs.items():
                mean = samples * p
                sd = math.sqrt(samples * p * (1 - p))
                worst_z = max(worst_z, abs(counts[k] - mean) / sd)
                stat += (counts[k] - mean) ** 2 / mean
            worst_p = min(worst_p, _chi_square_sf(stat, len(probs) - 1))
    passed = worst_z < 4.0 and worst_p > 1e-3
    return _result(4, "sampler matches Boltzmann measure", passed, worst_z, 4.0, t0,
                   detail=f"min chi-square p={worst_p:.4f}")


def check_bijection_weights() -> CheckResult:
    """Array-side weight exponents (a, b) reproduce the matching weight."""
    t0 = time.time()
    a, b = Fraction(2, 3), Fraction(5, 7)
    failures = 0
    for n in (1, 2, 3):
        g = lattice.build_tower(n, a, b)
        for m in kasteleyn.enumerate_matchings(g):
            c = interlacing.matching_to_arrays(g, m)
            ea, eb = interlacing.config_weight(c)
            if a**ea * b**eb != kasteleyn.matching_weight(m):
                failures += 1
    return _result(5, "bijection preserves weights exactly", failures == 0, failures, 0.5, t0)


def check_bulk_convergence() -> CheckResult:
    """Finite-kernel edge probabilities approach the full-plane values."""
    t0 = time.time()
    a = b = 1.0
    z0 = complex(-0.5, math.sqrt(7) / 2)
    exact = kernels.gibbs_edge_probabilities_closed_form(kernels.GibbsPoint(z0, a, b))

    def bulk_probs(n):
        base = 3 * n // 2
        pairs = [
            ("beta_edge", lattice.Coord(base, 0), lattice.Coord(base - 1, 1)),
            ("left_edge", lattice.Coord(base - 2, 1), lattice.Coord(base - 1, 0)),
            ("right_edge", lattice.Coord(base, 0), lattice.Coord(base + 1, 0)),
            ("vertical_edge", lattice.Coord(base + 1, 0), lattice.Coord(base + 1, 0)),
        ]
        out = {}
        for name, w, blk in pairs:
            e = lattice.edge_between(w, blk, a, b)
            out[name] = (float(e.signed_weight) * kernels.finite_kernel(w, blk, n, a, b)).real
        return out

    err40 = max(abs(v - exact[k]) for k, v in bulk_probs(40).items())
    err80 = max(abs(v - exact[k]) for k, v in bulk_probs(80).items())
    passed = err80 < 0.02 and err80 < err40
    return _result(6, "bulk edge probabilities converge to Gibbs values", passed, err80, 0.02, t0,
                   detail=f"err(N=40)={err40:.4f}")


def check_critical_points(trials: int = 100) -> CheckResult:
    """dS/dz vanishes at the cubic roots; closed form agrees at a=b=1."""
    t0 = time.time()
    rng = random.Random(2024)
    worst = 0.0
    found = 0
    while found < trials:
        a = math.exp(rng.uniform(-1, 1))
        b = math.exp(rng.uniform(-1, 1))
        x = rng.uniform(0.02, 0.98)
        u = rng.uniform(-2 * x + 0.02, 1 - x - 0.02)
        if limitshape.classify(x, u, a, b) != limitshape.LIQUID:
            continue
        found += 1
        z = limitshape.critical_point(x, u, a, b)
        worst = max(worst, abs(limitshape.action_dz(z, x, u, a, b)))
        if limitshape.classify(x, u, 1.0, 1.0) == limitshape.LIQUID:
            z1 = limitshape.z_uniform(x, u)
            worst = max(worst, abs(limitshape.action_dz(z1, x, u, 1.0, 1.0)))
            worst = max(worst, abs(z1 - limitshape.critical_point(x, u, 1.0, 1.0)))
    return _result(7, "critical-point residuals", worst < 1e-10, worst, 1e-10, t0)


def check_slope_map(trials: int = 200) -> CheckResult:
    """Law-of-sines identities, Newton-polygon membership, and the
    vertical-edge probability reproducing t by quadrature."""
    t0 = time.time()
    rng = random.Random(77)
    worst = 0.0
    polygon_ok = True
    for _ in range(trials):
        a = math.exp(rng.uniform(-1, 1))
        b = math.exp(rng.uniform(-1, 1))
        z0 = complex(rng.uniform(-3, 3), math.exp(rng.uniform(-2, 1)))
        pt = kernels.GibbsPoint(z0, a, b)
        worst = max(worst, max(abs(r) for r in limitshape.law_of_sines_residuals(pt)))
        s, t = limitshape.slopes_of(pt)
        if not (-1e-12 <= t <= 1 + 1e-12 and t - 2 - 1e-12 <= s <= 1e-12):
            polygon_ok = False
    # quadrature of the vertical-edge probability against t = arg(z0)/pi
    quad_err = 0.0
    for _ in range(5):
        a = math.exp(rng.uniform(-1, 1))
        b = math.exp(rng.uniform(-1, 1))
        z0 = complex(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1)))
        pt = kernels.GibbsPoint(z0, a, b)
        p4 = kernels.gibbs_edge_probabilities(pt)["vertical_edge"]
        quad_err = max(quad_err, abs(p4 - cmath.phase(z0) / math.pi))
    passed = worst < 1e-12 and polygon_ok and quad_err < 1e-8
    return _result(8, "slope map: law of sines, Newton polygon, p4 quadrature",
                   passed, worst, 1e-12, t0, detail=f"p4 quadrature err={quad_err:.1e}")


def check_current(trials: int = 100) -> CheckResult:
    """Quadrature of the single kernel entry reproduces the current
    -(1/pi)arg(1 + beta z0); mean-value (harmonicity) check."""
    t0 = time.time()
    rng = random.Random(55)
    worst = 0.0
    for _ in range(trials):
        b = rng.choice((0.5, 1.0, 3.0))
        a = math.exp(rng.uniform(-1, 1))
        z0 = complex(rng.uniform(-3, 3), math.exp(rng.uniform(-2, 1)))
        pt = kernels.GibbsPoint(z0, a, b)
        entry = kernels.gibbs_kernel(pt, lattice.Coord(0, 0), lattice.Coord(-1, 1))
        measured = (-b * entry).real
        worst = max(worst, abs(measured - (-cmath.phase(1 + b * z0) / math.pi)))
    # harmonicity: mean over a circle equals the centre value
    mean_err = 0.0
    for b in (0.5, 1.0, 3.0):
        z0 = complex(0.3, 1.1)
        rho = 0.5
        vals = [
            -cmath.phase(1 + b * (z0 + rho * cmath.exp(2j * math.pi * k / 512))) / math.pi
            for k in range(512)
        ]
        mean_err = max(mean_err, abs(sum(vals) / len(vals) - (-cmath.phase(1 + b * z0) / math.pi)))
    passed = worst < 1e-8 and mean_err < 1e-6
    return _result(9, "current from kernel entry + harmonicity", passed, worst, 1e-8, t0,
                   detail=f"mean-value err={mean_err:.1e}")


def check_hydrodynamic(trials: int = 100) -> CheckResult:
    """Self-similar transport identity at random liquid points, with
    second-order step scaling."""
    t0 = time.time()
    rng = random.Random(99)
    worst = 0.0
    found = 0
    while found < trials:
        tau = rng.uniform(0.5, 2.0)
        x = rng.uniform(0.1, 0.9)
        u = rng.uniform(-2 * x + 0.1, 1 - x - 0.1)
        if limitshape.classify(x, u, 1.0, 1.0) != limitshape.LIQUID:
            continue
        disc = (1 - 3 * x) ** 2 - 4 * (-u - 2 * x) * (-1 + u + x)
        if disc > -0.3:
            continue  # finite differences degrade near the arctic curve

        found += 1
        worst = max(worst, limitshape.hydro_residual(x * tau, u * tau, tau, step=1e-5))
    # O(step^2) scaling at a fixed interior point
    r1 = limitshape.hydro_residual(0.4, 0.1, 1.0, step=4e-3)
    r2 = limitshape.hydro_residual(0.4, 0.1, 1.0, step=2e-3)
    r3 = limitshape.hydro_residual(0.4, 0.1, 1.0, step=1e-3)
    scaling_ok = r1 / r2 > 3.0 and r2 / r3 > 3.0
    passed = worst < 1e-6 and scaling_ok
    return _result(10, "hydrodynamic identity", passed, worst, 1e-6, t0,
                   detail=f"step ratios {r1 / r2:.2f}, {r2 / r3:.2f}")


def check_isoradial(trials: int = 100) -> CheckResult:
    """Dual-cycle closure, periodicity, and common circumradius."""
    t0 = time.time()
    rng = random.Random(31)
    worst = 0.0
    for _ in range(trials):
        a = math.exp(rng.uniform(-1, 1))
        b = math.exp(rng.uniform(-1, 1))
        z0 = complex(rng.uniform(-2, 2), math.exp(rng.uniform(-2, 1)))
        worst = max(worst, isoradial.max_closure_residual(z0, a, b))
    emb = isoradial.embed_patch(complex(0.3, 0.9), 0.5, 2.0, (0, 9), (-4, 4))
    period_err = emb.translate_check()
    rep = isoradial.isoradiality_report(isoradial.FIGURE_Z0, 1.0, 1.0)
    spread = max(rep.max_face_spread, rep.radius_spread)
    passed = worst < 1e-12 and period_err < 1e-12 and spread < 1e-6
    return _result(11, "isoradial embedding: closure, periods, common radius",
                   passed, max(worst, period_err, spread), 1e-12, t0,
                   detail=f"radius spread={spread:.1e}")


def check_frozen() -> CheckResult:
    """All edge probabilities degenerate to {0, 1} for real z0 in each of
    the five intervals between the kernel's real singularities."""
    t0 = time.time()
    worst = 0.0
    for a, b in ((0.5, 2.0), (1.0, 1.0)):
        points = [-1 / b - 1.0, -1 / (2 * b), min(a, 1.0) / 2, (min(a, 1.0) + max(a, 1.0)) / 2, max(a, 1.0) + 1.0]
        if a == 1.0:
            points.remove((min(a, 1.0) + max(a, 1.0)) / 2)
        for x0 in points:
            pt = kernels.GibbsPoint(complex(x0, 0.0), a, b)
            for p in kernels.gibbs_edge_probabilities(pt).values():
                worst = max(worst, min(abs(p), abs(p - 1)))
    return _result(12, "frozen measures have {0,1} edge probabilities", worst < 1e-10, worst, 1e-10, t0)


CHECKS = {
    1: check_partition_function,
    2: check_inverse_kasteleyn,
    3: check_boundary_vanishing,
    4: check_sampler,
    5: check_bijection_weights,
    6: check_bulk_convergence,
    7: check_critical_points,
    8: check_slope_map,
    9: check_current,
    10: check_hydrodynamic,
    11: check_isoradial,
    12: check_frozen,
}


def _run_one(criterion: int) -> CheckResult:
    return CHECKS[criterion]()


def run_suite(level: str = "fast", workers: int | None = None) -> list[CheckResult]:
    criteria = FAST_CRITERIA if level == "fast" else ALL_CRITERIA
    if workers is None:
        workers = int(os.environ.get("TOWERDIMER_WORKERS", "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, criteria))
    else:
        results = [_run_one(c) for c in criteria]
    return sorted(results, key=lambda r: r.criterion)


def report_json(results: list[CheckResult]) -> str:
    return json.dumps([asdict(r) for r in results], indent=2)


def report_from_json(text: str) -> list[CheckResult]:
    return [CheckResult(**d) for d in json.loads(text)]
