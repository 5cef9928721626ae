"""Randomised self-checks of the algebra, evaluation and classification code.

Each suite returns a :class:`SuiteResult`; :func:`run_suites` runs a
selection with one seed so that every run is reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from bcjulia import core
from bcjulia.core import Bicomplex, ConjKind
from bcjulia.dynamics import (
    ComponentClass, IterParams, classify_points, component_orbits, orbit_bicomplex_many,
    require_nondegenerate,
)
from bcjulia.poly import BicomplexPoly, eval_direct, eval_idempotent, parse_bicomplex, quad

ALGEBRA_TOL = 1e-12
EVAL_TOL = 1e-10

#: The four polynomial parameters ``c`` of ``w**2 + c`` shown in the figures.
FIGURE_PARAMS = {
    "fig1": "(0.27,0,0,0)",
    "fig2": "(-1.754878,0,0,0)",
    "fig3": "e1e2(0.26,0;-1.754878,0)",
    "fig4": "e1e2(-0.123,0.745;-0.391,-0.587)",
}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def random_bicomplex(rng: np.random.Generator, n: int, scale: float = 10.0) -> list[Bicomplex]:
    r = rng.uniform(-scale, scale, size=(n, 4))
    return [Bicomplex.from_reals(*row) for row in r]


def rel_err(x: Bicomplex, y: Bicomplex, scale: float) -> float:
    return core.norm(core.sub(x, y)) / max(scale, 1e-300)


KLEIN = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]


def suite_algebra(rng: np.random.Generator, n: int = 10_000, n_inv: int = 1_000) -> SuiteResult:
    a, b, c = (random_bicomplex(rng, n) for _ in range(3))
    worst = 0.0
    for x, y, z in zip(a, b, c):
        nx, ny, nz = core.norm(x), core.norm(y), core.norm(z)
        worst = max(
            worst,
            rel_err(x * y, y * x, nx * ny),
            rel_err((x * y) * z, x * (y * z), nx * ny * nz),
            rel_err(x * (y + z), x * y + x * z, nx * (ny + nz)),
        )
    inv_worst = 0.0
    for w in random_bicomplex(rng, n_inv):
        if core.is_null_cone(w):
            continue
        inv_worst = max(inv_worst, core.norm(core.sub(w * core.inverse(w), core.ONE)))
    ok = worst <= ALGEBRA_TOL and inv_worst <= ALGEBRA_TOL
    return SuiteResult("algebra", ok, f"ring laws max rel err {worst:.2e}, "
                                      f"|w*w^-1 - 1| max {inv_worst:.2e} (tol {ALGEBRA_TOL:g})")


def suite_klein(rng: np.random.Generator, n: int = 200) -> SuiteResult:
    bad = 0
    for w in random_bicomplex(rng, n):
        for j in range(4):
            for k in range(4):
                if core.conj(j, core.conj(k, w)) != core.conj(KLEIN[j][k], w):
                    bad += 1
                if ConjKind(j).compose(ConjKind(k)) != KLEIN[j][k]:
                    bad += 1
    return SuiteResult("klein", bad == 0, f"16 compositions on {n} samples, {bad} mismatches")


def suite_idempotent(rng: np.random.Generator, n: int = 10_000) -> SuiteResult:
    a, b = random_bicomplex(rng, n), random_bicomplex(rng, n)
    worst = 0.0
    for x, y in zip(a, b):
        x1, x2 = core.to_idempotent(x)
        y1, y2 = core.to_idempotent(y)
        nx, ny = core.norm(x), core.norm(y)
        worst = max(worst,
                    rel_err(core.from_idempotent((x1 + y1, x2 + y2)), x + y, nx + ny),
                    rel_err(core.from_idempotent((x1 * y1, x2 * y2)), x * y, nx * ny),
                    rel_err(core.from_idempotent(core.to_idempotent(x)), x, nx))
        if not core.is_null_cone(y):
            q = core.from_idempotent((x1 / y1, x2 / y2))
            worst = max(worst, rel_err(q, core.div(x, y), core.norm(q)))
    ok = worst <= ALGEBRA_TOL
    return SuiteResult("idempotent", ok, f"+, *, / and round trip max rel err {worst:.2e}")


def suite_norm(rng: np.random.Generator, n: int = 10_000) -> SuiteResult:
    a, b = random_bicomplex(rng, n), random_bicomplex(rng, n)
    fails = 0
    for x, y in zip(a, b):
        nx, ny = core.norm(x), core.norm(y)
        s = complex(*rng.uniform(-10, 10, size=2))
        fails += nx < 0
        fails += abs(core.norm(x * s) - abs(s) * nx) > 1e-12 * abs(s) * nx
        fails += core.norm(x + y) > (nx + ny) * (1 + 1e-12)
        fails += core.norm(x * y) > math.sqrt(2) * nx * ny * (1 + 1e-12)
    fails += core.norm(core.ZERO) != 0.0
    e = core.E1
    witness = abs(core.norm(e * e) - math.sqrt(2) * core.norm(e) ** 2)
    ok = fails == 0 and witness <= 1e-12
    return SuiteResult("norm", ok, f"{fails} violations in {n} pairs, e1*e1 equality gap {witness:.1e}")


def random_poly(rng: np.random.Generator, max_degree: int = 6) -> BicomplexPoly:
    d = int(rng.integers(0, max_degree + 1))
    return BicomplexPoly(Bicomplex.from_reals(*rng.uniform(-2, 2, size=4)) for _ in range(d + 1))


def eval_scale(P: BicomplexPoly, w: Bicomplex) -> float:
    r = math.sqrt(2) * core.norm(w)
    return sum(core.norm(a) * r ** k for k, a in enumerate(P.coeffs))


def suite_evaluation(rng: np.random.Generator, n: int = 10_000) -> SuiteResult:
    worst = 0.0
    for _ in range(n):
        P = random_poly(rng)
        w = Bicomplex.from_reals(*rng.uniform(-2, 2, size=4))
        worst = max(worst, rel_err(eval_idempotent(P, w), eval_direct(P, w), eval_scale(P, w)))
    return SuiteResult("evaluation", worst <= EVAL_TOL,
                       f"idempotent vs direct Horner max rel err {worst:.2e} (tol {EVAL_TOL:g})")


def k2_agreement(P: BicomplexPoly, z1: np.ndarray, z2: np.ndarray, params: IterParams, threads=None):
    """Per-point agreement between the direct bicomplex orbit and the
    componentwise orbits about whether the point stays bounded."""
    t = 1j * z2
    cls = classify_points(P, z1 - t, z1 + t, params, threads)
    esc, _ = orbit_bicomplex_many(P, z1, z2, params)
    agree = (~esc) == cls.bounded
    return agree, cls


def within_boundary(P: BicomplexPoly, z1: np.ndarray, z2: np.ndarray, cls, params: IterParams,
                    probes: int = 16) -> np.ndarray:
    """Points certified to lie within ``params.de_threshold`` of a boundary.

    An escaping component is certified by its distance estimate. A bounded
    one has no estimate, so a ring of ``probes`` points at that distance is
    iterated instead; any escaping probe puts a boundary inside the ring.
    """
    near = cls.near_boundary(params.de_threshold)
    ring = params.de_threshold * np.exp(2j * np.pi * np.arange(probes) / probes)
    t = 1j * z2
    for p, w, lab in zip(require_nondegenerate(P, params.tol), (z1 - t, z1 + t), (cls.c1, cls.c2)):
        idx = np.flatnonzero(~near & (lab == ComponentClass.INTERIOR))
        if idx.size:
            esc, _, _ = component_orbits(p, (w[idx, None] + ring).ravel(), params)
            near[idx[esc.reshape(idx.size, probes).any(axis=1)]] = True
    return near


def sample_components(rng: np.random.Generator, n: int, half_width: float = 2.0):
    """``n`` random points whose idempotent components are uniform in a square."""
    a = rng.uniform(-half_width, half_width, size=(n, 2)) @ np.array([1, 1j])
    b = rng.uniform(-half_width, half_width, size=(n, 2)) @ np.array([1, 1j])
    z1 = (a + b) / 2
    d = (a - b) / 2
    return z1, 1j * d


def suite_oracle(rng: np.random.Generator, side: int = 64) -> SuiteResult:
    params = IterParams(max_iter=500)
    parts = []
    ok = True
    for name, lit in FIGURE_PARAMS.items():
        P = quad(parse_bicomplex(lit))
        z1, z2 = sample_components(rng, side * side)
        agree, cls = k2_agreement(P, z1, z2, params)
        frac = agree.mean()
        stray = int((~agree & ~within_boundary(P, z1, z2, cls, params)).sum())
        ok &= frac >= 0.999 and stray == 0
        parts.append(f"{name} {frac:.4f}" + (f" ({stray} far from boundary)" if stray else ""))
    return SuiteResult("oracle", bool(ok), "K2 agreement " + ", ".join(parts) + " (need >= 0.999)")


def suite_symmetry(rng: np.random.Generator, n: int = 4096) -> SuiteResult:
    params = IterParams(max_iter=300, de_threshold=1e-3)
    bad = 0
    for lit in FIGURE_PARAMS.values():
        P = quad(parse_bicomplex(lit))
        a = rng.uniform(-1.8, 1.8, size=(n, 2)) @ np.array([1, 1j])
        b = rng.uniform(-1.8, 1.8, size=(n, 2)) @ np.array([1, 1j])
        pos = classify_points(P, a, b, params).labels
        neg = classify_points(P, -a, -b, params).labels
        bad += int((pos != neg).sum())
    return SuiteResult("symmetry", bad == 0, f"w vs -w for w**2+c: {bad} label mismatches")


SUITES: dict[str, Callable[[np.random.Generator], SuiteResult]] = {
    "algebra": suite_algebra,
    "klein": suite_klein,
    "idempotent": suite_idempotent,
    "norm": suite_norm,
    "evaluation": suite_evaluation,
    "oracle": suite_oracle,
    "symmetry": suite_symmetry,
}


def run_suites(names: list[str] | None = None, seed: int = 0) -> list[SuiteResult]:
    names = list(SUITES) if not names else names
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    results = []
    for i, name in enumerate(names):
        rng = np.random.default_rng([seed, i])
        t = time.perf_counter()
        res = SUITES[name](rng)
        res.seconds = time.perf_counter() - t
        results.append(res)
    return results

