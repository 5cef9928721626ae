"""Orbits, planar classification and the bicomplex class table.

A non-degenerate bicomplex polynomial ``P`` of degree ``d >= 2`` acts on the
idempotent components of ``w`` through its two projections ``p1`` and
``p2``.  The filled-in Julia set factors as ``K1(p1) x_e K1(p2)`` and the
Julia set is ``[J1(p1) x_e K1(p2)] U [K1(p1) x_e J1(p2)]``, so each point is
classified by labelling its two components separately and looking the pair
up in :data:`CLASS_TABLE`.

Boundary detection uses the exterior distance estimate
``|z_n| ln|z_n| / |dz_n|``: an escaping component whose estimate is at most
``de_threshold`` is labelled BOUNDARY.  Bounded orbits are always INTERIOR.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Iterable

import numpy as np

from bcjulia import kernels
from bcjulia.core import Bicomplex, to_idempotent
from bcjulia.errors import DegenerateError, DegreeError
from bcjulia.poly import BicomplexPoly, ComplexPoly, escape_radius, eval_direct, is_degenerate, project

__all__ = [
    "ComponentClass", "BicomplexClass", "CLASS_TABLE", "IterParams", "OrbitRecord",
    "PointClassification", "InvarianceReport",
    "iterate_complex", "classify_component", "classify_bicomplex", "classify_bicomplex_detail",
    "orbit_bicomplex", "orbit_bicomplex_many", "component_orbits", "classify_points",
    "julia_invariance_check", "require_nondegenerate",
]

CHUNK = 16384


class ComponentClass(IntEnum):
    INTERIOR = 0
    BOUNDARY = 1
    EXTERIOR = 2


class BicomplexClass(IntEnum):
    J2 = 0
    K2_INTERIOR = 1
    F2_BOUNDED = 2
    F2_UNBOUNDED_MIXED = 3
    F2_UNBOUNDED = 4

    @property
    def in_k2(self) -> bool:
        return self in (BicomplexClass.J2, BicomplexClass.K2_INTERIOR)


_C = ComponentClass
_B = BicomplexClass
#: ``CLASS_TABLE[c1, c2]`` is the bicomplex class of a point whose
#: components are labelled ``c1`` and ``c2``.
CLASS_TABLE = np.empty((3, 3), dtype=np.uint8)
for _a, _b, _label in [
    (_C.INTERIOR, _C.INTERIOR, _B.K2_INTERIOR),
    (_C.INTERIOR, _C.BOUNDARY, _B.J2),
    (_C.BOUNDARY, _C.INTERIOR, _B.J2),
    (_C.BOUNDARY, _C.BOUNDARY, _B.J2),
    (_C.INTERIOR, _C.EXTERIOR, _B.F2_BOUNDED),
    (_C.EXTERIOR, _C.INTERIOR, _B.F2_BOUNDED),
    (_C.BOUNDARY, _C.EXTERIOR, _B.F2_UNBOUNDED_MIXED),
    (_C.EXTERIOR, _C.BOUNDARY, _B.F2_UNBOUNDED_MIXED),
    (_C.EXTERIOR, _C.EXTERIOR, _B.F2_UNBOUNDED),
]:
    CLASS_TABLE[_a, _b] = _label


@dataclass(frozen=True)
class IterParams:
    """Iteration limits and thresholds.

    ``escape_radius`` overrides the per-polynomial radius from
    :func:`bcjulia.poly.escape_radius`; ``escape_safety`` scales whichever
    radius is used.
    """

    max_iter: int = 500
    escape_radius: float | None = None
    de_threshold: float = 1e-3
    tol: float = 1e-12
    escape_safety: float = 1.0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.de_threshold > 0:
            raise ValueError("de_threshold must be positive")
        if self.escape_radius is not None and not self.escape_radius > 0:
            raise ValueError("escape_radius must be positive")
        if not self.escape_safety >= 1.0:
            raise ValueError("escape_safety must be >= 1")
        if self.tol < 0:
            raise ValueError("tol must be non-negative")

    def radius_for(self, p: ComplexPoly) -> float:
        base = escape_radius(p) if self.escape_radius is None else self.escape_radius
        return base * self.escape_safety


@dataclass(frozen=True)
class OrbitRecord:
    escaped: bool
    iters: int
    final_z: complex
    final_dz: complex
    de: float  # +inf unless escaped


def _require_degree(p: ComplexPoly) -> None:
    if p.degree < 2:
        raise DegreeError(f"orbit iteration needs degree >= 2, got {p.degree}")


def _coeff_arrays(p: ComplexPoly) -> tuple[np.ndarray, np.ndarray]:
    c = np.array(p.coeffs, dtype=np.complex128)
    return np.ascontiguousarray(c.real), np.ascontiguousarray(c.imag)


def _step(cre, cim, zr, zi, dr, di):
    # Same operation order as the kernels.
    d = len(cre) - 1
    pr, pi, qr, qi = cre[d], cim[d], 0.0, 0.0
    for k in range(d - 1, -1, -1):
        t = qr * zr - qi * zi + pr
        qi = qr * zi + qi * zr + pi
        qr = t
        t = pr * zr - pi * zi + cre[k]
        pi = pr * zi + pi * zr + cim[k]
        pr = t
    t = qr * dr - qi * di
    di = qr * di + qi * dr
    return pr, pi, t, di


def iterate_complex(p: ComplexPoly, z0: complex, params: IterParams = IterParams()) -> OrbitRecord:
    """Iterate ``z <- p(z)`` with ``dz <- p'(z) dz`` from ``dz = 1``.

    Stops once ``|z|`` exceeds the escape radius or after ``max_iter``
    steps.  An escaped orbit is pushed two more steps before the distance
    estimate is taken.
    """
    _require_degree(p)
    cre = [a.real for a in p.coeffs]
    cim = [a.imag for a in p.coeffs]
    radius = params.radius_for(p)
    r2 = radius * radius
    z0 = complex(z0)
    zr, zi, dr, di = z0.real, z0.imag, 1.0, 0.0
    n = 0
    esc = (zr * zr + zi * zi) > r2
    while not esc and n < params.max_iter:
        zr, zi, dr, di = _step(cre, cim, zr, zi, dr, di)
        n += 1
        esc = (zr * zr + zi * zi) > r2
    if not esc:
        return OrbitRecord(False, n, complex(zr, zi), complex(dr, di), math.inf)
    for _ in range(2):
        if zr * zr + zi * zi > 1e100:
            break
        zr, zi, dr, di = _step(cre, cim, zr, zi, dr, di)
    mz = math.sqrt(zr * zr + zi * zi)
    md = math.sqrt(dr * dr + di * di)
    de = mz * math.log(mz) / md if md > 0.0 else math.inf
    return OrbitRecord(True, n, complex(zr, zi), complex(dr, di), de)


def _component_label(escaped: bool, de: float, threshold: float) -> ComponentClass:
    if not escaped:
        return ComponentClass.INTERIOR
    return ComponentClass.BOUNDARY if de <= threshold else ComponentClass.EXTERIOR


def classify_component(p: ComplexPoly, z0: complex,
                       params: IterParams = IterParams()) -> ComponentClass:
    rec = iterate_complex(p, z0, params)
    return _component_label(rec.escaped, rec.de, params.de_threshold)


def require_nondegenerate(P: BicomplexPoly, tol: float = 1e-12) -> tuple[ComplexPoly, ComplexPoly]:
    """Return both projections, or raise :class:`DegenerateError`."""
    if P.degree < 2:
        raise DegenerateError(f"polynomial degree {P.degree} < 2")
    if is_degenerate(P, tol):
        raise DegenerateError(f"leading coefficient {P.leading} lies in the null-cone")
    return project(P, 1), project(P, 2)


def classify_bicomplex_detail(P: BicomplexPoly, w: Bicomplex, params: IterParams = IterParams()):
    """Classify ``w`` and return ``(class, (c1, c2), (orbit1, orbit2))``."""
    p1, p2 = require_nondegenerate(P, params.tol)
    w1, w2 = to_idempotent(w)
    r1 = iterate_complex(p1, w1, params)
    r2 = iterate_complex(p2, w2, params)
    c1 = _component_label(r1.escaped, r1.de, params.de_threshold)
    c2 = _component_label(r2.escaped, r2.de, params.de_threshold)
    return BicomplexClass(int(CLASS_TABLE[c1, c2])), (c1, c2), (r1, r2)


def classify_bicomplex(P: BicomplexPoly, w: Bicomplex,
                       params: IterParams = IterParams()) -> BicomplexClass:
    return classify_bicomplex_detail(P, w, params)[0]


def _oracle_radius(P: BicomplexPoly, params: IterParams) -> float:
    p1, p2 = require_nondegenerate(P, params.tol)
    return max(params.radius_for(p1), params.radius_for(p2))


def orbit_bicomplex(P: BicomplexPoly, w: Bicomplex,
                    params: IterParams = IterParams()) -> tuple[bool, int]:
    """Iterate ``w <- P(w)`` in full bicomplex arithmetic.

    The orbit counts as escaped once the larger idempotent component
    exceeds the larger of the two component escape radii.
    """
    radius = _oracle_radius(P, params)

    def out(v: Bicomplex) -> bool:
        a, b = to_idempotent(v)
        return max(abs(a), abs(b)) > radius

    n = 0
    esc = out(w)
    while not esc and n < params.max_iter:
        w = eval_direct(P, w)
        n += 1
        esc = out(w)
    return esc, n


def orbit_bicomplex_many(P: BicomplexPoly, z1: np.ndarray, z2: np.ndarray,
                         params: IterParams = IterParams()) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`orbit_bicomplex` on ``w = z1 + z2 i2`` arrays."""
    radius = _oracle_radius(P, params)
    a1 = np.array([a.z1 for a in P.coeffs], dtype=np.complex128)
    a2 = np.array([a.z2 for a in P.coeffs], dtype=np.complex128)
    x1 = np.asarray(z1, dtype=np.complex128).ravel().copy()
    x2 = np.asarray(z2, dtype=np.complex128).ravel().copy()

    def out(u1, u2):
        t = 1j * u2
        return np.maximum(np.abs(u1 - t), np.abs(u1 + t)) > radius

    escaped = out(x1, x2)
    iters = np.zeros(x1.size, dtype=np.int32)
    idx = np.flatnonzero(~escaped)
    u1, u2 = x1[idx], x2[idx]
    step = 0
    while idx.size and step < params.max_iter:
        v1 = np.zeros_like(u1)
        v2 = np.zeros_like(u2)
        for k in range(len(a1) - 1, -1, -1):
            v1, v2 = v1 * u1 - v2 * u2 + a1[k], v1 * u2 + v2 * u1 + a2[k]
        u1, u2 = v1, v2
        step += 1
        e = out(u1, u2)
        if e.any():
            escaped[idx[e]] = True
            iters[idx[e]] = step
            keep = ~e
            idx, u1, u2 = idx[keep], u1[keep], u2[keep]
    iters[idx] = step
    shape = np.shape(z1)
    return escaped.reshape(shape), iters.reshape(shape)


def _threads(threads: int | None) -> int:
    return max(1, threads if threads is not None else (os.cpu_count() or 1))


def component_orbits(p: ComplexPoly, z: np.ndarray, params: IterParams = IterParams(),
                     threads: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Escape flags, iteration counts and distance estimates for an array of
    starting points, evaluated in fixed-size chunks on a thread pool.

    Each element depends only on its own starting point, so the result is
    the same for any thread count.
    """
    _require_degree(p)
    z = np.asarray(z, dtype=np.complex128)
    flat = z.ravel()
    zre = np.ascontiguousarray(flat.real)
    zim = np.ascontiguousarray(flat.imag)
    n = flat.size
    escaped = np.zeros(n, dtype=np.uint8)
    iters = np.zeros(n, dtype=np.int32)
    de = np.zeros(n, dtype=np.float64)
    cre, cim = _coeff_arrays(p)
    radius = params.radius_for(p)

    def run(lo: int) -> None:
        hi = min(lo + CHUNK, n)
        kernels.escape_time(cre, cim, zre[lo:hi], zim[lo:hi], radius, params.max_iter,
                            escaped[lo:hi], iters[lo:hi], de[lo:hi])

    starts = range(0, n, CHUNK)
    workers = _threads(threads)
    if workers == 1 or n <= CHUNK:
        for lo in starts:
            run(lo)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, starts))
    return escaped.astype(bool).reshape(z.shape), iters.reshape(z.shape), de.reshape(z.shape)


def _labels(escaped: np.ndarray, de: np.ndarray, threshold: float) -> np.ndarray:
    lab = np.full(escaped.shape, ComponentClass.EXTERIOR, dtype=np.uint8)
    lab[escaped & (de <= threshold)] = ComponentClass.BOUNDARY
    lab[~escaped] = ComponentClass.INTERIOR
    return lab


@dataclass
class PointClassification:
    labels: np.ndarray   # BicomplexClass ordinals
    c1: np.ndarray       # ComponentClass ordinals
    c2: np.ndarray
    iters1: np.ndarray
    iters2: np.ndarray
    de1: np.ndarray
    de2: np.ndarray

    @property
    def in_k2(self) -> np.ndarray:
        return (self.labels == BicomplexClass.J2) | (self.labels == BicomplexClass.K2_INTERIOR)

    @property
    def bounded(self) -> np.ndarray:
        """Neither component escaped within the iteration budget."""
        return (self.c1 == ComponentClass.INTERIOR) & (self.c2 == ComponentClass.INTERIOR)

    def near_boundary(self, threshold: float) -> np.ndarray:
        """An escaping component lies within ``threshold`` of its Julia set."""
        return (self.de1 <= threshold) | (self.de2 <= threshold)


def classify_points(P: BicomplexPoly, w1: np.ndarray, w2: np.ndarray,
                    params: IterParams = IterParams(),
                    threads: int | None = None) -> PointClassification:
    """Classify points given by their idempotent components ``w1``, ``w2``."""
    p1, p2 = require_nondegenerate(P, params.tol)
    e1, n1, d1 = component_orbits(p1, w1, params, threads)
    e2, n2, d2 = component_orbits(p2, w2, params, threads)
    c1 = _labels(e1, d1, params.de_threshold)
    c2 = _labels(e2, d2, params.de_threshold)
    return PointClassification(CLASS_TABLE[c1, c2], c1, c2, n1, n2, d1, d2)


@dataclass
class InvarianceReport:
    sampled: int = 0
    checked: int = 0
    violations: int = 0
    violating_points: list[Bicomplex] = field(default_factory=list)

    @property
    def fraction(self) -> float:
        return self.violations / self.checked if self.checked else 0.0


def julia_invariance_check(P: BicomplexPoly, sample: Iterable[Bicomplex],
                           params: IterParams = IterParams(),
                           threads: int | None = None) -> InvarianceReport:
    """Check that ``P`` maps J2-classified sample points to J2 points.

    The image is classified with twice the boundary threshold, since the
    map stretches distances to the Julia set.
    """
    require_nondegenerate(P, params.tol)
    pts = list(sample)
    if not pts:
        return InvarianceReport()
    pairs = np.array([to_idempotent(w) for w in pts], dtype=np.complex128)
    cls = classify_points(P, pairs[:, 0], pairs[:, 1], params, threads)
    j2 = [w for w, lab in zip(pts, cls.labels) if lab == BicomplexClass.J2]
    report = InvarianceReport(sampled=len(pts), checked=len(j2))
    if not j2:
        return report
    images = [eval_direct(P, w) for w in j2]
    img = np.array([to_idempotent(v) for v in images], dtype=np.complex128)
    relaxed = replace(params, de_threshold=2.0 * params.de_threshold)
    cls2 = classify_points(P, img[:, 0], img[:, 1], relaxed, threads)
    bad = np.flatnonzero(cls2.labels != BicomplexClass.J2)
    report.violations = int(bad.size)
    report.violating_points = [j2[i] for i in bad]
    return report
