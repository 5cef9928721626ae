"""Discs, rectangles and T-cartesian products in idempotent coordinates.

A T-cartesian set ``X1 x_e X2`` is the set of bicomplex ``w`` whose
idempotent components satisfy ``w1 in X1`` and ``w2 in X2``.  A discus
``D(a; r1, r2)`` is the product of two planar balls centred at the
projections of ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from bcjulia.core import Bicomplex, from_idempotent, to_idempotent

__all__ = [
    "Ball1", "Rect", "Discus", "TCartesian",
    "discus_contains", "project_region", "sample_grid",
]


@dataclass(frozen=True)
class Ball1:
    """Open planar ball; :meth:`contains` with ``closed=True`` tests the closure."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    def contains(self, z: complex, closed: bool = False) -> bool:
        d = abs(complex(z) - self.center)
        return d <= self.radius if closed else d < self.radius

    def bounds(self) -> tuple[complex, complex]:
        r = complex(self.radius, self.radius)
        return self.center - r, self.center + r


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle ``[lo.real, hi.real] x [lo.imag, hi.imag]``."""

    lo: complex
    hi: complex

    def __post_init__(self):
        lo, hi = complex(self.lo), complex(self.hi)
        if not (lo.real < hi.real and lo.imag < hi.imag):
            raise ValueError(f"empty rectangle {lo} .. {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def center(self) -> complex:
        return (self.lo + self.hi) * 0.5

    def contains(self, z: complex, closed: bool = False) -> bool:
        z = complex(z)
        if closed:
            return (self.lo.real <= z.real <= self.hi.real
                    and self.lo.imag <= z.imag <= self.hi.imag)
        return (self.lo.real < z.real < self.hi.real
                and self.lo.imag < z.imag < self.hi.imag)

    def bounds(self) -> tuple[complex, complex]:
        return self.lo, self.hi


Region = Union[Ball1, Rect]


@dataclass(frozen=True)
class TCartesian:
    region1: Region
    region2: Region

    def contains(self, w: Bicomplex, closed: bool = False) -> bool:
        w1, w2 = to_idempotent(w)
        return (self.region1.contains(w1, closed)
                and self.region2.contains(w2, closed))


@dataclass(frozen=True)
class Discus:
    """``D(center; r1, r2)``; with ``r1 == r2`` this is the T-disc (Lie ball)."""

    center: Bicomplex
    r1: float
    r2: float

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise ValueError(f"discus radii must be positive, got {self.r1}, {self.r2}")

    def as_tcartesian(self) -> TCartesian:
        c1, c2 = to_idempotent(self.center)
        return TCartesian(Ball1(c1, self.r1), Ball1(c2, self.r2))


def discus_contains(d: Discus, w: Bicomplex, closed: bool = False) -> bool:
    """Strict membership in the open discus, or ``<=`` in the closed one."""
    return d.as_tcartesian().contains(w, closed)


def project_region(t: TCartesian | Discus, which: int) -> Region:
    if isinstance(t, Discus):
        t = t.as_tcartesian()
    if which == 1:
        return t.region1
    if which == 2:
        return t.region2
    raise ValueError(f"projection index must be 1 or 2, got {which}")


def _planar_points(region: Region, n: int) -> list[complex]:
    # Offsets are exact half-integers times the pitch, so the grid is
    # symmetric about the centre bit for bit.
    lo, hi = region.bounds()
    c = region.center
    if n == 1:
        return [c]
    hx = (hi.real - lo.real) / (n - 1)
    hy = (hi.imag - lo.imag) / (n - 1)
    k = np.arange(n) - (n - 1) / 2.0
    pts = []
    for ky in k:
        for kx in k:
            z = complex(c.real + kx * hx, c.imag + ky * hy)
            if region.contains(z, closed=True):
                pts.append(z)
    return pts


def sample_grid(t: TCartesian | Discus, n1: int, n2: int) -> Iterator[Bicomplex]:
    """Deterministic tensor grid over the closure of ``t``.

    Each factor region is covered by an ``n_i x n_i`` lattice over its
    bounding box (points outside the closed region are dropped); the
    bicomplex points are all pairs, factor 1 varying slowest.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("grid sizes must be >= 1")
    if isinstance(t, Discus):
        t = t.as_tcartesian()
    pts1 = _planar_points(t.region1, n1)
    pts2 = _planar_points(t.region2, n2)
    for a in pts1:
        for b in pts2:
            yield from_idempotent((a, b))
