"""Slices of bicomplex Julia sets: sampling, classification and output.

A slice fixes one or two of the four real coordinates of
``w = w0 + w1 i1 + w2 i2 + w3 j`` and samples the remaining ones on a
regular lattice.  For the ``j = 0`` slice the idempotent components of a
sample ``(w0, w1, w2)`` are ``w0 + (w1 - w2) i1`` and ``w0 + (w1 + w2) i1``.

Output formats:

* PPM (P6): ``P6\\n<width> <height>\\n255\\n`` then row-major RGB bytes, top
  row first.
* BCJ1 voxels: ``b"BCJ1"`` and three little-endian uint32 dimensions, then
  one byte per cell holding the :class:`BicomplexClass` ordinal, first axis
  varying fastest.
"""
from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from bcjulia import kernels
from bcjulia.dynamics import (
    BicomplexClass, IterParams, _coeff_arrays, _threads, classify_points, require_nondegenerate,
)
from bcjulia.poly import BicomplexPoly

__all__ = [
    "AXIS_NAMES", "parse_axis", "SliceSpec", "ClassGrid", "RenderOptions", "DEFAULT_PALETTE",
    "classify_slice", "slice_components", "image_from_grid", "emit_ppm", "read_ppm",
    "export_voxels", "read_voxels", "render_raymarch", "raymarch_image", "RayImage", "MISS",
]

AXIS_NAMES = ("w0", "w1", "w2", "w3")
_AXIS_ALIASES = {"w0": 0, "re": 0, "1": 0, "w1": 1, "i1": 1, "w2": 2, "i2": 2, "w3": 3, "j": 3}

VOXEL_MAGIC = b"BCJ1"

DEFAULT_PALETTE: dict[BicomplexClass, tuple[int, int, int]] = {
    BicomplexClass.J2: (235, 70, 40),
    BicomplexClass.K2_INTERIOR: (40, 90, 210),
    BicomplexClass.F2_BOUNDED: (110, 190, 120),
    BicomplexClass.F2_UNBOUNDED_MIXED: (245, 200, 70),
    BicomplexClass.F2_UNBOUNDED: (16, 16, 16),
}


def parse_axis(name: str) -> int:
    try:
        return _AXIS_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown axis {name!r}; use one of {sorted(_AXIS_ALIASES)}") from None


@dataclass(frozen=True)
class SliceSpec:
    """A 2-D or 3-D axis-aligned slice of the four real coordinates.

    ``fixed`` maps axis index to its value; the other axes are free, in
    increasing index order, with ``lo``/``hi``/``resolution`` given per free
    axis.  Samples include both window edges.
    """

    fixed: tuple[tuple[int, float], ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    resolution: tuple[int, ...]

    def __post_init__(self):
        axes = [a for a, _ in self.fixed]
        if len(set(axes)) != len(axes) or not all(0 <= a < 4 for a in axes):
            raise ValueError(f"bad fixed axes {axes}")
        n = 4 - len(axes)
        if n not in (2, 3):
            raise ValueError("a slice must leave 2 or 3 free axes")
        if not (len(self.lo) == len(self.hi) == len(self.resolution) == n):
            raise ValueError(f"window and resolution need {n} entries")
        if any(r < 2 for r in self.resolution):
            raise ValueError("resolution must be >= 2 per axis")
        if any(not h > l for l, h in zip(self.lo, self.hi)):
            raise ValueError("window must be nondegenerate")

    @classmethod
    def make(cls, fixed: Mapping[int | str, float], window: Sequence[tuple[float, float]] | tuple[float, float],
             resolution: int | Sequence[int]) -> SliceSpec:
        fx = tuple(sorted((a if isinstance(a, int) else parse_axis(a), float(v))
                          for a, v in fixed.items()))
        n = 4 - len(fx)
        if len(window) == 2 and not isinstance(window[0], (tuple, list)):
            window = [window] * n
        if isinstance(resolution, int):
            resolution = [resolution] * n
        return cls(fx, tuple(float(w[0]) for w in window), tuple(float(w[1]) for w in window),
                   tuple(int(r) for r in resolution))

    @classmethod
    def j0(cls, window=(-1.5, 1.5), resolution=65) -> SliceSpec:
        """The 3-D slice ``j = 0``."""
        return cls.make({3: 0.0}, window, resolution)

    @property
    def free_axes(self) -> tuple[int, ...]:
        fixed = {a for a, _ in self.fixed}
        return tuple(a for a in range(4) if a not in fixed)

    @property
    def ndim(self) -> int:
        return len(self.resolution)

    def pitch(self, k: int) -> float:
        return (self.hi[k] - self.lo[k]) / (self.resolution[k] - 1)

    def max_pitch(self) -> float:
        return max(self.pitch(k) for k in range(self.ndim))

    def center(self, k: int) -> float:
        return 0.5 * (self.lo[k] + self.hi[k])

    def coordinates(self, k: int) -> np.ndarray:
        # centre + half-integer multiples of the pitch: mirror-symmetric bit for bit
        n = self.resolution[k]
        return self.center(k) + (np.arange(n) - (n - 1) / 2.0) * self.pitch(k)

    def embedding(self) -> tuple[np.ndarray, np.ndarray]:
        """``(matrix, offset)`` with ``w = offset + matrix @ p`` for a sample
        ``p`` in free-axis coordinates."""
        m = np.zeros((4, self.ndim))
        for k, a in enumerate(self.free_axes):
            m[a, k] = 1.0
        off = np.zeros(4)
        for a, v in self.fixed:
            off[a] = v
        return m, off


def _components_from_reals(w0, w1, w2, w3) -> tuple[np.ndarray, np.ndarray]:
    shape = np.broadcast(w0, w1, w2, w3).shape
    a = np.empty(shape, dtype=np.complex128)
    b = np.empty(shape, dtype=np.complex128)
    a.real = w0 + w3
    a.imag = w1 - w2
    b.real = w0 - w3
    b.imag = w1 + w2
    return a, b


def slice_components(spec: SliceSpec) -> tuple[np.ndarray, np.ndarray]:
    """Idempotent components of every sample, shaped ``spec.resolution``."""
    grids = np.meshgrid(*(spec.coordinates(k) for k in range(spec.ndim)), indexing="ij")
    reals = [np.zeros(spec.resolution) for _ in range(4)]
    for k, a in enumerate(spec.free_axes):
        reals[a] = grids[k]
    for a, v in spec.fixed:
        reals[a] = np.full(spec.resolution, v)
    return _components_from_reals(*reals)


@dataclass
class ClassGrid:
    """Per-cell classes (``BicomplexClass`` ordinals) of a sampled slice,
    indexed ``[i0, i1, ...]`` along the free axes."""

    labels: np.ndarray
    de1: np.ndarray | None = None
    de2: np.ndarray | None = None
    spec: SliceSpec | None = None
    de_threshold: float | None = None

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.labels.shape)

    def counts(self) -> dict[BicomplexClass, int]:
        hist = np.bincount(self.labels.ravel(), minlength=len(BicomplexClass))
        return {c: int(hist[c]) for c in BicomplexClass}

    def in_k2(self) -> np.ndarray:
        return (self.labels == BicomplexClass.J2) | (self.labels == BicomplexClass.K2_INTERIOR)


def classify_slice(P: BicomplexPoly, spec: SliceSpec, params: IterParams = IterParams(),
                   threads: int | None = None, de_threshold: float | None = None) -> ClassGrid:
    """Classify every sample of ``spec``.

    The boundary threshold defaults to half the largest cell pitch.
    """
    thr = 0.5 * spec.max_pitch() if de_threshold is None else de_threshold
    params = replace(params, de_threshold=thr)
    a, b = slice_components(spec)
    cls = classify_points(P, a, b, params, threads)
    return ClassGrid(cls.labels, cls.de1, cls.de2, spec, thr)


def _palette_array(palette: Mapping[BicomplexClass, Sequence[int]]) -> np.ndarray:
    missing = [c.name for c in BicomplexClass if c not in palette]
    if missing:
        raise ValueError(f"palette lacks colours for {missing}")
    return np.array([palette[c] for c in BicomplexClass], dtype=np.uint8)


def image_from_grid(grid: ClassGrid, palette: Mapping[BicomplexClass, Sequence[int]] = DEFAULT_PALETTE) -> np.ndarray:
    """RGB image of a 2-D grid: first free axis left to right, second bottom to top."""
    if grid.labels.ndim != 2:
        raise ValueError("image_from_grid needs a 2-D grid")
    return _palette_array(palette)[grid.labels.T[::-1]]


def emit_ppm(image: np.ndarray, path: str | os.PathLike) -> Path:
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] == 0 or img.shape[1] == 0:
        raise ValueError(f"expected a nonempty (height, width, 3) image, got shape {img.shape}")
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape[:2]
    path = Path(path)
    try:
        with open(path, "wb") as fh:
            fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
            fh.write(img.tobytes())
    except OSError as exc:
        raise OSError(f"cannot write PPM {path}: {exc.strerror or exc}") from exc
    return path


def read_ppm(path: str | os.PathLike) -> np.ndarray:
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PPM header")
        fields.append(data[start:pos])
    if fields[0] != b"P6" or fields[3] != b"255":
        raise ValueError(f"{path}: not an 8-bit P6 file")
    w, h = int(fields[1]), int(fields[2])
    body = data[pos + 1:]
    if len(body) != w * h * 3:
        raise ValueError(f"{path}: expected {w * h * 3} pixel bytes, found {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()


def export_voxels(grid: ClassGrid, path: str | os.PathLike) -> Path:
    if grid.labels.ndim != 3:
        raise ValueError("voxel export needs a 3-D grid")
    path = Path(path)
    header = VOXEL_MAGIC + struct.pack("<III", *grid.labels.shape)
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(np.asarray(grid.labels, dtype=np.uint8).tobytes(order="F"))
    except OSError as exc:
        raise OSError(f"cannot write voxel file {path}: {exc.strerror or exc}") from exc
    return path


def read_voxels(path: str | os.PathLike) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != VOXEL_MAGIC or len(data) < 16:
        raise ValueError(f"{path}: not a BCJ1 voxel file")
    dims = struct.unpack("<III", data[4:16])
    body = np.frombuffer(data, dtype=np.uint8, offset=16)
    if body.size != dims[0] * dims[1] * dims[2]:
        raise ValueError(f"{path}: expected {dims[0] * dims[1] * dims[2]} cells, found {body.size}")
    return body.reshape(dims, order="F").copy()


@dataclass(frozen=True)
class RenderOptions:
    """Ray-march settings.  ``direction`` and ``up`` are given in the free-axis
    coordinates of the slice; ``hit_epsilon`` defaults to the pixel pitch and
    ``min_step`` to ``min_step_frac`` times the window diagonal."""

    mode: str = "ray-march"
    direction: tuple[float, float, float] = (0.0, 0.0, 1.0)
    up: tuple[float, float, float] = (1.0, 0.0, 0.0)
    palette: Mapping[BicomplexClass, tuple[int, int, int]] = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    background: tuple[int, int, int] = (0, 0, 0)
    width: int | None = None
    height: int | None = None
    safety: float = 0.5
    min_step_frac: float = 1e-4
    hit_epsilon: float | None = None

    def __post_init__(self):
        if self.mode not in ("ray-march", "voxel-scan"):
            raise ValueError(f"unknown render mode {self.mode!r}")
        _palette_array(self.palette)


def _camera_basis(direction, up):
    f = np.asarray(direction, dtype=np.float64)
    f = f / np.linalg.norm(f)
    right = np.cross(f, np.asarray(up, dtype=np.float64))
    nr = np.linalg.norm(right)
    if nr == 0:
        raise ValueError("camera up vector is parallel to the view direction")
    right = right / nr
    return f, right, np.cross(right, f)


MISS = 255


@dataclass
class RayImage:
    image: np.ndarray    # (height, width, 3) uint8
    labels: np.ndarray   # (height, width) class ordinal of the hit, MISS elsewhere
    depth: np.ndarray    # ray parameter of the hit, inf elsewhere

    def counts(self) -> dict[BicomplexClass, int]:
        hist = np.bincount(self.labels[self.labels != MISS].ravel(), minlength=len(BicomplexClass))
        return {c: int(hist[c]) for c in BicomplexClass}


def render_raymarch(P: BicomplexPoly, spec: SliceSpec, opts: RenderOptions = RenderOptions(),
                    params: IterParams = IterParams(), threads: int | None = None) -> np.ndarray:
    """Orthographic sphere-traced image of the filled-in Julia set in a 3-D slice.

    Hit pixels get their class colour scaled by a depth ramp (near is
    bright); misses get the background colour.
    """
    return raymarch_image(P, spec, opts, params, threads).image


def raymarch_image(P: BicomplexPoly, spec: SliceSpec, opts: RenderOptions = RenderOptions(),
                   params: IterParams = IterParams(), threads: int | None = None) -> RayImage:
    """Like :func:`render_raymarch` but also returns hit labels and depths."""
    if spec.ndim != 3:
        raise ValueError("ray marching needs a 3-D slice")
    p1, p2 = require_nondegenerate(P, params.tol)
    f, right, up = _camera_basis(opts.direction, opts.up)
    width = opts.width or max(spec.resolution)
    height = opts.height or max(spec.resolution)

    lo = np.array(spec.lo)
    hi = np.array(spec.hi)
    center = 0.5 * (lo + hi)
    corners = np.array([[x, y, z] for x in (lo[0], hi[0]) for y in (lo[1], hi[1])
                        for z in (lo[2], hi[2])]) - center
    u_ext = np.abs(corners @ right).max()
    v_ext = np.abs(corners @ up).max()
    depth_ext = np.abs(corners @ f).max()
    pitch = max(2 * u_ext / width, 2 * v_ext / height)

    uo = (np.arange(width) - (width - 1) / 2.0) * pitch
    vo = ((height - 1) / 2.0 - np.arange(height)) * pitch
    vv, uu = np.meshgrid(vo, uo, indexing="ij")
    back = 2.0 * depth_ext
    origins = (center[None, :] + uu.ravel()[:, None] * right[None, :]
               + vv.ravel()[:, None] * up[None, :] - back * f[None, :])

    # ray/box slab intersection
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(f != 0, 1.0 / np.where(f != 0, f, 1.0), np.inf)
        ta = (lo[None, :] - origins) * inv
        tb = (hi[None, :] - origins) * inv
    tmin = np.minimum(ta, tb)
    tmax = np.maximum(ta, tb)
    parallel = f == 0
    inside = np.all((origins[:, parallel] >= lo[parallel]) & (origins[:, parallel] <= hi[parallel]), axis=1)
    tmin[:, parallel] = -np.inf
    tmax[:, parallel] = np.inf
    t0 = np.ascontiguousarray(tmin.max(axis=1))
    t1 = np.ascontiguousarray(np.where(inside, tmax.min(axis=1), -np.inf))

    embed, offset = spec.embedding()
    c1re, c1im = _coeff_arrays(p1)
    c2re, c2im = _coeff_arrays(p2)
    hit_eps = pitch if opts.hit_epsilon is None else opts.hit_epsilon
    min_step = opts.min_step_frac * float(np.linalg.norm(hi - lo))
    n = origins.shape[0]
    hit = np.zeros(n, dtype=np.uint8)
    depth = np.zeros(n, dtype=np.float64)
    origins = np.ascontiguousarray(origins)
    embed = np.ascontiguousarray(embed)
    chunk = max(1, width)

    def run(s: int) -> None:
        e = min(s + chunk, n)
        kernels.raymarch(c1re, c1im, params.radius_for(p1), c2re, c2im, params.radius_for(p2),
                         embed, offset, origins[s:e], f, t0[s:e], t1[s:e],
                         params.max_iter, opts.safety, min_step, hit_eps, hit[s:e], depth[s:e])

    workers = _threads(threads)
    if workers == 1:
        for s in range(0, n, chunk):
            run(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, range(0, n, chunk)))

    image = np.empty((n, 3), dtype=np.uint8)
    image[:] = opts.background
    labels = np.full(n, MISS, dtype=np.uint8)
    hits = np.flatnonzero(hit)
    if hits.size:
        pts = origins[hits] + depth[hits, None] * f[None, :]
        w = offset[None, :] + pts @ embed.T
        a, b = _components_from_reals(w[:, 0], w[:, 1], w[:, 2], w[:, 3])
        # the hit test bounds each escaping component's estimate by sqrt(2) * hit_eps
        cls = classify_points(P, a, b, replace(params, de_threshold=np.sqrt(2.0) * hit_eps), threads)
        near = back - depth_ext
        ramp = np.clip((depth[hits] - near) / (2.0 * depth_ext), 0.0, 1.0)
        shade = 1.0 - 0.6 * ramp
        colours = _palette_array(opts.palette)[cls.labels].astype(np.float64)
        image[hits] = np.floor(colours * shade[:, None] + 0.5).astype(np.uint8)
        labels[hits] = cls.labels
    return RayImage(image.reshape(height, width, 3), labels.reshape(height, width),
                    depth.reshape(height, width))
