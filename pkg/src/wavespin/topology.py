"""Vortex structure of the current field.

A stagnation point's ``winding`` is its sense of rotation: +1 when the
current circulates counterclockwise around it, -1 clockwise.  Saddles
(Poincare index -1) and degenerate zeros on interior nodal lines, where
j vanishes along a whole line, are reported in diagnostics only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DerivedStateParams,
    GridSpec,
    Point,
    StateIndex,
    ValidationError,
    WellGeometry,
    grid_axes,
)
from .density import current_amplitudes, current_density, current_gradient

LOOP_POINTS = 16


@dataclass(frozen=True)
class Vortex:
    center: Point
    winding: int
    circulation: float


@dataclass(frozen=True)
class VortexReport:
    vortices: list[Vortex]
    count: int
    saddles: list[Point] = field(default_factory=list)
    degenerate: int = 0


def _bisect(fn, lo: float, hi: float, f_lo: float, f_hi: float) -> float | None:
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine(params, state, geom, x0, x1, y0, y1, rounds: int = 4):
    """Alternate 1D bisections: jy = 0 along x, then jx = 0 along y."""
    amp_x, amp_y = current_amplitudes(params, state)
    kx, ky, lx, ly = params.kx, params.ky, geom.Lx, geom.Ly

    def jx_at(x, y):
        return amp_x * math.sin(kx * (x + lx)) ** 2 * math.sin(2.0 * ky * (y + ly))

    def jy_at(x, y):
        return -amp_y * math.sin(ky * (y + ly)) ** 2 * math.sin(2.0 * kx * (x + lx))

    x, y = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    for _ in range(rounds):
        nx = _bisect(lambda s: jy_at(s, y), x0, x1, jy_at(x0, y), jy_at(x1, y))
        if nx is None:
            return None
        x = nx
        ny = _bisect(lambda s: jx_at(x, s), y0, y1, jx_at(x, y0), jx_at(x, y1))
        if ny is None:
            return None
        y = ny
    return x, y


def loop_index(params, state, geom, center: Point, radius: float, n: int = LOOP_POINTS) -> tuple[int, float]:
    """(Poincare index, discrete circulation) on an n-gon around ``center``.

    Vertices are offset by half a step so none falls on an axis-aligned
    nodal line through the center.
    """
    theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n
    px = center.x + radius * np.cos(theta)
    py = center.y + radius * np.sin(theta)
    jx, jy = current_density(params, state, geom, px, py)
    ang = np.arctan2(jy, jx)
    d = np.diff(np.append(ang, ang[0]))
    d = (d + math.pi) % (2.0 * math.pi) - math.pi
    index = int(round(d.sum() / (2.0 * math.pi)))
    circ = float(np.sum(-jx * np.sin(theta) + jy * np.cos(theta)) * radius * 2.0 * math.pi / n)
    return index, circ


def find_vortices(params: DerivedStateParams, state: StateIndex, geom: WellGeometry, grid: GridSpec) -> VortexReport:
    if grid.samples_x < 16 * state.nx:
        raise ValidationError("samples_x", f"need >= {16 * state.nx} samples for nx={state.nx}")
    if grid.samples_y < 16 * state.ny:
        raise ValidationError("samples_y", f"need >= {16 * state.ny} samples for ny={state.ny}")
    xs, ys = grid_axes(geom, grid)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    jx, jy = current_density(params, state, geom, X, Y)

    def straddles(f):
        corners = np.stack([f[:-1, :-1], f[:-1, 1:], f[1:, :-1], f[1:, 1:]])
        return (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)

    cand = np.argwhere(straddles(jx) & straddles(jy))
    dx = float(np.min(np.diff(xs)))
    dy = float(np.min(np.diff(ys)))
    margin = 0.25 * min(dx, dy)
    scale = max(abs(params.kx), abs(params.ky)) ** 2 * (2 * params.eta / params.gamma) ** 2

    found: list[Point] = []
    for iy, ix in cand:
        root = _refine(params, state, geom, xs[ix], xs[ix + 1], ys[iy], ys[iy + 1])
        if root is None:
            continue
        x, y = root
        if abs(x) > geom.Lx - margin or abs(y) > geom.Ly - margin:
            continue
        if any(abs(x - p.x) < margin and abs(y - p.y) < margin for p in found):
            continue
        found.append(Point(float(x), float(y)))

    vortices: list[Vortex] = []
    saddles: list[Point] = []
    degenerate = 0
    radius = 0.25 * min(dx, dy)
    for p in found:
        (a, b), (c, d) = current_gradient(params, state, geom, p.x, p.y)
        det = float(a * d - b * c)
        if abs(det) <= 1e-8 * scale:
            degenerate += 1
            continue
        index, circ = loop_index(params, state, geom, p, radius)
        if index == 1:
            vortices.append(Vortex(p, 1 if circ > 0 else -1, circulation(params, state, geom, p, radius, 64)))
        elif index == -1:
            saddles.append(p)
        else:
            degenerate += 1
    vortices.sort(key=lambda v: (v.center.y, v.center.x))
    saddles.sort(key=lambda p: (p.y, p.x))
    return VortexReport(vortices, len(vortices), saddles, degenerate)


def circulation(params, state, geom: WellGeometry, loop_center: Point, loop_radius: float,
                n_segments: int = 64) -> float:
    """Counterclockwise line integral of j/(e c) around a circle, in meters."""
    if n_segments < 64:
        raise ValidationError("n_segments", f"need >= 64 segments, got {n_segments}")
    if not loop_radius > 0:
        raise ValidationError("loop_radius", f"must be positive, got {loop_radius!r}")
    cx, cy = loop_center
    if abs(cx) + loop_radius >= geom.Lx or abs(cy) + loop_radius >= geom.Ly:
        raise ValidationError("loop_radius", "loop leaves the well")
    theta = 2.0 * math.pi * np.arange(n_segments) / n_segments
    jx, jy = current_density(params, state, geom, cx + loop_radius * np.cos(theta),
                             cy + loop_radius * np.sin(theta))
    tangential = -jx * np.sin(theta) + jy * np.cos(theta)
    return float(np.sum(tangential) * loop_radius * 2.0 * math.pi / n_segments)


@dataclass(frozen=True)
class EdgeProfile:
    arclength: np.ndarray
    tangential: np.ndarray
    points: np.ndarray

    def sign_changes(self) -> int:
        """Strict sign flips along the closed loop; touching zero does not count."""
        s = np.sign(self.tangential)
        s = s[s != 0]
        if s.size == 0:
            return 0
        return int(np.count_nonzero(s != np.roll(s, 1)))


def edge_profile(params, state, geom: WellGeometry, inset: float, n_samples: int = 400) -> EdgeProfile:
    """Wall-parallel current on the loop inset from the walls, counterclockwise
    from the bottom-left corner."""
    limit = min(geom.Lx, geom.Ly) / 4
    if not (0 < inset < limit):
        raise ValidationError("inset", f"must lie in (0, {limit!r}), got {inset!r}")
    if n_samples < 4:
        raise ValidationError("n_samples", f"need >= 4 samples, got {n_samples}")
    wx = 2.0 * (geom.Lx - inset)
    wy = 2.0 * (geom.Ly - inset)
    x0, y0 = -geom.Lx + inset, -geom.Ly + inset
    perimeter = 2.0 * (wx + wy)
    s = perimeter * np.arange(n_samples) / n_samples
    px = np.empty(n_samples)
    py = np.empty(n_samples)
    tx = np.empty(n_samples)
    ty = np.empty(n_samples)
    legs = [
        (0.0, wx, (x0, y0), (1.0, 0.0)),
        (wx, wx + wy, (x0 + wx, y0), (0.0, 1.0)),
        (wx + wy, 2 * wx + wy, (x0 + wx, y0 + wy), (-1.0, 0.0)),
        (2 * wx + wy, perimeter, (x0, y0 + wy), (0.0, -1.0)),
    ]
    for lo, hi, (ox, oy), (ux, uy) in legs:
        m = (s >= lo) & (s < hi)
        t = s[m] - lo
        px[m] = ox + ux * t
        py[m] = oy + uy * t
        tx[m] = ux
        ty[m] = uy
    jx, jy = current_density(params, state, geom, px, py)
    return EdgeProfile(s, jx * tx + jy * ty, np.stack([px, py], axis=-1))


def divergence_audit(params, state, geom: WellGeometry, grid: GridSpec, flip_jy: bool = False) -> float:
    """Max |d_x jx + d_y jy| over interior grid points, in units of e c per meter.

    ``flip_jy`` negates jy before differentiating (negative control).
    """
    xs, ys = grid_axes(geom, grid)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    inside = geom.contains(X, Y, closed=False)
    (djx_dx, _), (_, djy_dy) = current_gradient(params, state, geom, X[inside], Y[inside])
    if flip_jy:
        djy_dy = -djy_dy
    return float(np.max(np.abs(djx_dx + djy_dy), initial=0.0))
