"""Tensor-product quadrature over the well, split into sub-rectangles."""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .core import Point, ValidationError, WellGeometry


class QuadratureRule(enum.Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    SIMPSON = "simpson"


class NumericalError(ArithmeticError):
    def __init__(self, message: str, point: Point) -> None:
        super().__init__(f"{message} at ({point.x!r}, {point.y!r})")
        self.point = point


@dataclass(frozen=True)
class QuadratureSpec:
    """``order_or_panels`` is points per axis (Gauss-Legendre) or panels per axis (Simpson)."""

    rule: QuadratureRule = QuadratureRule.GAUSS_LEGENDRE
    order_or_panels: int = 64
    split_at_patch_edges: bool = True

    def __post_init__(self) -> None:
        n = self.order_or_panels
        if self.rule is QuadratureRule.GAUSS_LEGENDRE and n < 8:
            raise ValidationError("order_or_panels", f"Gauss-Legendre order must be >= 8, got {n}")
        if self.rule is QuadratureRule.SIMPSON and (n < 64 or n % 2):
            raise ValidationError("order_or_panels", f"Simpson needs an even panel count >= 64, got {n}")

    def refined(self) -> QuadratureSpec:
        return QuadratureSpec(self.rule, 2 * self.order_or_panels, self.split_at_patch_edges)


DEFAULT_QUADRATURE = QuadratureSpec()


@functools.lru_cache(maxsize=32)
def _reference_rule(rule: QuadratureRule, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if rule is QuadratureRule.GAUSS_LEGENDRE:
        nodes, weights = np.polynomial.legendre.leggauss(n)
    else:
        nodes = np.linspace(-1.0, 1.0, n + 1)
        weights = np.ones(n + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        weights *= (2.0 / n) / 3.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def breakpoints(half_width: float, splits: Iterable[float]) -> list[float]:
    """Sorted interval ends on [-half_width, half_width]; splits outside are dropped."""
    inner = sorted({float(s) for s in splits if -half_width < s < half_width})
    return [-half_width, *inner, half_width]


def integrate_rectangle(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x0: float, x1: float, y0: float, y1: float,
    quad: QuadratureSpec,
) -> float:
    nodes, weights = _reference_rule(quad.rule, quad.order_or_panels)
    hx = 0.5 * (x1 - x0)
    hy = 0.5 * (y1 - y0)
    xs = 0.5 * (x0 + x1) + hx * nodes
    ys = 0.5 * (y0 + y1) + hy * nodes
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    vals = np.asarray(f(X, Y), dtype=float)
    vals = np.broadcast_to(vals, X.shape)
    if not np.all(np.isfinite(vals)):
        iy, ix = np.argwhere(~np.isfinite(vals))[0]
        raise NumericalError("non-finite integrand", Point(float(X[iy, ix]), float(Y[iy, ix])))
    # y rows then x columns: fixed accumulation order.
    return float(hx * hy * (weights @ vals @ weights))


def integrate_well(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    geom: WellGeometry,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    split_lines_x: Iterable[float] = (),
    split_lines_y: Iterable[float] = (),
) -> float:
    """Integral of the vectorized ``f(x, y)`` over the well.

    Sub-rectangles are visited bottom-to-top, left-to-right and summed in
    that order so the result does not depend on how callers parallelize.
    """
    bx = breakpoints(geom.Lx, split_lines_x)
    by = breakpoints(geom.Ly, split_lines_y)
    total = 0.0
    for y0, y1 in zip(by[:-1], by[1:]):
        for x0, x1 in zip(bx[:-1], bx[1:]):
            total += integrate_rectangle(f, x0, x1, y0, y1, quad)
    return total


def well_average(f, geom: WellGeometry, quad: QuadratureSpec = DEFAULT_QUADRATURE,
                 split_lines_x: Iterable[float] = (), split_lines_y: Iterable[float] = ()) -> float:
    return integrate_well(f, geom, quad, split_lines_x, split_lines_y) / (4.0 * geom.Lx * geom.Ly)
