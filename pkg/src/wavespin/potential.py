"""Vector potentials of a uniform field B along z.

``Uniform`` is the symmetric gauge over the whole plane.  ``Patch`` is the
same field confined to a closed rectangle centered on (a, b), with the
potential dropped to zero outside; it is discontinuous at the patch edge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import GridSpec, ValidationError, WellGeometry, axis_samples


class PotentialKind(enum.Enum):
    UNIFORM = "uniform"
    PATCH = "patch"


@dataclass(frozen=True)
class VectorPotentialSpec:
    variant: PotentialKind = PotentialKind.UNIFORM
    b_field: float = 1.0
    center_a: float = 0.0
    center_b: float = 0.0
    half_w_x: float | None = None
    half_w_y: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.b_field):
            raise ValidationError("b_field", f"must be finite, got {self.b_field!r}")
        for name in ("half_w_x", "half_w_y"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0):
                raise ValidationError(name, f"patch half-width must be positive, got {value!r}")

    @classmethod
    def uniform(cls, b_field: float = 1.0) -> VectorPotentialSpec:
        return cls(PotentialKind.UNIFORM, b_field)

    @classmethod
    def patch(cls, geom: WellGeometry, a: float, b: float, b_field: float = 1.0,
              half_w_x: float | None = None, half_w_y: float | None = None) -> VectorPotentialSpec:
        """Patch centered on (a, b); half-widths default to a quarter-area square."""
        return cls(PotentialKind.PATCH, b_field, a, b,
                   geom.Lx / 2 if half_w_x is None else half_w_x,
                   geom.Ly / 2 if half_w_y is None else half_w_y)

    def with_field(self, b_field: float) -> VectorPotentialSpec:
        return VectorPotentialSpec(self.variant, b_field, self.center_a, self.center_b,
                                   self.half_w_x, self.half_w_y)

    def resolved(self, geom: WellGeometry) -> VectorPotentialSpec:
        """Fill in default half-widths from the well."""
        if self.variant is PotentialKind.UNIFORM:
            return self
        return VectorPotentialSpec(
            self.variant, self.b_field, self.center_a, self.center_b,
            geom.Lx / 2 if self.half_w_x is None else self.half_w_x,
            geom.Ly / 2 if self.half_w_y is None else self.half_w_y,
        )

    def support(self) -> tuple[float, float, float, float] | None:
        """(x0, x1, y0, y1) of the closed patch, or None for the uniform gauge."""
        if self.variant is PotentialKind.UNIFORM:
            return None
        if self.half_w_x is None or self.half_w_y is None:
            raise ValidationError("half_w_x", "patch half-widths unresolved; call resolved(geom)")
        return (self.center_a - self.half_w_x, self.center_a + self.half_w_x,
                self.center_b - self.half_w_y, self.center_b + self.half_w_y)

    def fits_in(self, geom: WellGeometry, rtol: float = 1e-12) -> bool:
        sup = self.resolved(geom).support()
        if sup is None:
            return True
        x0, x1, y0, y1 = sup
        tx, ty = geom.Lx * (1 + rtol), geom.Ly * (1 + rtol)
        return -tx <= x0 and x1 <= tx and -ty <= y0 and y1 <= ty


def vector_potential(spec: VectorPotentialSpec, x, y):
    """(Ax, Ay) in T m."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half_b = 0.5 * spec.b_field
    if spec.variant is PotentialKind.UNIFORM:
        return -half_b * y, half_b * x
    x0, x1, y0, y1 = spec.support()
    inside = (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
    ax = np.where(inside, -half_b * (y - spec.center_b), 0.0)
    ay = np.where(inside, half_b * (x - spec.center_a), 0.0)
    return ax, ay


def curl_check(spec: VectorPotentialSpec, region_samples: GridSpec, geom: WellGeometry | None = None,
               step: float | None = None) -> float:
    """Max |(curl A)_z - B| by central differences inside the support (T).

    The uniform gauge is probed on the well when ``geom`` is given, else on
    a unit square.  Samples sit at least two steps inside the support.
    """
    if spec.variant is PotentialKind.UNIFORM:
        if geom is not None:
            cx, cy, hx, hy = 0.0, 0.0, geom.Lx, geom.Ly
        else:
            cx, cy, hx, hy = 0.0, 0.0, 1.0, 1.0
    else:
        x0, x1, y0, y1 = spec.support()
        cx, cy, hx, hy = 0.5 * (x0 + x1), 0.5 * (y0 + y1), 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    h = step if step is not None else 1e-3 * min(hx, hy)
    xs = cx + axis_samples(hx - 2 * h, region_samples.samples_x, True)
    ys = cy + axis_samples(hy - 2 * h, region_samples.samples_y, True)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    _, ay_p = vector_potential(spec, X + h, Y)
    _, ay_m = vector_potential(spec, X - h, Y)
    ax_p, _ = vector_potential(spec, X, Y + h)
    ax_m, _ = vector_potential(spec, X, Y - h)
    curl = (ay_p - ay_m) / (2 * h) - (ax_p - ax_m) / (2 * h)
    return float(np.max(np.abs(curl - spec.b_field)))
