"""First-order current-field interaction energies.

The shift is the well average of j . A evaluated with the field-free
eigenstate.  With j in units of e c and A = B * (shape), dividing by
mu_B B = e hbar B / (2 m) leaves ``2 <j . shape> / lambda_bar`` where
lambda_bar is the reduced Compton wavelength.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    CODATA2018,
    DerivedStateParams,
    GridSpec,
    PhysicalConstants,
    Spin,
    StateIndex,
    ValidationError,
    WellGeometry,
    axis_samples,
)
from .density import current_density
from .parallel import ordered_map
from .potential import PotentialKind, VectorPotentialSpec, vector_potential
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_well


@dataclass(frozen=True)
class InteractionResult:
    shift_mu_b_units: float
    shift_ev: float
    state: StateIndex
    potential: VectorPotentialSpec
    quad: QuadratureSpec
    est_error: float


def _split_lines(geom: WellGeometry, potential: VectorPotentialSpec, quad: QuadratureSpec):
    xs, ys = [0.0], [0.0]
    sup = potential.support()
    if sup is not None and quad.split_at_patch_edges:
        xs += [sup[0], sup[1]]
        ys += [sup[2], sup[3]]
    return xs, ys


def _shift_units(params, state, geom, shape: VectorPotentialSpec, quad, consts) -> float:
    split_x, split_y = _split_lines(geom, shape, quad)

    def integrand(x, y):
        jx, jy = current_density(params, state, geom, x, y)
        ax, ay = vector_potential(shape, x, y)
        return jx * ax + jy * ay

    avg = integrate_well(integrand, geom, quad, split_x, split_y) / (4.0 * geom.Lx * geom.Ly)
    return 2.0 * avg / consts.lambda_c_reduced


def energy_shift(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    potential: VectorPotentialSpec,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    consts: PhysicalConstants = CODATA2018,
    estimate_error: bool = True,
) -> InteractionResult:
    """E^(1) in units of mu_B B (and in eV for the potential's B).

    A patch reaching outside the well is integrated over its overlap with
    the well, since the current vanishes outside.
    """
    potential = potential.resolved(geom)
    shape = potential.with_field(1.0)
    if potential.b_field == 0:
        return InteractionResult(0.0, 0.0, state, potential, quad, 0.0)
    value = _shift_units(params, state, geom, shape, quad, consts)
    est = 0.0
    if estimate_error:
        est = abs(_shift_units(params, state, geom, shape, quad.refined(), consts) - value)
    shift_ev = value * consts.mu_B_ev_per_tesla * potential.b_field
    return InteractionResult(value, shift_ev, state, potential, quad, est)


@dataclass(frozen=True)
class ZeemanResult:
    shift_up: InteractionResult
    shift_down: InteractionResult
    delta_mu_b_units: float
    delta_ev: float


def zeeman_splitting(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    b_field: float,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    potential: VectorPotentialSpec | None = None,
    consts: PhysicalConstants = CODATA2018,
) -> ZeemanResult:
    """Up-minus-down first-order shift; the uniform potential unless one is given."""
    pot = VectorPotentialSpec.uniform(b_field) if potential is None else potential.with_field(b_field)
    up = energy_shift(params, replace(state, spin=Spin.UP), geom, pot, quad, consts)
    down = energy_shift(params, replace(state, spin=Spin.DOWN), geom, pot, quad, consts)
    return ZeemanResult(
        up, down,
        up.shift_mu_b_units - down.shift_mu_b_units,
        up.shift_ev - down.shift_ev,
    )


@dataclass(frozen=True)
class ScanResult:
    """``shifts[i, j]`` is the shift with the patch centered on (a_values[j], b_values[i])."""

    a_values: np.ndarray
    b_values: np.ndarray
    shifts: np.ndarray
    half_w_x: float
    half_w_y: float


def scan_patch(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    b_field: float,
    scan_grid: GridSpec,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    a_range: tuple[float, float] | None = None,
    b_range: tuple[float, float] | None = None,
    half_w_x: float | None = None,
    half_w_y: float | None = None,
    clip: bool = False,
    workers: int | None = None,
    consts: PhysicalConstants = CODATA2018,
) -> ScanResult:
    """Shift map over patch centers, by default (a, b) in [-Lx/2, Lx/2] x [-Ly/2, Ly/2].

    Raises ValidationError if a patch would leave the well, unless ``clip``.
    """
    hx = geom.Lx / 2 if half_w_x is None else half_w_x
    hy = geom.Ly / 2 if half_w_y is None else half_w_y
    a_range = (-geom.Lx / 2, geom.Lx / 2) if a_range is None else a_range
    b_range = (-geom.Ly / 2, geom.Ly / 2) if b_range is None else b_range
    a_values = _scan_axis(a_range, scan_grid.samples_x)
    b_values = _scan_axis(b_range, scan_grid.samples_y)
    centers = [(float(a), float(b)) for b in b_values for a in a_values]
    if not clip:
        for a, b in centers:
            pot = VectorPotentialSpec(PotentialKind.PATCH, b_field, a, b, hx, hy)
            if not pot.fits_in(geom):
                raise ValidationError(
                    "patch_center", f"patch centered at ({a!r}, {b!r}) leaves the well; pass clip=True to allow"
                )

    def run(center):
        a, b = center
        pot = VectorPotentialSpec(PotentialKind.PATCH, b_field, a, b, hx, hy)
        return energy_shift(params, state, geom, pot, quad, consts, estimate_error=False).shift_mu_b_units

    values = ordered_map(run, centers, workers)
    shifts = np.array(values, dtype=float).reshape(len(b_values), len(a_values))
    return ScanResult(a_values, b_values, shifts, hx, hy)


def _scan_axis(bounds: tuple[float, float], n: int) -> np.ndarray:
    lo, hi = bounds
    if hi < lo:
        raise ValidationError("scan_range", f"empty range {bounds!r}")
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    if half == 0:
        return np.full(n, mid)
    return mid + axis_samples(half, n, True)
