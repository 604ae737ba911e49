"""Charge, current and momentum densities of the well eigenstates.

All outputs are dimensionless: rho/e, j/(e c), G/(m_e c), v/c.  The
wavefunction is normalized so that the well-averaged rho/e equals one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import (
    CODATA2018,
    DerivedStateParams,
    GridSpec,
    PhysicalConstants,
    StateIndex,
    WellGeometry,
    grid_axes,
)
from .parallel import row_chunks, worker_count, ordered_map
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, well_average
from .spinor import DIRAC, SpinorValue, _trig, evaluate_spinor, spinor_gradient

DEFAULT_EPSILON_RHO = 1e-9


def charge_density(params: DerivedStateParams, state: StateIndex, geom: WellGeometry, x, y):
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    a = params.lower_ratio_x
    b = params.lower_ratio_y
    return params.n_squared * ((sx * sy) ** 2 + (a * cx * sy) ** 2 + (b * sx * cy) ** 2)


def current_amplitudes(params: DerivedStateParams, state: StateIndex) -> tuple[float, float]:
    """Peak values of jx and jy in units of e c (signed by spin)."""
    s = state.spin.sign
    return (s * 2.0 * params.eta_y / params.gamma, s * 2.0 * params.eta_x / params.gamma)


def current_density(params: DerivedStateParams, state: StateIndex, geom: WellGeometry, x, y):
    """(jx, jy) / (e c) in closed form."""
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    amp_x, amp_y = current_amplitudes(params, state)
    # sin(2t) = 2 sin t cos t
    jx = amp_x * sx**2 * (2.0 * sy * cy)
    jy = -amp_y * sy**2 * (2.0 * sx * cx)
    return jx, jy


def current_gradient(params: DerivedStateParams, state: StateIndex, geom: WellGeometry, x, y):
    """Analytic ((d_x jx, d_y jx), (d_x jy, d_y jy))."""
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    amp_x, amp_y = current_amplitudes(params, state)
    kx, ky = params.kx, params.ky
    s2x, c2x = 2.0 * sx * cx, cx**2 - sx**2
    s2y, c2y = 2.0 * sy * cy, cy**2 - sy**2
    djx_dx = amp_x * kx * s2x * s2y
    djx_dy = amp_x * 2.0 * ky * sx**2 * c2y
    djy_dx = -amp_y * 2.0 * kx * sy**2 * c2x
    djy_dy = -amp_y * ky * s2y * s2x
    return (djx_dx, djx_dy), (djy_dx, djy_dy)


def _bilinear(psi: np.ndarray, matrix: np.ndarray, other: np.ndarray | None = None) -> np.ndarray:
    other = psi if other is None else other
    return np.einsum("i...,ij,j...->...", psi.conj(), matrix, other)


def current_from_bilinear(spinor: SpinorValue, imag_tol: float = 1e-15):
    """(Psi^+ alpha_x Psi, Psi^+ alpha_y Psi) by direct matrix products.

    >>> s = SpinorValue(1.0 + 0j, 0j, 0j, 0.5j)
    >>> [float(v) for v in current_from_bilinear(s)]
    [0.0, 1.0]
    """
    psi = spinor.as_array()
    scale = max(1.0, float(np.max(np.sum(abs(psi) ** 2, axis=0))))
    out = []
    for alpha in (DIRAC.alpha_x, DIRAC.alpha_y):
        val = _bilinear(psi, alpha)
        if np.max(np.abs(val.imag), initial=0.0) > imag_tol * scale:
            raise ArithmeticError("Hermitian bilinear has an imaginary part")
        out.append(val.real)
    return out[0], out[1]


@dataclass(frozen=True)
class GordonTerms:
    """Spin-curl and translation parts of j, both in units of e c.

    ``curl_term + translation_term`` equals j/(e c).  The raw terms of the
    decomposition (in units of hbar / length) are these times E / (hbar c).
    """

    curl_term: tuple[np.ndarray, np.ndarray]
    translation_term: tuple[np.ndarray, np.ndarray]

    @property
    def total(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.curl_term[0] + self.translation_term[0],
                self.curl_term[1] + self.translation_term[1])


def gordon_terms(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    x,
    y,
    consts: PhysicalConstants = CODATA2018,
) -> GordonTerms:
    geom.require_inside(x, y, closed=False)
    psi = evaluate_spinor(params, state, geom, x, y, consts=consts).as_array()
    dx, dy = spinor_gradient(params, state, geom, x, y, consts=consts)
    dpx, dpy = dx.as_array(), dy.as_array()
    # In-plane curl of the spin density (0, 0, S_z): (d_y S_z, -d_x S_z).
    dsz_dx = 2.0 * _bilinear(psi, DIRAC.sigma_big_z, dpx).real
    dsz_dy = 2.0 * _bilinear(psi, DIRAC.sigma_big_z, dpy).real
    # (i hbar/2)[(grad Psi^+) Psi - Psi^+ grad Psi] = hbar Im(Psi^+ grad Psi)
    tr_x = np.einsum("i...,i...->...", psi.conj(), dpx).imag
    tr_y = np.einsum("i...,i...->...", psi.conj(), dpy).imag
    # c/E times hbar gives lambda_bar / gamma.
    scale = consts.lambda_c_reduced / params.gamma
    curl = (0.5 * scale * dsz_dy, -0.5 * scale * dsz_dx)
    trans = (scale * tr_x, scale * tr_y)
    return GordonTerms(curl, trans)


def momentum_density(params, state, geom, x, y, consts: PhysicalConstants = CODATA2018):
    """G/(m_e c): half the spin-curl term plus the full translation term."""
    g = gordon_terms(params, state, geom, x, y, consts)
    gamma = params.gamma
    return (gamma * (0.5 * g.curl_term[0] + g.translation_term[0]),
            gamma * (0.5 * g.curl_term[1] + g.translation_term[1]))


def gyromagnetic_ratio(params, state, geom, x, y, consts: PhysicalConstants = CODATA2018):
    """|spin term of j| / |spin term of G| with both in the same units.

    NaN where the spin term vanishes.
    """
    g = gordon_terms(params, state, geom, x, y, consts)
    gx, gy = momentum_density(params, state, geom, x, y, consts)
    spin_g = (gx / params.gamma - g.translation_term[0], gy / params.gamma - g.translation_term[1])
    num = np.hypot(*g.curl_term)
    den = np.hypot(*spin_g)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / den, np.nan)


@dataclass(frozen=True)
class VelocityField:
    vx: np.ndarray
    vy: np.ndarray
    defined: np.ndarray


def spin_velocity(params, state, geom, x, y, epsilon_rho: float = DEFAULT_EPSILON_RHO) -> VelocityField:
    """v = j / rho in units of c where rho/e >= epsilon_rho; zero and flagged elsewhere."""
    rho = np.asarray(charge_density(params, state, geom, x, y))
    jx, jy = current_density(params, state, geom, x, y)
    defined = rho >= epsilon_rho
    safe = np.where(defined, rho, 1.0)
    vx = np.where(defined, jx / safe, 0.0)
    vy = np.where(defined, jy / safe, 0.0)
    speed = np.hypot(vx, vy)
    if np.any(speed > 1.0 + 1e-12):
        raise ArithmeticError(f"superluminal spin velocity {float(speed.max())!r} c")
    return VelocityField(vx, vy, defined)


def spin_z_expectation(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    consts: PhysicalConstants = CODATA2018,
) -> float:
    """Well-averaged Psi^+ Sigma_z Psi over well-averaged rho/e, in units of hbar/2."""
    midx = [geom.Lx * (2 * i / state.nx - 1) for i in range(1, state.nx)]
    midy = [geom.Ly * (2 * i / state.ny - 1) for i in range(1, state.ny)]

    def sz(x, y):
        psi = evaluate_spinor(params, state, geom, x, y, consts=consts).as_array()
        return _bilinear(psi, DIRAC.sigma_big_z).real

    def rho(x, y):
        return charge_density(params, state, geom, x, y)

    return well_average(sz, geom, quad, midx, midy) / well_average(rho, geom, quad, midx, midy)


class FieldKind(enum.Enum):
    SCALAR = "scalar"
    VECTOR2 = "vector2"


@dataclass(frozen=True)
class FieldGrid:
    """Sampled field; ``values`` has shape (samples_y, samples_x[, 2]), row-major in y."""

    spec: GridSpec
    geom: WellGeometry
    kind: FieldKind
    values: np.ndarray
    label: str
    defined: np.ndarray | None = None

    def __post_init__(self) -> None:
        expect = (self.spec.samples_y, self.spec.samples_x)
        if self.kind is FieldKind.VECTOR2:
            expect = expect + (2,)
        if self.values.shape != expect:
            raise ValueError(f"values shape {self.values.shape} != {expect}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")

    def axes(self):
        return grid_axes(self.geom, self.spec)


FIELD_KINDS = ("charge", "current", "momentum", "velocity")


def _field_rows(which, params, state, geom, X, Y, epsilon_rho, consts):
    if which == "charge":
        return np.asarray(charge_density(params, state, geom, X, Y)), None
    if which == "current":
        return np.stack(current_density(params, state, geom, X, Y), axis=-1), None
    if which == "momentum":
        # Walls are excluded from the open-domain Gordon terms; G vanishes there.
        inside = geom.contains(X, Y, closed=False)
        gx = np.zeros(X.shape)
        gy = np.zeros(X.shape)
        if np.any(inside):
            mx, my = momentum_density(params, state, geom, X[inside], Y[inside], consts)
            gx[inside] = mx
            gy[inside] = my
        return np.stack([gx, gy], axis=-1), None
    if which == "velocity":
        v = spin_velocity(params, state, geom, X, Y, epsilon_rho)
        return np.stack([v.vx, v.vy], axis=-1), v.defined
    raise ValueError(f"unknown field {which!r}; expected one of {FIELD_KINDS}")


def sample_field(
    which: str,
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    spec: GridSpec,
    epsilon_rho: float = DEFAULT_EPSILON_RHO,
    workers: int | None = None,
    consts: PhysicalConstants = CODATA2018,
) -> FieldGrid:
    """Sample a named field on the grid, splitting rows across workers."""
    xs, ys = grid_axes(geom, spec)
    chunks = row_chunks(len(ys), worker_count(workers))

    def run(bounds):
        r0, r1 = bounds
        X, Y = np.meshgrid(xs, ys[r0:r1], indexing="xy")
        return _field_rows(which, params, state, geom, X, Y, epsilon_rho, consts)

    parts = ordered_map(run, chunks, workers)
    values = np.concatenate([p[0] for p in parts], axis=0)
    defined = None
    if parts[0][1] is not None:
        defined = np.concatenate([p[1] for p in parts], axis=0)
    kind = FieldKind.SCALAR if values.ndim == 2 else FieldKind.VECTOR2
    return FieldGrid(spec, geom, kind, values, which, defined)
