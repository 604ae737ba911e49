"""Four-spinor eigenstates of the 2D infinite Dirac well.

Spin up has upper two-spinor ``sin(kx(x+Lx)) sin(ky(y+Ly)) (1, 0)``; its
lower partner follows from the coupling

    (E + m c^2) mu_B = -i hbar c (sigma_x d/dx + sigma_y d/dy) mu_A.

For spin down the upper two-spinor is ``S (0, 1)`` with ``S`` the same
sine product.  Using ``sigma_x (0,1) = (1,0)`` and ``sigma_y (0,1) = (-i,0)``:

    (sigma_x d/dx + sigma_y d/dy) S (0,1) = (kx Cx Sy - i ky Sx Cy, 0)
    mu_B = -i hbar c / (E + m c^2) * (...) = (-i a Cx Sy - b Sx Cy, 0)

with ``a = eta_x / (1 + gamma)``, ``b = eta_y / (1 + gamma)``.  So spin
down fills slots 2 and 3, and its current is the negative of spin up's.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CODATA2018,
    DerivedStateParams,
    PhysicalConstants,
    Point,
    Spin,
    StateIndex,
    ValidationError,
    WellGeometry,
    axis_samples,
    derive_params,
)

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)


@dataclass(frozen=True)
class DiracMatrices:
    """Dirac representation."""

    pauli_x: np.ndarray
    pauli_y: np.ndarray
    pauli_z: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray
    alpha_z: np.ndarray
    gamma0: np.ndarray
    sigma_big_x: np.ndarray
    sigma_big_y: np.ndarray
    sigma_big_z: np.ndarray


def _build_dirac() -> DiracMatrices:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)

    def alpha(s):
        return np.block([[_Z2, s], [s, _Z2]])

    def big(s):
        return np.block([[s, _Z2], [_Z2, s]])

    mats = DiracMatrices(
        pauli_x=sx,
        pauli_y=sy,
        pauli_z=sz,
        alpha_x=alpha(sx),
        alpha_y=alpha(sy),
        alpha_z=alpha(sz),
        gamma0=np.block([[_I2, _Z2], [_Z2, -_I2]]),
        sigma_big_x=big(sx),
        sigma_big_y=big(sy),
        sigma_big_z=big(sz),
    )
    for m in (mats.pauli_x, mats.pauli_y, mats.pauli_z, mats.alpha_x, mats.alpha_y,
              mats.alpha_z, mats.gamma0, mats.sigma_big_x, mats.sigma_big_y, mats.sigma_big_z):
        m.setflags(write=False)
    return mats


DIRAC = _build_dirac()


@dataclass(frozen=True)
class SpinorValue:
    """Four complex components; each may be a scalar or an array over points."""

    psi1: np.ndarray
    psi2: np.ndarray
    psi3: np.ndarray
    psi4: np.ndarray

    def as_array(self) -> np.ndarray:
        """Stack to shape ``(4, *point_shape)``."""
        return np.stack(np.broadcast_arrays(self.psi1, self.psi2, self.psi3, self.psi4))

    @classmethod
    def from_array(cls, arr) -> SpinorValue:
        arr = np.asarray(arr, dtype=complex)
        return cls(arr[0], arr[1], arr[2], arr[3])

    def norm_squared(self) -> np.ndarray:
        return (abs(self.psi1) ** 2 + abs(self.psi2) ** 2
                + abs(self.psi3) ** 2 + abs(self.psi4) ** 2)


def _trig(params: DerivedStateParams, geom: WellGeometry, x, y):
    tx = params.kx * (np.asarray(x, dtype=float) + geom.Lx)
    ty = params.ky * (np.asarray(y, dtype=float) + geom.Ly)
    return np.sin(tx), np.cos(tx), np.sin(ty), np.cos(ty)


def _phase(params: DerivedStateParams, t: float, consts: PhysicalConstants) -> complex:
    if t == 0:
        return 1.0 + 0.0j
    return np.exp(-1j * params.energy * t / consts.hbar)


def evaluate_spinor(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    x,
    y,
    t: float = 0.0,
    consts: PhysicalConstants = CODATA2018,
) -> SpinorValue:
    """Psi at the given point(s) and time.

    Raises DomainError for points outside the closed well.
    """
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    n = params.normalization * _phase(params, t, consts)
    a = params.lower_ratio_x
    b = params.lower_ratio_y
    upper = n * (sx * sy) + 0j
    zero = np.zeros_like(upper)
    if state.spin is Spin.UP:
        lower = n * (-1j * a * cx * sy + b * sx * cy)
        return SpinorValue(upper, zero, zero, lower)
    lower = n * (-1j * a * cx * sy - b * sx * cy)
    return SpinorValue(zero, upper, lower, zero)


def spinor_gradient(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    x,
    y,
    t: float = 0.0,
    consts: PhysicalConstants = CODATA2018,
) -> tuple[SpinorValue, SpinorValue]:
    """Closed-form (d/dx Psi, d/dy Psi)."""
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    kx, ky = params.kx, params.ky
    n = params.normalization * _phase(params, t, consts)
    a = params.lower_ratio_x
    b = params.lower_ratio_y
    up_dx = n * kx * cx * sy + 0j
    up_dy = n * ky * sx * cy + 0j
    zero = np.zeros_like(up_dx)
    if state.spin is Spin.UP:
        lo_dx = n * kx * (1j * a * sx * sy + b * cx * cy)
        lo_dy = n * ky * (-1j * a * cx * cy - b * sx * sy)
        return (SpinorValue(up_dx, zero, zero, lo_dx), SpinorValue(up_dy, zero, zero, lo_dy))
    lo_dx = n * kx * (1j * a * sx * sy - b * cx * cy)
    lo_dy = n * ky * (-1j * a * cx * cy + b * sx * sy)
    return (SpinorValue(zero, up_dx, lo_dx, zero), SpinorValue(zero, up_dy, lo_dy, zero))


def two_spinor_pair(
    params: DerivedStateParams,
    state: StateIndex,
    geom: WellGeometry,
    x,
    y,
    consts: PhysicalConstants = CODATA2018,
) -> tuple[np.ndarray, np.ndarray]:
    """(mu_A, mu_B), each of shape ``(2, *point_shape)``, at t = 0.

    mu_B is generated from mu_A by the first-order coupling rather than
    copied from the closed form, so comparing the packed result with
    :func:`evaluate_spinor` checks the lower components.
    """
    geom.require_inside(x, y)
    sx, cx, sy, cy = _trig(params, geom, x, y)
    n = params.normalization
    chi = np.array([1, 0], dtype=complex) if state.spin is Spin.UP else np.array([0, 1], dtype=complex)
    scalar = n * sx * sy
    d_dx = n * params.kx * cx * sy
    d_dy = n * params.ky * sx * cy
    mu_a = np.multiply.outer(chi, scalar)
    # hbar c / (E + m c^2) = lambda_bar / (1 + gamma)
    coupling = -1j * consts.lambda_c_reduced / (1.0 + params.gamma)
    sig_x_chi = DIRAC.pauli_x @ chi
    sig_y_chi = DIRAC.pauli_y @ chi
    mu_b = coupling * (np.multiply.outer(sig_x_chi, d_dx) + np.multiply.outer(sig_y_chi, d_dy))
    return mu_a, mu_b


def apply_dirac_operator(psi: np.ndarray, dpsi_dx: np.ndarray, dpsi_dy: np.ndarray,
                         consts: PhysicalConstants = CODATA2018) -> np.ndarray:
    """c alpha.(-i hbar grad) Psi + gamma0 m c^2 Psi, with P_z = 0."""
    hc = consts.hbar * consts.c
    kinetic = -1j * hc * (np.einsum("ij,j...->i...", DIRAC.alpha_x, dpsi_dx)
                          + np.einsum("ij,j...->i...", DIRAC.alpha_y, dpsi_dy))
    return kinetic + consts.rest_energy * np.einsum("ij,j...->i...", DIRAC.gamma0, psi)


@dataclass(frozen=True)
class ResidualReport:
    max_rel: float
    at: Point


def _fd4(f, x, y, h: float, axis: int) -> np.ndarray:
    if axis == 0:
        vals = [f(x + s * h, y) for s in (-2, -1, 1, 2)]
    else:
        vals = [f(x, y + s * h) for s in (-2, -1, 1, 2)]
    return (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h)


def dirac_residual(
    state: StateIndex,
    geom: WellGeometry,
    spec,
    fd_step: float,
    consts: PhysicalConstants = CODATA2018,
    energy: float | None = None,
    node_floor: float = 1e-6,
) -> ResidualReport:
    """Max of ||(H - E) Psi|| / (E ||Psi||) over an interior grid.

    Derivatives use a fourth-order central stencil.  Sample points fill
    the rectangle inset by ``4 * fd_step`` from the walls.  ``energy``
    overrides the eigenvalue (negative-control hook).  At exact nodes the
    local norm is floored at ``node_floor`` times its grid maximum.
    """
    limit = min(geom.Lx, geom.Ly) / 256.0
    if not (fd_step > 0 and fd_step <= limit):
        raise ValidationError("fd_step", f"must lie in (0, {limit:.6g}] m, got {fd_step!r}")
    params = derive_params(state, geom, consts)
    e_val = params.energy if energy is None else float(energy)
    margin = 4.0 * fd_step
    xs = axis_samples(geom.Lx - margin, spec.samples_x, True)
    ys = axis_samples(geom.Ly - margin, spec.samples_y, True)
    X, Y = np.meshgrid(xs, ys, indexing="xy")

    # The stencil reaches 2 h beyond the sample; margin keeps it in the well.
    def psi_at(px, py):
        return evaluate_spinor(params, state, geom, px, py, consts=consts).as_array()

    psi = psi_at(X, Y)
    dpx = _fd4(psi_at, X, Y, fd_step, 0)
    dpy = _fd4(psi_at, X, Y, fd_step, 1)
    residual = apply_dirac_operator(psi, dpx, dpy, consts) - e_val * psi
    r_norm = np.sqrt(np.sum(abs(residual) ** 2, axis=0))
    p_norm = np.sqrt(np.sum(abs(psi) ** 2, axis=0))
    p_norm = np.maximum(p_norm, node_floor * p_norm.max())
    rel = r_norm / (e_val * p_norm)
    idx = np.unravel_index(int(np.argmax(rel)), rel.shape)
    return ResidualReport(max_rel=float(rel[idx]), at=Point(float(X[idx]), float(Y[idx])))
