"""Constants, well geometry, state labels and per-state derived parameters.

Lengths are in meters and energies in joules throughout the library; the
helpers at the bottom convert to eV for reporting.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

CONSTANTS_VINTAGE = "CODATA 2018"


class ValidationError(ValueError):
    """Invalid input; ``field`` names the offending parameter."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(ValueError):
    """A point lies outside the region where a quantity is defined."""


@dataclass(frozen=True)
class PhysicalConstants:
    c: float
    hbar: float
    m_e: float
    e_charge: float
    mu_B: float
    lambda_C: float
    lambda_c_reduced: float

    @property
    def rest_energy(self) -> float:
        return self.m_e * self.c**2

    @property
    def mu_B_ev_per_tesla(self) -> float:
        return self.mu_B / self.e_charge


def codata2018() -> PhysicalConstants:
    c = 299792458.0
    h = 6.62607015e-34
    m_e = 9.1093837015e-31
    hbar = h / (2.0 * math.pi)
    return PhysicalConstants(
        c=c,
        hbar=hbar,
        m_e=m_e,
        e_charge=1.602176634e-19,
        mu_B=9.2740100783e-24,
        lambda_C=h / (m_e * c),
        lambda_c_reduced=hbar / (m_e * c),
    )


CODATA2018 = codata2018()


class Spin(enum.Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> int:
        return 1 if self is Spin.UP else -1


@dataclass(frozen=True)
class WellGeometry:
    """Infinite rectangular well occupying (-Lx, Lx) x (-Ly, Ly)."""

    Lx: float
    Ly: float

    def __post_init__(self) -> None:
        for name in ("Lx", "Ly"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(name, f"half-width must be positive, got {value!r}")

    def contains(self, x, y, closed: bool = True, rtol: float = 1e-12):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if closed:
            return (np.abs(x) <= self.Lx * (1 + rtol)) & (np.abs(y) <= self.Ly * (1 + rtol))
        return (np.abs(x) < self.Lx) & (np.abs(y) < self.Ly)

    def require_inside(self, x, y, closed: bool = True) -> None:
        inside = self.contains(x, y, closed=closed)
        if not np.all(inside):
            bad = np.argwhere(~np.atleast_1d(inside))[0]
            xs = np.broadcast_to(np.atleast_1d(x), np.atleast_1d(inside).shape)
            ys = np.broadcast_to(np.atleast_1d(y), np.atleast_1d(inside).shape)
            where = "closed" if closed else "open"
            raise DomainError(
                f"point ({xs[tuple(bad)]!r}, {ys[tuple(bad)]!r}) is outside the {where} well"
            )


@dataclass(frozen=True)
class StateIndex:
    nx: int
    ny: int
    spin: Spin = Spin.UP

    def __post_init__(self) -> None:
        for name in ("nx", "ny"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValidationError(name, f"quantum number must be an integer >= 1, got {value!r}")
        if not isinstance(self.spin, Spin):
            raise ValidationError("spin", f"expected Spin, got {self.spin!r}")

    def flipped(self) -> StateIndex:
        return StateIndex(self.nx, self.ny, Spin.DOWN if self.spin is Spin.UP else Spin.UP)


@dataclass(frozen=True)
class DerivedStateParams:
    kx: float
    ky: float
    eta_x: float
    eta_y: float
    eta: float
    energy: float
    n_squared: float
    p_z: float = 0.0
    # E - m c^2, evaluated without cancellation.
    kinetic: float = 0.0

    @property
    def gamma(self) -> float:
        """sqrt(1 + eta^2), the energy in units of the rest energy."""
        return math.sqrt(1.0 + self.eta**2)

    @property
    def lower_ratio_x(self) -> float:
        return self.eta_x / (1.0 + self.gamma)

    @property
    def lower_ratio_y(self) -> float:
        return self.eta_y / (1.0 + self.gamma)

    @property
    def normalization(self) -> float:
        return math.sqrt(self.n_squared)


def normalization_squared(eta: float) -> float:
    """N^2 making the well-averaged charge density equal to e."""
    gamma = math.sqrt(1.0 + eta * eta)
    return 2.0 * (1.0 + gamma) / gamma


def derive_params(
    state: StateIndex, geom: WellGeometry, consts: PhysicalConstants = CODATA2018
) -> DerivedStateParams:
    kx = math.pi * state.nx / (2.0 * geom.Lx)
    ky = math.pi * state.ny / (2.0 * geom.Ly)
    eta_x = consts.lambda_c_reduced * kx
    eta_y = consts.lambda_c_reduced * ky
    eta = math.hypot(eta_x, eta_y)
    gamma = math.sqrt(1.0 + eta * eta)
    rest = consts.rest_energy
    return DerivedStateParams(
        kx=kx,
        ky=ky,
        eta_x=eta_x,
        eta_y=eta_y,
        eta=eta,
        energy=rest * gamma,
        n_squared=normalization_squared(eta),
        p_z=0.0,
        kinetic=rest * eta * eta / (1.0 + gamma),
    )


def eta_closed_form(state: StateIndex, geom: WellGeometry, consts: PhysicalConstants = CODATA2018) -> float:
    """Geometric factor written with the non-reduced Compton wavelength h/(m c)."""
    return math.hypot(
        state.nx * consts.lambda_C / (4.0 * geom.Lx),
        state.ny * consts.lambda_C / (4.0 * geom.Ly),
    )


@dataclass(frozen=True)
class GridSpec:
    samples_x: int
    samples_y: int
    includes_boundary: bool = True

    def __post_init__(self) -> None:
        for name in ("samples_x", "samples_y"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 2:
                raise ValidationError(name, f"need at least 2 samples, got {value!r}")


class Point(NamedTuple):
    x: float
    y: float


def axis_samples(half_width: float, n: int, includes_boundary: bool) -> np.ndarray:
    if includes_boundary:
        return np.linspace(-half_width, half_width, n)
    step = 2.0 * half_width / n
    return -half_width + step * (np.arange(n) + 0.5)


def grid_axes(geom: WellGeometry, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    return (
        axis_samples(geom.Lx, spec.samples_x, spec.includes_boundary),
        axis_samples(geom.Ly, spec.samples_y, spec.includes_boundary),
    )


def grid_mesh(geom: WellGeometry, spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate arrays of shape (samples_y, samples_x); rows run along x."""
    xs, ys = grid_axes(geom, spec)
    return np.meshgrid(xs, ys, indexing="xy")


def grid_points(geom: WellGeometry, spec: GridSpec) -> list[Point]:
    """Row-major points: y is the slow index, x the fast one."""
    xs, ys = grid_axes(geom, spec)
    return [Point(float(x), float(y)) for y in ys for x in xs]


def joules_to_ev(value: float, consts: PhysicalConstants = CODATA2018) -> float:
    return value / consts.e_charge
