"""Invariant suite behind ``wavespin check``.

Each check returns a measured residual and the tolerance it is held to.
``sabotage`` injects a known fault so the suite can be shown to fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import (
    CODATA2018,
    DerivedStateParams,
    GridSpec,
    StateIndex,
    WellGeometry,
    derive_params,
    grid_mesh,
)
from .density import (
    charge_density,
    current_density,
    current_from_bilinear,
    gordon_terms,
    spin_velocity,
    spin_z_expectation,
)
from .interaction import energy_shift
from .potential import PotentialKind, VectorPotentialSpec, curl_check
from .quadrature import well_average
from .spinor import dirac_residual, evaluate_spinor
from .topology import divergence_audit, edge_profile, find_vortices

SABOTAGE_MODES = ("n-squared",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    state: str
    passed: bool
    measured: float
    tolerance: float

    def as_dict(self) -> dict:
        return {"name": self.name, "state": self.state, "passed": self.passed,
                "measured": self.measured, "tolerance": self.tolerance}


def _params(state, geom, sabotage) -> DerivedStateParams:
    p = derive_params(state, geom)
    if sabotage == "n-squared":
        p = replace(p, n_squared=0.5 * p.n_squared)
    return p


def _rel(a, b, scale) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


def _state_checks(state: StateIndex, geom: WellGeometry, sabotage: str | None):
    p = _params(state, geom, sabotage)
    gamma = p.gamma
    jscale = 2.0 * p.eta / gamma
    X, Y = grid_mesh(geom, GridSpec(65, 65))
    rng = np.random.default_rng(20240101)
    rx = rng.uniform(-geom.Lx, geom.Lx, 1000) * (1 - 1e-9)
    ry = rng.uniform(-geom.Ly, geom.Ly, 1000) * (1 - 1e-9)
    midx = [geom.Lx * (2 * i / state.nx - 1) for i in range(1, state.nx)]
    midy = [geom.Ly * (2 * i / state.ny - 1) for i in range(1, state.ny)]

    def energy_relation():
        # (E/mc^2)^2 - 1 factored as (E - mc^2)(E + mc^2)/(mc^2)^2 to avoid cancellation.
        rest = CODATA2018.rest_energy
        lhs = p.kinetic * (p.energy + rest) / rest**2
        return abs(lhs - p.eta**2) / p.eta**2

    def normalization():
        avg = well_average(lambda x, y: charge_density(p, state, geom, x, y), geom, split_lines_x=midx,
                           split_lines_y=midy)
        return abs(avg - 1.0)

    def residual():
        return dirac_residual(state, geom, GridSpec(17, 17), min(geom.Lx, geom.Ly) / 2048).max_rel

    def walls():
        t = np.linspace(-1, 1, 33)
        xs = np.concatenate([t * geom.Lx, t * geom.Lx, -geom.Lx + 0 * t, geom.Lx + 0 * t])
        ys = np.concatenate([-geom.Ly + 0 * t, geom.Ly + 0 * t, t * geom.Ly, t * geom.Ly])
        s = evaluate_spinor(p, state, geom, xs, ys)
        upper = s.psi1 if state.spin.sign > 0 else s.psi2
        return float(np.max(np.abs(upper)))

    def bilinear():
        jx, jy = current_density(p, state, geom, X, Y)
        bx, by = current_from_bilinear(evaluate_spinor(p, state, geom, X, Y))
        return max(_rel(jx, bx, jscale), _rel(jy, by, jscale))

    def gordon():
        g = gordon_terms(p, state, geom, rx, ry)
        jx, jy = current_density(p, state, geom, rx, ry)
        tx, ty = g.total
        return max(_rel(jx, tx, jscale), _rel(jy, ty, jscale))

    def divergence():
        return divergence_audit(p, state, geom, GridSpec(65, 65)) / (jscale / min(geom.Lx, geom.Ly))

    def speed():
        v = spin_velocity(p, state, geom, X, Y)
        return float(np.max(np.hypot(v.vx, v.vy)))

    def spin_z():
        return abs(spin_z_expectation(p, state, geom) - state.spin.sign / gamma)

    def uniform_shift():
        r = energy_shift(p, state, geom, VectorPotentialSpec.uniform(1.0), estimate_error=False)
        return abs(r.shift_mu_b_units - state.spin.sign / gamma) * gamma

    def antisymmetry():
        pot = VectorPotentialSpec.patch(geom, -geom.Lx / 2, geom.Ly / 2)
        up = energy_shift(p, state, geom, pot, estimate_error=False).shift_mu_b_units
        down = energy_shift(p, state.flipped(), geom, pot, estimate_error=False).shift_mu_b_units
        return abs(up + down) / max(abs(up), 1e-300)

    def corner_sum():
        uni = energy_shift(p, state, geom, VectorPotentialSpec.uniform(1.0), estimate_error=False).shift_mu_b_units
        total = sum(
            energy_shift(p, state, geom, VectorPotentialSpec.patch(geom, sa * geom.Lx / 2, sb * geom.Ly / 2),
                         estimate_error=False).shift_mu_b_units
            for sa in (-1, 1) for sb in (-1, 1)
        )
        return abs(total - uni) / abs(uni)

    def vortex_count():
        r = find_vortices(p, state, geom, GridSpec(16 * state.nx, 16 * state.ny))
        windings = {v.winding for v in r.vortices}
        ok = r.count == state.nx * state.ny and windings == {state.spin.sign}
        return 0.0 if ok else 1.0

    def edge():
        return float(edge_profile(p, state, geom, min(1e-9, min(geom.Lx, geom.Ly) / 8)).sign_changes())

    checks: list[tuple[str, Callable[[], float], float]] = [
        ("energy relation (E/mc^2)^2 - 1 = eta^2", energy_relation, 1e-12),
        ("normalization <rho>/e = 1", normalization, 1e-10),
        ("Dirac eigen-residual", residual, 1e-6),
        ("upper component vanishes on walls", walls, 1e-14),
        ("closed-form j = bilinear j", bilinear, 1e-12),
        ("Gordon terms sum to j", gordon, 1e-12),
        ("div j = 0 (scale-relative)", divergence, 1e-14),
        ("|v| <= c", speed, 1.0),
        ("<Sigma_z> = +-1/gamma", spin_z, 1e-12),
        ("uniform shift = +-1/gamma", uniform_shift, 1e-10),
        ("shift(down) = -shift(up)", antisymmetry, 1e-12),
        ("vortex count nx*ny, co-rotating", vortex_count, 0.0),
        ("edge current keeps one sign", edge, 0.0),
    ]
    if state.nx == 2 and state.ny == 2:
        checks.append(("four corner patches sum to uniform", corner_sum, 1e-9))
    return checks


def run_checks(states, geom: WellGeometry, sabotage: str | None = None) -> list[CheckResult]:
    if sabotage is not None and sabotage not in SABOTAGE_MODES:
        raise ValueError(f"unknown sabotage mode {sabotage!r}")
    results = []
    for label, fn, tol in _global_checks():
        measured = float(fn())
        results.append(CheckResult(label, "-", measured <= tol, measured, tol))
    for state in states:
        tag = f"({state.nx},{state.ny},{state.spin.value})"
        for label, fn, tol in _state_checks(state, geom, sabotage):
            measured = float(fn())
            results.append(CheckResult(label, tag, bool(math.isfinite(measured) and measured <= tol), measured, tol))
    return results


def _global_checks():
    c = CODATA2018

    def mu_b():
        return abs(c.mu_B / (c.e_charge * c.hbar / (2 * c.m_e)) - 1)

    def compton():
        return abs(c.lambda_C / (2 * math.pi * c.lambda_c_reduced) - 1)

    def curl_uniform():
        return curl_check(VectorPotentialSpec.uniform(1.0), GridSpec(9, 9), WellGeometry(10e-9, 10e-9))

    def curl_patch():
        geom = WellGeometry(10e-9, 10e-9)
        spec = VectorPotentialSpec.patch(geom, -5e-9, 5e-9)
        assert spec.variant is PotentialKind.PATCH
        return curl_check(spec, GridSpec(9, 9))

    return [
        ("mu_B = e hbar / 2m", mu_b, 1e-9),
        ("lambda_C = 2 pi lambda_bar", compton, 1e-12),
        ("curl A = B (uniform)", curl_uniform, 1e-10),
        ("curl A = B (patch)", curl_patch, 1e-10),
    ]
