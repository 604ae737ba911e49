from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import make
from wavespin.core import GridSpec, Point, ValidationError, WellGeometry
from wavespin.density import current_density, current_gradient
from wavespin.topology import circulation, divergence_audit, edge_profile, find_vortices, loop_index


def _grid(nx, ny):
    return GridSpec(16 * nx, 16 * ny)


def test_ground_state_single_vortex():
    p, s, g = make(1, 1)
    r = find_vortices(p, s, g, _grid(1, 1))
    assert r.count == 1 == len(r.vortices)
    c = r.vortices[0].center
    assert abs(c.x) < 1e-12 * g.Lx and abs(c.y) < 1e-12 * g.Ly
    assert r.vortices[0].winding == 1 and r.vortices[0].circulation > 0


def test_22_four_vortices():
    p, s, g = make(2, 2)
    r = find_vortices(p, s, g, _grid(2, 2))
    assert r.count == 4
    centers = [(round(v.center.x * 1e9, 9), round(v.center.y * 1e9, 9)) for v in r.vortices]
    # sorted by y then x
    assert centers == [(-5, -5), (5, -5), (-5, 5), (5, 5)]
    assert {v.winding for v in r.vortices} == {1}


def test_32_six_vortices():
    p, s, g = make(3, 2)
    assert find_vortices(p, s, g, _grid(3, 2)).count == 6


@pytest.mark.parametrize("nx", range(1, 6))
@pytest.mark.parametrize("ny", range(1, 6))
def test_count_law_and_corotation(nx, ny):
    p, s, g = make(nx, ny)
    up = find_vortices(p, s, g, _grid(nx, ny))
    down = find_vortices(p, s.flipped(), g, _grid(nx, ny))
    assert up.count == nx * ny
    assert {v.winding for v in up.vortices} == {1}
    assert down.count == nx * ny
    assert {v.winding for v in down.vortices} == {-1}
    assert [v.center for v in up.vortices] == [v.center for v in down.vortices]
    for v in up.vortices:
        assert abs(v.center.x) < g.Lx and abs(v.center.y) < g.Ly


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_centers_on_density_peaks(n):
    p, s, g = make(n, n)
    r = find_vortices(p, s, g, _grid(n, n))
    peaks = sorted(
        ((g.Lx * ((2 * i + 1) / n - 1), g.Ly * ((2 * j + 1) / n - 1)) for j in range(n) for i in range(n)),
        key=lambda t: (t[1], t[0]),
    )
    for v, (px, py) in zip(r.vortices, peaks):
        assert abs(v.center.x - px) < 1e-12 and abs(v.center.y - py) < 1e-12


def test_rect_well_vortices():
    p, s, g = make(3, 2, geom=WellGeometry(50e-9, 20e-9))
    r = find_vortices(p, s, g, _grid(3, 2))
    assert r.count == 6 and {v.winding for v in r.vortices} == {1}


def test_nodal_line_zeros_go_to_diagnostics():
    # j vanishes along whole interior nodal lines; those zeros are degenerate
    # (zero Jacobian) and are reported only as a diagnostic count.
    p, s, g = make(3, 3)
    r = find_vortices(p, s, g, _grid(3, 3))
    assert r.count == 9
    assert r.degenerate > 0
    assert r.saddles == []
    jx, jy = current_density(p, s, g, -g.Lx / 3, np.linspace(-0.9, 0.9, 7) * g.Ly)
    assert np.max(np.abs(jx)) < 1e-18 and np.max(np.abs(jy)) < 1e-18


def test_coarse_grid_rejected():
    p, s, g = make(3, 2)
    with pytest.raises(ValidationError) as err:
        find_vortices(p, s, g, GridSpec(47, 32))
    assert err.value.field == "samples_x"


def test_loop_index_signs():
    p, s, g = make(2, 2)
    assert loop_index(p, s, g, Point(-5e-9, -5e-9), 1e-9)[0] == 1
    assert loop_index(p, s.flipped(), g, Point(-5e-9, -5e-9), 1e-9)[0] == 1


# --- circulation -------------------------------------------------------------------

def test_four_equal_circulations():
    p, s, g = make(2, 2)
    vals = [circulation(p, s, g, Point(sx * 5e-9, sy * 5e-9), 2e-9, 64) for sx in (-1, 1) for sy in (-1, 1)]
    assert all(v > 0 for v in vals)
    assert max(vals) - min(vals) <= 1e-10 * abs(vals[0])


def test_center_loop_counterflows():
    p, s, g = make(2, 2)
    vortex = circulation(p, s, g, Point(-5e-9, -5e-9), 2e-9, 64)
    middle = circulation(p, s, g, Point(0.0, 0.0), 2e-9, 64)
    assert middle < 0 < vortex


def test_circulation_against_stokes():
    # circulation = integral of (curl j)_z over the disk; check by polar quadrature
    p, s, g = make(2, 3)
    c = Point(1e-9, -2e-9)
    r = 1.5e-9
    got = circulation(p, s, g, c, r, 256)
    rr, tt = np.meshgrid((np.arange(200) + 0.5) / 200 * r, (np.arange(256) + 0.5) / 256 * 2 * np.pi)
    (dxx, dxy), (dyx, dyy) = current_gradient(p, s, g, c.x + rr * np.cos(tt), c.y + rr * np.sin(tt))
    curl = dyx - dxy
    ref = np.sum(curl * rr) * (r / 200) * (2 * np.pi / 256)
    assert got == pytest.approx(ref, rel=1e-4)


def test_circulation_vanishes_quadratically():
    # Gamma(r) -> pi r^2 (curl j)(c), so Gamma / r^2 settles as r is halved
    p, s, g = make(2, 2)
    c = Point(-3e-9, 1e-9)
    (_, djx_dy), (djy_dx, _) = current_gradient(p, s, g, c.x, c.y)
    omega = float(djy_dx - djx_dy)
    ratios = [circulation(p, s, g, c, r) / (math.pi * r * r * omega) for r in (1e-9, 5e-10, 2.5e-10)]
    assert all(abs(1 - b) < abs(1 - a) for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, abs=1e-2)


def test_circulation_validation():
    p, s, g = make(1, 1)
    with pytest.raises(ValidationError):
        circulation(p, s, g, Point(8e-9, 0.0), 3e-9)
    with pytest.raises(ValidationError):
        circulation(p, s, g, Point(0.0, 0.0), 1e-9, n_segments=32)
    with pytest.raises(ValidationError):
        circulation(p, s, g, Point(0.0, 0.0), 0.0)


# --- edge current --------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_edge_single_sign(n):
    p, s, g = make(n, n)
    prof = edge_profile(p, s, g, 1e-9)
    assert prof.sign_changes() == 0
    assert np.all(prof.tangential >= 0)


def test_edge_profile_geometry():
    p, s, g = make(2, 2)
    prof = edge_profile(p, s, g, 1e-9, 400)
    assert prof.points[0, 0] == pytest.approx(-9e-9, rel=1e-14)
    assert prof.points[0, 1] == pytest.approx(-9e-9, rel=1e-14)
    assert prof.arclength[-1] < 4 * 18e-9
    # counterclockwise: first leg heads in +x
    assert prof.points[1, 0] > prof.points[0, 0] and prof.points[1, 1] == prof.points[0, 1]


def test_edge_decays_toward_wall():
    p, s, g = make(2, 2)
    peaks = [np.max(np.abs(edge_profile(p, s, g, d).tangential)) for d in (2e-9, 1e-9, 5e-10, 2.5e-10)]
    assert all(a > b for a, b in zip(peaks, peaks[1:]))
    # the wall-parallel component falls off linearly in the distance to the wall
    assert peaks[-1] / peaks[-2] == pytest.approx(0.5, rel=0.05)


def test_edge_spin_down_reverses():
    p, s, g = make(2, 2)
    up = edge_profile(p, s, g, 1e-9)
    down = edge_profile(p, s.flipped(), g, 1e-9)
    assert np.array_equal(down.tangential, -up.tangential)


@pytest.mark.parametrize("inset", [0.0, -1e-9, 2.5e-9, 3e-9])
def test_edge_validation(inset):
    p, s, g = make(1, 1)
    with pytest.raises(ValidationError):
        edge_profile(p, s, g, inset)


# --- divergence audit -------------------------------------------------------------------

@pytest.mark.parametrize("nx, ny", [(2, 2), (5, 3), (1, 4)])
def test_divergence_audit(nx, ny):
    p, s, g = make(nx, ny)
    div = divergence_audit(p, s, g, GridSpec(65, 65))
    jmax = 2 * p.eta / p.gamma
    assert div < 1e-14 * jmax / min(g.Lx, g.Ly)


def test_divergence_negative_control():
    p, s, g = make(2, 2)
    jmax = 2 * p.eta / p.gamma
    bad = divergence_audit(p, s, g, GridSpec(65, 65), flip_jy=True)
    assert bad > 1e-2 * jmax / g.Lx
