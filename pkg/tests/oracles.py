"""Independent reference implementations used by the tests.

Everything here is written straight from the closed-form wavefunction and
current, with its own constants and its own matrices, and integrates with
scipy rather than the package's quadrature.  Nothing is imported from
``wavespin`` so that agreement is evidence, not tautology.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

# CODATA 2018, typed in independently of wavespin.core.
C = 299792458.0
H = 6.62607015e-34
HBAR = H / (2 * math.pi)
M_E = 9.1093837015e-31
E_CHARGE = 1.602176634e-19
LAMBDA_C = H / (M_E * C)
LAMBDA_BAR = HBAR / (M_E * C)
REST_EV = M_E * C**2 / E_CHARGE

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)
ALPHA_X = np.block([[Z2, SX], [SX, Z2]])
ALPHA_Y = np.block([[Z2, SY], [SY, Z2]])
BETA = np.diag([1, 1, -1, -1]).astype(complex)
SIGMA_Z = np.block([[SZ, Z2], [Z2, SZ]])


def eta_parts(nx, ny, lx, ly):
    """(eta_x, eta_y, eta, gamma) via the lambda_C / (4 L) closed form."""
    ex = nx * LAMBDA_C / (4 * lx)
    ey = ny * LAMBDA_C / (4 * ly)
    eta = math.hypot(ex, ey)
    return ex, ey, eta, math.sqrt(1 + eta * eta)


def kinetic_nonrel_ev(nx, ny, lx, ly):
    kx = math.pi * nx / (2 * lx)
    ky = math.pi * ny / (2 * ly)
    return HBAR**2 * (kx**2 + ky**2) / (2 * M_E) / E_CHARGE


def spinor(nx, ny, lx, ly, x, y, up=True):
    """Psi as a (4, ...) complex array with the well-average normalization."""
    ex, ey, eta, g = eta_parts(nx, ny, lx, ly)
    n = math.sqrt(2 * (1 + g) / g)
    kx = math.pi * nx / (2 * lx)
    ky = math.pi * ny / (2 * ly)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx, cx = np.sin(kx * (x + lx)), np.cos(kx * (x + lx))
    sy, cy = np.sin(ky * (y + ly)), np.cos(ky * (y + ly))
    a, b = ex / (1 + g), ey / (1 + g)
    out = np.zeros((4,) + x.shape, dtype=complex)
    if up:
        out[0] = n * sx * sy
        out[3] = n * (-1j * a * cx * sy + b * sx * cy)
    else:
        out[1] = n * sx * sy
        out[2] = n * (-1j * a * cx * sy - b * sx * cy)
    return out


def bilinear(psi, m, phi=None):
    phi = psi if phi is None else phi
    return np.einsum("i...,ij,j...->...", psi.conj(), m, phi)


def current_matrix(nx, ny, lx, ly, x, y, up=True):
    """j/(e c) from Psi^+ alpha Psi by explicit matrix products."""
    psi = spinor(nx, ny, lx, ly, x, y, up)
    return bilinear(psi, ALPHA_X).real, bilinear(psi, ALPHA_Y).real


def current_closed(nx, ny, lx, ly, x, y, up=True):
    """Closed-form current as scalars (for scipy integrands)."""
    ex, ey, _, g = eta_parts(nx, ny, lx, ly)
    kx = math.pi * nx / (2 * lx)
    ky = math.pi * ny / (2 * ly)
    s = 1.0 if up else -1.0
    jx = s * 2 * ey / g * math.sin(kx * (x + lx)) ** 2 * math.sin(2 * ky * (y + ly))
    jy = -s * 2 * ex / g * math.sin(ky * (y + ly)) ** 2 * math.sin(2 * kx * (x + lx))
    return jx, jy


def _quad(f, lo, hi, points):
    """Integral of f over [lo, hi], computed on [0, 1] with f scaled to O(1)."""
    width = hi - lo
    fscale = max(abs(f(t)) for t in np.linspace(lo, hi, 65)) or 1.0
    pts = [(p - lo) / width for p in points if lo < p < hi]
    val, _ = integrate.quad(lambda t: f(lo + t * width) / fscale, 0.0, 1.0, points=pts or None,
                            epsabs=1e-14, epsrel=1e-12, limit=400)
    return val * width * fscale


def patch_shift(nx, ny, lx, ly, a, b, hx, hy, up=True):
    """E1/(mu_B B) for the patch potential from products of 1D scipy integrals.

    j.A/B = (1/2)[jx (b - y) + jy (x - a)] and each current component is a
    product of an x factor and a y factor, so the 2D integral separates.
    """
    ex, ey, _, g = eta_parts(nx, ny, lx, ly)
    kx = math.pi * nx / (2 * lx)
    ky = math.pi * ny / (2 * ly)
    s = 1.0 if up else -1.0
    x0, x1 = max(a - hx, -lx), min(a + hx, lx)
    y0, y1 = max(b - hy, -ly), min(b + hy, ly)
    nodes_x = [lx * (2 * i / (2 * nx) - 1) for i in range(1, 2 * nx)]
    nodes_y = [ly * (2 * i / (2 * ny) - 1) for i in range(1, 2 * ny)]
    ix_sin2 = _quad(lambda x: math.sin(kx * (x + lx)) ** 2, x0, x1, nodes_x)
    iy_by = _quad(lambda y: (b - y) * math.sin(2 * ky * (y + ly)), y0, y1, nodes_y)
    iy_sin2 = _quad(lambda y: math.sin(ky * (y + ly)) ** 2, y0, y1, nodes_y)
    ix_xa = _quad(lambda x: (x - a) * math.sin(2 * kx * (x + lx)), x0, x1, nodes_x)
    integral = 0.5 * s * (2 * ey / g * ix_sin2 * iy_by - 2 * ex / g * iy_sin2 * ix_xa)
    return 2 * integral / (4 * lx * ly) / LAMBDA_BAR


def patch_shift_dblquad(nx, ny, lx, ly, a, b, hx, hy, up=True):
    """Same quantity by adaptive 2D quadrature of the pointwise integrand."""
    x0, x1 = max(a - hx, -lx), min(a + hx, lx)
    y0, y1 = max(b - hy, -ly), min(b + hy, ly)

    def f(y, x):
        jx, jy = current_closed(nx, ny, lx, ly, x, y, up)
        return 0.5 * (jx * (b - y) + jy * (x - a))

    # Scale to unit square for sane absolute tolerances.
    def g(v, u):
        return f(y0 + v * (y1 - y0), x0 + u * (x1 - x0))

    val, _ = integrate.dblquad(g, 0, 1, 0, 1, epsabs=1e-15, epsrel=1e-13)
    integral = val * (x1 - x0) * (y1 - y0)
    return 2 * integral / (4 * lx * ly) / LAMBDA_BAR


def spin_z_closed(nx, ny, lx, ly):
    """<Sigma_z> = (1 - t)/(1 + t) with t = (a^2 + b^2), from the averages of
    sin^2 and cos^2 (each 1/2) over full half-periods."""
    ex, ey, _, g = eta_parts(nx, ny, lx, ly)
    t = (ex**2 + ey**2) / (1 + g) ** 2
    return (1 - t) / (1 + t)
