"""Self-contained SVG heatmaps and quiver plots.

Output depends only on the input arrays: coordinates are rounded to two
decimals and colors come from a fixed 256-entry ramp.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .emit import _write_bytes

CANVAS = 800
LEGEND = 110
MARGIN = 20

# Polynomial fit of the viridis ramp (dark blue -> green -> yellow).
_VIRIDIS = np.array([
    [0.2777273272234177, 0.005407344544966578, 0.3340998053353061],
    [0.1050930431085774, 1.404613529898575, 1.384590162594685],
    [-0.3308618287255563, 0.214847559468213, 0.09509516302823659],
    [-4.634230498983486, -5.799100973351585, -19.33244095627987],
    [6.228269936347081, 14.17993336680509, 56.69055260068105],
    [4.776384997670288, -13.74514537774601, -65.35303263337234],
    [-5.435455855934631, 4.645852612178535, 26.3124352495832],
])


def _build_ramp() -> list[str]:
    t = np.linspace(0.0, 1.0, 256)
    powers = np.stack([t**i for i in range(_VIRIDIS.shape[0])], axis=1)
    rgb = np.clip(powers @ _VIRIDIS, 0.0, 1.0)
    return ["#%02x%02x%02x" % tuple(int(round(255 * c)) for c in row) for row in rgb]


RAMP = _build_ramp()


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _color_index(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if hi <= lo:
        return np.zeros(values.shape, dtype=int)
    return np.clip(((values - lo) / (hi - lo) * 255.0).round().astype(int), 0, 255)


def _header(title: str) -> list[str]:
    w = CANVAS + LEGEND
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{CANVAS}" viewBox="0 0 {w} {CANVAS}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{w}" height="{CANVAS}" fill="#ffffff"/>',
    ]


def _legend(lo: float, hi: float, label: str) -> list[str]:
    x = CANVAS + 20
    top, height = MARGIN + 20, CANVAS - 2 * MARGIN - 40
    out = []
    step = height / 256.0
    for i in range(256):
        y = top + (255 - i) * step
        out.append(f'<rect x="{x}" y="{_f(y)}" width="20" height="{_f(step + 0.5)}" fill="{RAMP[i]}"/>')
    out.append(f'<text x="{x}" y="{top - 6}" font-size="11" font-family="monospace">{hi:.3e}</text>')
    out.append(f'<text x="{x}" y="{top + height + 14}" font-size="11" font-family="monospace">{lo:.3e}</text>')
    out.append(f'<text x="{x}" y="{MARGIN}" font-size="11" font-family="monospace">{label}</text>')
    return out


class _Frame:
    """Maps physical (x, y) to canvas pixels; y increases upward."""

    def __init__(self, x0: float, x1: float, y0: float, y1: float) -> None:
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.size = CANVAS - 2 * MARGIN

    def px(self, x):
        return MARGIN + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * self.size

    def py(self, y):
        return MARGIN + (self.y1 - np.asarray(y)) / (self.y1 - self.y0) * self.size


def _cells(frame: _Frame, xs: np.ndarray, ys: np.ndarray, values: np.ndarray) -> list[str]:
    lo, hi = float(values.min()), float(values.max())
    idx = _color_index(values, lo, hi)
    # Cell edges halfway between samples, clamped to the frame.
    ex = np.concatenate([[xs[0]], 0.5 * (xs[1:] + xs[:-1]), [xs[-1]]]) if len(xs) > 1 else np.array([frame.x0, frame.x1])
    ey = np.concatenate([[ys[0]], 0.5 * (ys[1:] + ys[:-1]), [ys[-1]]]) if len(ys) > 1 else np.array([frame.y0, frame.y1])
    pxe = frame.px(ex)
    pye = frame.py(ey)
    out = []
    for iy in range(len(ys)):
        top, bottom = pye[iy + 1], pye[iy]
        for ix in range(len(xs)):
            left, right = pxe[ix], pxe[ix + 1]
            out.append(
                f'<rect x="{_f(left)}" y="{_f(top)}" width="{_f(right - left + 0.25)}" '
                f'height="{_f(bottom - top + 0.25)}" fill="{RAMP[idx[iy, ix]]}"/>'
            )
    return out


def heatmap_svg(path: Path, xs: np.ndarray, ys: np.ndarray, values: np.ndarray, title: str,
                label: str = "") -> Path:
    """``values`` has shape (len(ys), len(xs))."""
    frame = _Frame(float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1]))
    parts = _header(title)
    parts += _cells(frame, xs, ys, values)
    parts += _legend(float(values.min()), float(values.max()), label)
    parts.append("</svg>")
    _write_bytes(Path(path), ("\n".join(parts) + "\n").encode("utf-8"))
    return Path(path)


def _subsample(n: int, limit: int) -> np.ndarray:
    if n <= limit:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, limit).round().astype(int))


def _arrows(frame: _Frame, X, Y, U, V, color: str, max_len_px: float) -> list[str]:
    mag = np.hypot(U, V)
    top = float(mag.max()) if mag.size else 0.0
    out = []
    if top == 0:
        return out
    for x, y, u, v, m in zip(X.ravel(), Y.ravel(), U.ravel(), V.ravel(), mag.ravel()):
        if m == 0:
            continue
        length = max_len_px * m / top
        # Canvas y points down.
        dx, dy = u / m, -v / m
        x0, y0 = float(frame.px(x)), float(frame.py(y))
        x1, y1 = x0 + length * dx, y0 + length * dy
        head = 0.3 * length
        hx1 = x1 - head * (dx * 0.866 - dy * 0.5)
        hy1 = y1 - head * (dy * 0.866 + dx * 0.5)
        hx2 = x1 - head * (dx * 0.866 + dy * 0.5)
        hy2 = y1 - head * (dy * 0.866 - dx * 0.5)
        out.append(f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" stroke="{color}" stroke-width="1.2"/>')
        out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(hx1)}" y2="{_f(hy1)}" stroke="{color}" stroke-width="1.2"/>')
        out.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(hx2)}" y2="{_f(hy2)}" stroke="{color}" stroke-width="1.2"/>')
    return out


def quiver_svg(path: Path, xs: np.ndarray, ys: np.ndarray, vectors: np.ndarray, title: str,
               label: str = "", max_arrows: int = 33, overlay=None) -> Path:
    """Magnitude heatmap under at most ``max_arrows`` x ``max_arrows`` arrows.

    ``overlay`` is an optional ``(support, fn)`` pair: ``support`` is the
    (x0, x1, y0, y1) rectangle outlined in blue and ``fn(X, Y)`` returns the
    vector field drawn in blue on the same arrow lattice.
    """
    frame = _Frame(float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1]))
    mag = np.hypot(vectors[..., 0], vectors[..., 1])
    parts = _header(title)
    parts += _cells(frame, xs, ys, mag)
    ix = _subsample(len(xs), max_arrows)
    iy = _subsample(len(ys), max_arrows)
    X, Y = np.meshgrid(xs[ix], ys[iy], indexing="xy")
    U = vectors[np.ix_(iy, ix)][..., 0]
    V = vectors[np.ix_(iy, ix)][..., 1]
    spacing = frame.size / max(len(ix), len(iy))
    parts += _arrows(frame, X, Y, U, V, "#d62728", 0.9 * spacing)
    if overlay is not None:
        (x0, x1, y0, y1), fn = overlay
        left, right = float(frame.px(max(x0, frame.x0))), float(frame.px(min(x1, frame.x1)))
        top, bottom = float(frame.py(min(y1, frame.y1))), float(frame.py(max(y0, frame.y0)))
        parts.append(f'<rect x="{_f(left)}" y="{_f(top)}" width="{_f(right - left)}" height="{_f(bottom - top)}" '
                     'fill="none" stroke="#1f4fff" stroke-width="2"/>')
        AU, AV = fn(X, Y)
        parts += _arrows(frame, X, Y, np.asarray(AU), np.asarray(AV), "#1f4fff", 0.9 * spacing)
    parts += _legend(float(mag.min()), float(mag.max()), label)
    parts.append("</svg>")
    _write_bytes(Path(path), ("\n".join(parts) + "\n").encode("utf-8"))
    return Path(path)
