"""Run configuration: defaults < JSON config file < command-line flags."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

from .core import GridSpec, Spin, StateIndex, ValidationError, WellGeometry
from .potential import PotentialKind, VectorPotentialSpec
from .quadrature import QuadratureRule, QuadratureSpec

FORMATS = ("csv", "json", "svg")

DEFAULTS: dict = {
    "state": {"nx": 2, "ny": 2, "spin": "up"},
    "well": {"Lx": 10e-9, "Ly": 10e-9},
    "grid": {"samples_x": 129, "samples_y": 129, "includes_boundary": True},
    "quad": {"rule": "gauss-legendre", "order_or_panels": 64, "split_at_patch_edges": True},
    "b_field": 1.0,
    "potential": {"variant": "uniform", "center_a": 0.0, "center_b": 0.0, "half_w_x": None, "half_w_y": None},
    "scan_grid": {"samples_x": 3, "samples_y": 3, "includes_boundary": True},
    "scan_range": None,
    "clip": False,
    "epsilon_rho": 1e-9,
    "output_dir": "wavespin-out",
    "formats": ["csv", "json", "svg"],
}


@dataclass(frozen=True)
class RunConfig:
    state: StateIndex
    well: WellGeometry
    grid: GridSpec
    quad: QuadratureSpec
    b_field: float
    potential: VectorPotentialSpec
    output_dir: Path
    formats: tuple[str, ...]
    scan_grid: GridSpec
    scan_range: tuple[float, float, float, float] | None
    clip: bool
    epsilon_rho: float
    raw: dict

    def to_dict(self) -> dict:
        return copy.deepcopy(self.raw)


def deep_update(base: dict, other: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in other.items():
        if key not in DEFAULTS:
            raise ValidationError(key, "unknown configuration key")
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            for sub in value:
                if sub not in DEFAULTS[key]:
                    raise ValidationError(f"{key}.{sub}", "unknown configuration key")
            out[key] = {**out[key], **value}
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_file(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError("config", f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValidationError("config", "top level must be a JSON object")
    return doc


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            if isinstance(value, float) and value.is_integer():
                return int(value)
        except AttributeError:
            pass
        raise ValidationError(name, f"expected an integer, got {value!r}")
    return value


def _float(value, name: str) -> float:
    if isinstance(value, bool):
        raise ValidationError(name, f"expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(name, f"expected a number, got {value!r}") from exc


def _grid(d: dict, name: str) -> GridSpec:
    return GridSpec(_int(d["samples_x"], f"{name}.samples_x"), _int(d["samples_y"], f"{name}.samples_y"),
                    bool(d.get("includes_boundary", True)))


def build(raw: dict) -> RunConfig:
    s = raw["state"]
    try:
        spin = Spin(s.get("spin", "up"))
    except ValueError as exc:
        raise ValidationError("spin", f"expected 'up' or 'down', got {s.get('spin')!r}") from exc
    state = StateIndex(_int(s["nx"], "nx"), _int(s["ny"], "ny"), spin)
    well = WellGeometry(_float(raw["well"]["Lx"], "Lx"), _float(raw["well"]["Ly"], "Ly"))
    q = raw["quad"]
    try:
        rule = QuadratureRule(q["rule"])
    except ValueError as exc:
        raise ValidationError("quad.rule", f"unknown rule {q['rule']!r}") from exc
    quad = QuadratureSpec(rule, _int(q["order_or_panels"], "quad"), bool(q["split_at_patch_edges"]))
    b_field = _float(raw["b_field"], "b_field")
    p = raw["potential"]
    try:
        variant = PotentialKind(p["variant"])
    except ValueError as exc:
        raise ValidationError("potential", f"expected 'uniform' or 'patch', got {p['variant']!r}") from exc
    pot = VectorPotentialSpec(
        variant, b_field, _float(p["center_a"], "center_a"), _float(p["center_b"], "center_b"),
        None if p["half_w_x"] is None else _float(p["half_w_x"], "half_w_x"),
        None if p["half_w_y"] is None else _float(p["half_w_y"], "half_w_y"),
    ).resolved(well)
    formats = tuple(raw["formats"])
    if not formats:
        raise ValidationError("formats", "at least one output format is required")
    for f in formats:
        if f not in FORMATS:
            raise ValidationError("formats", f"unknown format {f!r}; expected a subset of {FORMATS}")
    scan_range = raw["scan_range"]
    if scan_range is not None:
        if len(scan_range) != 4:
            raise ValidationError("scan_range", "expected AMIN,AMAX,BMIN,BMAX")
        scan_range = tuple(_float(v, "scan_range") for v in scan_range)
    eps = _float(raw["epsilon_rho"], "epsilon_rho")
    if not eps > 0:
        raise ValidationError("epsilon_rho", f"must be positive, got {eps!r}")
    raw = copy.deepcopy(raw)
    if variant is PotentialKind.PATCH:
        raw["potential"]["half_w_x"] = pot.half_w_x
        raw["potential"]["half_w_y"] = pot.half_w_y
    return RunConfig(
        state=state, well=well, grid=_grid(raw["grid"], "grid"), quad=quad, b_field=b_field,
        potential=pot, output_dir=Path(raw["output_dir"]), formats=formats,
        scan_grid=_grid(raw["scan_grid"], "scan_grid"), scan_range=scan_range,
        clip=bool(raw["clip"]), epsilon_rho=eps, raw=raw,
    )
