"""``wavespin`` command line.

Exit codes: 0 success, 1 check failure, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .checks import SABOTAGE_MODES, run_checks
from .config import DEFAULTS, RunConfig, build, deep_update, load_file
from .core import CONSTANTS_VINTAGE, CODATA2018, StateIndex, ValidationError, derive_params, eta_closed_form, joules_to_ev
from .density import FIELD_KINDS, FieldKind, sample_field
from .emit import OutputError, jsonable, write_field_csv, write_json, write_manifest, write_rows
from .interaction import scan_patch, zeeman_splitting
from .potential import PotentialKind, vector_potential
from .svg import heatmap_svg, quiver_svg

EXIT_OK, EXIT_CHECK, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3


def _pair(kind):
    def parse(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    return parse


def _quad(text: str):
    try:
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer order, got {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--state", type=_pair(int), metavar="NX,NY")
    p.add_argument("--spin", choices=["up", "down"])
    p.add_argument("--well", type=_pair(float), metavar="LX,LY", help="half-widths in meters")
    p.add_argument("--grid", type=_pair(int), metavar="NX,NY")
    p.add_argument("--B", dest="b_field", type=float, metavar="TESLA")
    p.add_argument("--potential", choices=["uniform", "patch"])
    p.add_argument("--patch-center", type=_pair(float), metavar="A,B")
    p.add_argument("--patch-half", type=_pair(float), metavar="W,H")
    p.add_argument("--quad", type=_quad, metavar="ORDER")
    p.add_argument("--quad-rule", choices=["gauss-legendre", "simpson"])
    p.add_argument("--clip", action="store_true")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--formats", metavar="LIST", help="comma-separated subset of csv,json,svg")
    p.add_argument("--config", metavar="FILE")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="wavespin", description="Dirac well wave-spin toolkit")
    parser.add_argument("--version", action="version", version=f"wavespin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="derived state parameters")
    f = sub.add_parser("field", parents=[common], help="sample a density field on the grid")
    f.add_argument("--which", choices=FIELD_KINDS, default="current")
    f.add_argument("--epsilon-rho", type=float)
    sub.add_parser("zeeman", parents=[common], help="spin-up/down shifts and splitting")
    s = sub.add_parser("scan", parents=[common], help="patch-potential shift map")
    s.add_argument("--scan-grid", type=_pair(int), metavar="NA,NB")
    s.add_argument("--scan-range", metavar="AMIN,AMAX,BMIN,BMAX")
    c = sub.add_parser("check", parents=[common], help="run the invariant suite")
    c.add_argument("--sabotage", choices=SABOTAGE_MODES, help="inject a known fault (test hook)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    raw = DEFAULTS
    if "config" in args:
        raw = deep_update(raw, load_file(args.config))
    flags: dict = {}
    a = vars(args)
    if "state" in a:
        flags.setdefault("state", {}).update(nx=a["state"][0], ny=a["state"][1])
    if "spin" in a:
        flags.setdefault("state", {})["spin"] = a["spin"]
    if "well" in a:
        flags["well"] = {"Lx": a["well"][0], "Ly": a["well"][1]}
    if "grid" in a:
        flags["grid"] = {"samples_x": a["grid"][0], "samples_y": a["grid"][1]}
    if "b_field" in a:
        flags["b_field"] = a["b_field"]
    if "potential" in a:
        flags.setdefault("potential", {})["variant"] = a["potential"]
    if "patch_center" in a:
        flags.setdefault("potential", {}).update(center_a=a["patch_center"][0], center_b=a["patch_center"][1])
    if "patch_half" in a:
        flags.setdefault("potential", {}).update(half_w_x=a["patch_half"][0], half_w_y=a["patch_half"][1])
    if "quad" in a:
        flags.setdefault("quad", {})["order_or_panels"] = a["quad"]
    if "quad_rule" in a:
        flags.setdefault("quad", {})["rule"] = a["quad_rule"]
    if "clip" in a:
        flags["clip"] = True
    if "out" in a:
        flags["output_dir"] = a["out"]
    if "formats" in a:
        flags["formats"] = [f for f in a["formats"].split(",") if f]
    if a.get("epsilon_rho") is not None:
        flags["epsilon_rho"] = a["epsilon_rho"]
    if a.get("scan_grid") is not None:
        flags["scan_grid"] = {"samples_x": a["scan_grid"][0], "samples_y": a["scan_grid"][1]}
    if a.get("scan_range") is not None:
        parts = a["scan_range"].split(",")
        try:
            flags["scan_range"] = [float(v) for v in parts]
        except ValueError as exc:
            raise ValidationError("scan_range", str(exc)) from exc
    return build(deep_update(raw, flags))


def derived_echo(cfg: RunConfig) -> dict:
    p = derive_params(cfg.state, cfg.well)
    return {
        "nx": cfg.state.nx,
        "ny": cfg.state.ny,
        "spin": cfg.state.spin.value,
        "Lx_m": cfg.well.Lx,
        "Ly_m": cfg.well.Ly,
        "kx_per_m": p.kx,
        "ky_per_m": p.ky,
        "eta_x": p.eta_x,
        "eta_y": p.eta_y,
        "eta": p.eta,
        "eta_closed_form_h_over_mc": eta_closed_form(cfg.state, cfg.well),
        "energy_J": p.energy,
        "energy_eV": joules_to_ev(p.energy),
        "kinetic_J": p.kinetic,
        "kinetic_eV": joules_to_ev(p.kinetic),
        "n_squared": p.n_squared,
        "p_z": p.p_z,
    }


class Run:
    """Collects emitted files and writes the manifest last."""

    def __init__(self, command: str, cfg: RunConfig) -> None:
        self.command = command
        self.cfg = cfg
        self.files: list[Path] = []
        self.start = time.perf_counter()
        try:
            cfg.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OutputError(f"cannot create {cfg.output_dir}: {exc}") from exc

    def path(self, name: str) -> Path:
        return self.cfg.output_dir / name

    def add(self, path: Path) -> None:
        self.files.append(path)

    def wants(self, fmt: str) -> bool:
        return fmt in self.cfg.formats

    def finish(self) -> Path:
        payload = {
            "tool": "wavespin",
            "version": __version__,
            "command": self.command,
            "config": self.cfg.to_dict(),
            "derived": derived_echo(self.cfg),
            "constants": CONSTANTS_VINTAGE,
            "duration_s": round(time.perf_counter() - self.start, 6),
        }
        return write_manifest(self.cfg.output_dir, jsonable(payload), self.files)


def _emit_json(doc) -> None:
    print(json.dumps(jsonable(doc), indent=2, sort_keys=True))


def cmd_info(cfg: RunConfig, args) -> int:
    run = Run("info", cfg)
    doc = derived_echo(cfg)
    if run.wants("json"):
        run.add(write_json(run.path("info.json"), jsonable(doc)))
    run.finish()
    _emit_json(doc)
    return EXIT_OK


def cmd_field(cfg: RunConfig, args) -> int:
    which = args.which
    run = Run("field", cfg)
    p = derive_params(cfg.state, cfg.well)
    field = sample_field(which, p, cfg.state, cfg.well, cfg.grid, cfg.epsilon_rho)
    xs, ys = field.axes()
    if run.wants("csv"):
        run.add(write_field_csv(run.path(f"{which}.csv"), field))
    if run.wants("svg"):
        title = f"{which} ({cfg.state.nx},{cfg.state.ny}) {cfg.state.spin.value}"
        if field.kind is FieldKind.SCALAR:
            run.add(heatmap_svg(run.path(f"{which}.svg"), xs, ys, field.values, title, f"{which}/e"))
        else:
            overlay = None
            if cfg.potential.variant is PotentialKind.PATCH:
                pot = cfg.potential.with_field(1.0)
                overlay = (pot.support(), lambda X, Y: vector_potential(pot, X, Y))
            run.add(quiver_svg(run.path(f"{which}.svg"), xs, ys, field.values, title, f"|{which}|", overlay=overlay))
    summary = {"field": which, "samples": [cfg.grid.samples_x, cfg.grid.samples_y],
               "min": float(field.values.min()), "max": float(field.values.max()),
               "files": [f.name for f in run.files]}
    if field.defined is not None:
        summary["undefined_samples"] = int(np.count_nonzero(~field.defined))
    if run.wants("json"):
        run.add(write_json(run.path(f"{which}.json"), jsonable(summary)))
    run.finish()
    _emit_json(summary)
    return EXIT_OK


def _check_patch(cfg: RunConfig) -> None:
    if cfg.potential.variant is PotentialKind.PATCH and not cfg.clip and not cfg.potential.fits_in(cfg.well):
        raise ValidationError("patch_center", "patch leaves the well; pass --clip to integrate the overlap")


def cmd_zeeman(cfg: RunConfig, args) -> int:
    _check_patch(cfg)
    run = Run("zeeman", cfg)
    p = derive_params(cfg.state, cfg.well)
    pot = None if cfg.potential.variant is PotentialKind.UNIFORM else cfg.potential
    z = zeeman_splitting(p, cfg.state, cfg.well, cfg.b_field, cfg.quad, pot)
    mu_b = CODATA2018.mu_B_ev_per_tesla
    doc = {
        "b_field_T": cfg.b_field,
        "potential": cfg.potential.variant.value,
        "shift_up": {"mu_b_units": z.shift_up.shift_mu_b_units, "eV": z.shift_up.shift_ev,
                     "est_error": z.shift_up.est_error},
        "shift_down": {"mu_b_units": z.shift_down.shift_mu_b_units, "eV": z.shift_down.shift_ev,
                       "est_error": z.shift_down.est_error},
        "splitting": {"mu_b_units": z.delta_mu_b_units, "eV": z.delta_ev},
        "closed_form_splitting_mu_b_units": 2.0 / p.gamma,
        "mu_B_eV_per_T": mu_b,
    }
    if run.wants("json"):
        run.add(write_json(run.path("zeeman.json"), jsonable(doc)))
    run.finish()
    _emit_json(doc)
    return EXIT_OK


def cmd_scan(cfg: RunConfig, args) -> int:
    p = derive_params(cfg.state, cfg.well)
    a_range = b_range = None
    if cfg.scan_range is not None:
        a_range, b_range = cfg.scan_range[:2], cfg.scan_range[2:]
    pot = cfg.potential.resolved(cfg.well) if cfg.potential.variant is PotentialKind.PATCH else None
    hx = pot.half_w_x if pot is not None else None
    hy = pot.half_w_y if pot is not None else None
    result = scan_patch(p, cfg.state, cfg.well, cfg.b_field, cfg.scan_grid, cfg.quad,
                        a_range, b_range, hx, hy, clip=cfg.clip)
    run = Run("scan", cfg)
    if run.wants("csv"):
        rows = ([a, b, result.shifts[i, j]] for i, b in enumerate(result.b_values)
                for j, a in enumerate(result.a_values))
        run.add(write_rows(run.path("scan.csv"), ["a_m", "b_m", "shift_mu_b_units"], rows))
    if run.wants("svg"):
        run.add(heatmap_svg(run.path("scan.svg"), result.a_values, result.b_values, result.shifts,
                            f"patch scan ({cfg.state.nx},{cfg.state.ny})", "E1/(muB B)"))
    doc = {"a_m": result.a_values, "b_m": result.b_values, "shift_mu_b_units": result.shifts,
           "half_w_x": result.half_w_x, "half_w_y": result.half_w_y}
    if run.wants("json"):
        run.add(write_json(run.path("scan.json"), jsonable(doc)))
    run.finish()
    _emit_json(doc)
    return EXIT_OK


def cmd_check(cfg: RunConfig, args) -> int:
    if "state" in vars(args) or cfg.raw["state"] != DEFAULTS["state"]:
        states = [cfg.state]
    else:
        states = [StateIndex(1, 1), StateIndex(2, 2)]
    results = run_checks(states, cfg.well, getattr(args, "sabotage", None))
    ok = all(r.passed for r in results)
    run = Run("check", cfg)
    doc = {"passed": ok, "sabotage": getattr(args, "sabotage", None), "checks": [r.as_dict() for r in results]}
    if run.wants("json"):
        run.add(write_json(run.path("check.json"), jsonable(doc)))
    run.finish()
    if getattr(args, "json", False):
        _emit_json(doc)
    else:
        for r in results:
            mark = "PASS" if r.passed else "FAIL"
            print(f"{mark}  {r.state:<12} {r.name:<42} measured={r.measured:.3e} tol={r.tolerance:.1e}")
        print("all checks passed" if ok else "CHECK FAILURES")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {"info": cmd_info, "field": cmd_field, "zeeman": cmd_zeeman, "scan": cmd_scan, "check": cmd_check}


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, args)
    except ValidationError as exc:
        print(f"wavespin: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"wavespin: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
