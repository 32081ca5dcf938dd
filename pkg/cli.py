#!/usr/bin/python3
# -*- coding: UTF-8 -*-
# cli.py - Batch command surface: convolve-add, convolve-mult, eval, verify
#
# Exit codes: 0 pass, 1 a residual exceeded its tolerance, 2 configuration or
# domain error, 3 numerical non-convergence.

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from typing import Callable, Sequence

import numpy as np

from additive_subordination import free_add_convolve, subordination_grid, support_estimate
from domain_calculus import domain_margin
from matrix_oracle import IDENTITIES, report_to_json, reports_to_csv, run_all, run_experiment
from multiplicative_subordination import free_mult_convolve_unitary
from operator_valued import CovarianceMap
from spectral_measures import (
    AnyMeasure, CircleMeasure, LineMeasure, cauchy_transform, circle_cauchy, f_transform, from_json,
    h_transform, make_standard, psi_transform, to_json,
)
from subordination import (
    DEFAULT_TOL, MC_TOLERANCE, BadParams, ConfigError, DimensionMismatch, Display, DomainError, Event,
    NoConvergence, NullDisplay, PlainTextDisplay, SolverSettings, SubordinationError, UnknownFamily, emit,
)
from utility import (
    atomic_write_text, csv_text, parse_complex, parse_floats, parse_grid, parse_points,
    write_json,
)


EXIT_PASS: int = 0
EXIT_FAIL: int = 1
EXIT_CONFIG: int = 2
EXIT_NUMERICAL: int = 3

OUT_DIR_ENV: str = "SUBORDINATION_OUT_DIR"
_DEFAULT_OUT: str = "results"
_DEFAULT_IM_PARTS: tuple[float, ...] = (0.5, 1.0, 2.0)
_GRID_KEYS: frozenset[str] = frozenset({"lo", "hi", "n", "im_parts"})
_COMMANDS: tuple[str, ...] = ("convolve-add", "convolve-mult", "eval", "verify")
_TRANSFORMS: tuple[str, ...] = ("cauchy", "f", "h", "circle-cauchy", "psi", "subordination", "margins")
_LINE_TRANSFORMS: tuple[str, ...] = ("cauchy", "f", "h", "subordination")
_CONFIG_ERRORS = (ConfigError, BadParams, DomainError, UnknownFamily, DimensionMismatch)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Everything one command needs; validated before any computation."""
    command: str = ""
    measures: list = field(default_factory=list)        # shorthand strings, JSON dicts, or file paths
    grid: dict = field(default_factory=dict)            # lo, hi, n, im_parts
    etas: list | None = None
    tol: float = DEFAULT_TOL
    seed: int = 0
    out: str = ""
    format: str = "json"
    transform: str = ""
    points: list = field(default_factory=list)
    order: int = 16
    identity: str = ""
    N: int | None = None
    trials: int | None = None
    samples: int | None = None
    tolerance: float = MC_TOLERANCE
    kraus_x: list | None = None
    kraus_y: list | None = None
    b: list | None = None
    matrices: list = field(default_factory=list)
    random_angles: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        config = cls(**data)
        config.validate()
        return config

    def validate(self) -> None:  # noqa: C901
        if self.command not in _COMMANDS:
            raise ConfigError(f"command must be one of {', '.join(_COMMANDS)}, got '{self.command}'")
        bad_grid = sorted(set(self.grid) - _GRID_KEYS)
        if bad_grid:
            raise ConfigError(f"unknown grid key(s): {', '.join(bad_grid)}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got '{self.format}'")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.tol, (int, float)) or self.tol < 1e-14:
            raise ConfigError(f"tol must be a number at least 1e-14, got {self.tol!r}")
        for name in ("N", "trials", "samples"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 1):
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.order, int) or not 0 <= self.order <= 16:
            raise ConfigError(f"order must be an integer in [0, 16], got {self.order!r}")
        if self.command in ("convolve-add", "convolve-mult") and len(self.measures) != 2:
            raise ConfigError(f"{self.command} needs exactly two measures, got {len(self.measures)}")
        if self.command == "eval":
            if self.transform not in _TRANSFORMS:
                raise ConfigError(f"transform must be one of {', '.join(_TRANSFORMS)}, got '{self.transform}'")
            if self.transform != "margins" and not self.measures:
                raise ConfigError(f"eval {self.transform} needs a measure")
            if self.transform == "subordination" and len(self.measures) != 2:
                raise ConfigError("eval subordination needs two measures")
            on_grid = self.transform in _LINE_TRANSFORMS and {"lo", "hi", "n"} <= set(self.grid)
            if not self.points and not self.matrices and not on_grid:
                raise ConfigError("eval needs --points, --grid (line transforms) or config matrices")
        if not isinstance(self.random_angles, bool):
            raise ConfigError(f"random_angles must be true or false, got {self.random_angles!r}")
        if self.command == "verify" and self.identity not in IDENTITIES + ("all",):
            raise ConfigError(f"identity must be one of {', '.join(IDENTITIES)} or all, got '{self.identity}'")

    def settings(self) -> SolverSettings:
        return SolverSettings(tol=float(self.tol)).with_overrides(
            etas=tuple(float(e) for e in self.etas) if self.etas else None)

    def grid_points(self) -> list[complex]:
        """Every grid abscissa paired with every imaginary part, row by row in im_parts order."""
        ts = np.linspace(float(self.grid["lo"]), float(self.grid["hi"]), int(self.grid["n"]))
        ims = [float(v) for v in self.grid.get("im_parts", _DEFAULT_IM_PARTS)]
        return [complex(t, y) for y in ims for t in ts]

    def out_dir(self) -> str:
        return self.out or os.environ.get(OUT_DIR_ENV) or _DEFAULT_OUT


# ---------------------------------------------------------------------------
# Measure and matrix parsing
# ---------------------------------------------------------------------------

_SHORTHAND = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")
_ALIASES: dict[str, str] = {"haar": "haar_circle", "bernoulli": "bernoulli_pm1", "mp": "marchenko_pastur"}


def _pairs(body: str) -> list[tuple[float, float]]:
    out = []
    for item in body.split(","):
        pos, _, weight = item.partition(":")
        out.append((float(pos), float(weight)))
    return out


def parse_measure(spec: str | dict, grid_size: int | None = None) -> AnyMeasure:
    """A measure from shorthand (semicircle(0,1), atomic(-1:0.5,1:0.5), haar), a JSON dict, or a file path."""
    kw = {} if grid_size is None else {"grid_size": grid_size}
    if isinstance(spec, dict):
        if "type" in spec:
            return from_json(spec)
        if "family" in spec:
            return make_standard(spec["family"], spec.get("params"), **kw)
        raise ConfigError("a measure object needs 'type' (serialized) or 'family' (standard)")
    if not isinstance(spec, str):
        raise ConfigError(f"cannot read a measure from {spec!r}")
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_measure(json.load(fh), grid_size)
    m = _SHORTHAND.match(spec)
    if not m:
        raise ConfigError(f"cannot parse measure '{spec}'")
    name, body = _ALIASES.get(m.group(1), m.group(1)), (m.group(2) or "").strip()
    try:
        if name in ("atomic", "circle_atoms"):
            params: object = _pairs(body)
        else:
            params = [float(v) for v in body.split(",")] if body else None
    except ValueError as exc:
        raise ConfigError(f"bad parameters in measure '{spec}'") from exc
    return make_standard(name, params, **kw)


def _entry(v: object) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return parse_complex(v)
    if isinstance(v, (int, float)):
        return complex(v)
    raise ConfigError(f"cannot read a matrix entry from {v!r}")


def parse_matrix(obj: object) -> np.ndarray:
    """Rows of entries; an entry is a number, a complex string, or an [re, im] pair."""
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ConfigError(f"a matrix is a list of rows, got {obj!r}")
    return np.array([[_entry(v) for v in row] for row in obj], dtype=complex)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _write_table(config: RunConfig, display: Display, stem: str,
                 header: Sequence[str], rows: list[list[object]]) -> None:
    path = os.path.join(config.out_dir(), f"{stem}.{config.format}")
    if config.format == "csv":
        atomic_write_text(path, csv_text(header, rows))
    else:
        write_json(path, [dict(zip(header, r)) for r in rows], compact=True)
    emit(display, Event("file_written", source="cli", message=path))


def _write_doc(config: RunConfig, display: Display, name: str, obj: object) -> None:
    path = os.path.join(config.out_dir(), name)
    write_json(path, obj)
    emit(display, Event("file_written", source="cli", message=path))


def _metadata(config: RunConfig, display: Display) -> None:
    _write_doc(config, display, "metadata.json", {
        "command": config.command,
        "seed": config.seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    })


def _line(mu: AnyMeasure, label: str) -> LineMeasure:
    if not isinstance(mu, LineMeasure):
        raise ConfigError(f"{label} must be a measure on the line")
    return mu


def _circle(mu: AnyMeasure, label: str) -> CircleMeasure:
    if not isinstance(mu, CircleMeasure):
        raise ConfigError(f"{label} must be a measure on the circle")
    return mu


def cmd_convolve_add(config: RunConfig, display: Display) -> int:
    settings = config.settings()
    mu = _line(parse_measure(config.measures[0]), "mu")
    nu = _line(parse_measure(config.measures[1]), "nu")
    grid = config.grid
    n = int(grid.get("n", 801))
    result = free_add_convolve(mu, nu, grid.get("lo"), grid.get("hi"), n, settings.etas, settings, display)
    im_parts = [float(v) for v in grid.get("im_parts", _DEFAULT_IM_PARTS)]
    z = (result.grid[None, :] + 1j * np.array(im_parts)[:, None]).ravel()
    table = subordination_grid(mu, nu, z, settings, display)
    rows = [[r.z.real, r.z.imag, r.omega1.real, r.omega1.imag, r.omega2.real, r.omega2.imag,
             r.g_conv.real, r.g_conv.imag, r.residual, r.iterations] for r in table.rows()]
    header = ["z_re", "z_im", "omega1_re", "omega1_im", "omega2_re", "omega2_im", "g_re", "g_im",
              "residual", "iterations"]
    max_residual = float(table.residual.max())
    _write_doc(config, display, "measure.json", to_json(result))
    _write_table(config, display, "subordination", header, rows)
    lo, hi = support_estimate(result)
    passed = max_residual <= settings.tol
    _write_doc(config, display, "summary.json", {
        "command": config.command, "mu": mu.name, "nu": nu.name, "tol": settings.tol,
        "max_residual": max_residual, "support_estimate": [lo, hi],
        "renormalization": result.renormalization, "passed": passed,
    })
    _metadata(config, display)
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_convolve_mult(config: RunConfig, display: Display) -> int:
    settings = config.settings()
    mu = _circle(parse_measure(config.measures[0]), "mu")
    nu = _circle(parse_measure(config.measures[1]), "nu")
    result = free_mult_convolve_unitary(mu, nu, config.order, settings, display)
    rows = [[k, float(m.real), float(m.imag)] for k, m in enumerate(result.moments)]
    _write_doc(config, display, "measure.json", to_json(result.measure()))
    _write_table(config, display, "moments", ["k", "re", "im"], rows)
    passed = result.residual <= settings.tol
    _write_doc(config, display, "summary.json", {
        "command": config.command, "mu": mu.name, "nu": nu.name, "tol": settings.tol,
        "max_residual": result.residual, "nodes": result.nodes, "radius": result.radius, "passed": passed,
    })
    _metadata(config, display)
    return EXIT_PASS if passed else EXIT_FAIL


def _pointwise(fn: Callable[[complex], complex], margin: Callable[[complex], float],
               points: list[complex]) -> list[list[object]]:
    rows = []
    for z in points:
        value = complex(fn(z))
        rows.append([z.real, z.imag, value.real, value.imag, float(margin(z))])
    return rows


def cmd_eval(config: RunConfig, display: Display) -> int:
    points = [p if isinstance(p, complex) else _entry(p) for p in config.points]
    t = config.transform
    if not points and t in _LINE_TRANSFORMS:
        points = config.grid_points()
    header = ["z_re", "z_im", "value_re", "value_im", "margin"]
    if t == "margins":
        header = ["index", "dim", "halfplane_margin", "ball_margin"]
        mats = [np.array([[z]]) for z in points] + [parse_matrix(m) for m in config.matrices]
        rows: list[list[object]] = []
        for i, m in enumerate(mats):
            dm = domain_margin(m)
            rows.append([i, m.shape[0], dm.halfplane_margin, dm.ball_margin])
    elif t == "subordination":
        mu = _line(parse_measure(config.measures[0]), "mu")
        nu = _line(parse_measure(config.measures[1]), "nu")
        table = subordination_grid(mu, nu, np.array(points), config.settings(), display)
        header = ["z_re", "z_im", "omega1_re", "omega1_im", "omega2_re", "omega2_im", "g_re", "g_im", "residual"]
        rows = [[r.z.real, r.z.imag, r.omega1.real, r.omega1.imag, r.omega2.real, r.omega2.imag,
                 r.g_conv.real, r.g_conv.imag, r.residual] for r in table.rows()]
    elif t in ("circle-cauchy", "psi"):
        nu = _circle(parse_measure(config.measures[0]), "measure")
        fn = circle_cauchy if t == "circle-cauchy" else psi_transform
        rows = _pointwise(lambda w: fn(nu, w), lambda w: 1.0 - abs(w), points)
    else:
        mu = _line(parse_measure(config.measures[0]), "measure")
        fn = {"cauchy": cauchy_transform, "f": f_transform, "h": h_transform}[t]
        rows = _pointwise(lambda z: fn(mu, z), lambda z: z.imag, points)
    _write_table(config, display, f"eval_{t.replace('-', '_')}", header, rows)
    return EXIT_PASS


def _covariance(obj: list | None, n: int) -> CovarianceMap:
    if obj is None:
        return CovarianceMap.zero(n)
    return CovarianceMap.of([parse_matrix(k) for k in obj], n)


def cmd_verify(config: RunConfig, display: Display) -> int:
    trials = config.samples if config.identity == "lemma34" and config.samples else config.trials
    if config.identity == "all":
        reports = run_all(config.seed, config.N, config.trials, config.tolerance, display)
    else:
        overrides: dict[str, object] = {}
        if config.identity == "thm31_block" and (config.kraus_x or config.kraus_y or config.b):
            b = parse_matrix(config.b) if config.b else 1j * np.eye(2)
            n = b.shape[0]
            overrides = {"eta_x": _covariance(config.kraus_x, n), "eta_y": _covariance(config.kraus_y, n), "b": b}
        if config.identity == "thm36" and config.random_angles:
            overrides["random_angles"] = True
        reports = [run_experiment(config.identity, config.seed, config.N, trials, config.tolerance,
                                  display, **overrides)]
    for report in reports:
        display.show_report(report)
        _write_doc(config, display, f"report_{report.identity}.json", report_to_json(report))
    path = os.path.join(config.out_dir(), "summary.csv")
    atomic_write_text(path, reports_to_csv(reports))
    emit(display, Event("file_written", source="cli", message=path))
    _metadata(config, display)
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAIL


_HANDLERS: dict[str, Callable[[RunConfig, Display], int]] = {
    "convolve-add": cmd_convolve_add,
    "convolve-mult": cmd_convolve_mult,
    "eval": cmd_eval,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="JSON run configuration; flags given on the command line override it")
    common.add_argument("--seed", type=int, default=None, metavar="N", help="random seed (default: 0)")
    common.add_argument("--out", metavar="DIR", default=None,
                        help=f"output directory (default: ${OUT_DIR_ENV} or ./{_DEFAULT_OUT})")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="table format (default: json)")
    common.add_argument("--tol", type=float, default=None, metavar="X", help="solver residual tolerance")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    common.add_argument("--color", action="store_true", help="colored output (needs rich)")
    common.add_argument("--grid", metavar="LO:HI:N", default=None,
                        help="density grid for convolve-add; real parts of the eval points when --points is absent")
    common.add_argument("--im", metavar="A,B,C", default=None,
                        help="imaginary parts paired with the --grid points (default: 0.5,1,2)")

    parser = argparse.ArgumentParser(description="Free convolutions and subordination identities")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    add = sub.add_parser("convolve-add", parents=[common], help="free additive convolution of two line measures")
    add.add_argument("measures", nargs="*", metavar="MEASURE", help="e.g. semicircle(0,1) atomic(-1:0.5,1:0.5)")
    add.add_argument("--etas", metavar="A,B", default=None, help="decreasing Stieltjes inversion heights")

    mult = sub.add_parser("convolve-mult", parents=[common], help="free multiplicative convolution on the circle")
    mult.add_argument("measures", nargs="*", metavar="MEASURE", help="e.g. haar circle_atoms(0:0.5,3.14159:0.5)")
    mult.add_argument("--order", type=int, default=None, metavar="K", help="highest moment (default: 16)")

    ev = sub.add_parser("eval", parents=[common], help="evaluate a transform at points")
    ev.add_argument("transform", choices=_TRANSFORMS)
    ev.add_argument("measures", nargs="*", metavar="MEASURE")
    ev.add_argument("--points", metavar="Z1,Z2", default=None, help="e.g. i,1+0.5i")

    ver = sub.add_parser("verify", parents=[common], help="run a Monte Carlo subordination experiment")
    ver.add_argument("identity", choices=[i.replace("_", "-") for i in IDENTITIES] + ["all"])
    ver.add_argument("--N", type=int, default=None, metavar="N", help="matrix size")
    ver.add_argument("--trials", type=int, default=None, metavar="N", help="Monte Carlo trials")
    ver.add_argument("--samples", type=int, default=None, metavar="N", help="lemma34 sample count")
    ver.add_argument("--random-angles", action="store_true", default=None,
                     help="thm36: draw the eigenangles afresh in every trial instead of stratified quantiles")
    ver.add_argument("--tolerance", type=float, default=None, metavar="X",
                     help=f"Monte Carlo tolerance (default: {MC_TOLERANCE})")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data["command"] = args.command
    flags = {"seed": args.seed, "out": args.out, "format": args.format, "tol": args.tol}
    for name in ("order", "N", "trials", "samples", "tolerance", "transform", "random_angles"):
        flags[name] = getattr(args, name, None)
    if getattr(args, "identity", None):
        flags["identity"] = args.identity.replace("-", "_")
    if getattr(args, "measures", None):
        flags["measures"] = list(args.measures)
    try:
        if getattr(args, "points", None):
            flags["points"] = parse_points(args.points)
        if getattr(args, "etas", None):
            flags["etas"] = parse_floats(args.etas)
        grid = dict(data.get("grid", {}))
        if getattr(args, "grid", None):
            grid["lo"], grid["hi"], grid["n"] = parse_grid(args.grid)
        if getattr(args, "im", None):
            grid["im_parts"] = parse_floats(args.im)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if grid:
        data["grid"] = grid
    data.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig.from_dict(data)


def _pick_display(args: argparse.Namespace, parser: argparse.ArgumentParser) -> Display:
    if args.quiet:
        return NullDisplay()
    if args.color:
        try:
            from color_display import ColorDisplay  # noqa: PLC0415
        except ImportError:
            parser.error("--color requires the rich package: pip install rich")
        return ColorDisplay()
    return PlainTextDisplay()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.error("a command is required")
    display = _pick_display(args, parser)
    try:
        config = _config_from_args(args)
        emit(display, Event("command_start", source="cli", message=config.command))
        return _HANDLERS[config.command](config, display)
    except _CONFIG_ERRORS as exc:
        emit(display, Event("config_error", source="cli", message=str(exc)))
        parser.error(str(exc))
    except NoConvergence as exc:
        for point in exc.points[:10]:
            emit(display, Event("no_convergence", source="cli", point=point, count=exc.max_iter))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SubordinationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
