"""Command-line driver.

    conecut volume --profile cone --radius 1 --height 1 --slabs 4 --mode both
    conecut converge --profile paraboloid --base-slabs 2 --levels 6 --format csv
    conecut rg | fixedpoint | democritus | density ...

Exit status: 0 on success, 1 when a computation is refused (odd slab
count, non-monotone gap request, ...), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import math
import os
import shlex
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

from . import profiles, qcovector, rg, ziggurat
from ._io import dumps_csv, dumps_json, dumps_table
from .errors import ConecutError

COMMANDS = ("volume", "converge", "rg", "fixedpoint", "democritus", "density")
FORMATS = ("table", "csv", "json")
FORMAT_ENV = "CONECUT_FORMAT"

DEFAULT_SLABS = 1024
DEFAULT_BASE_SLABS = 2
DEFAULT_LEVELS = 10
DEFAULT_Z = 0.5
DEFAULT_EPS = {
    "democritus": tuple(10.0**-k for k in range(2, 7)),
    "density": tuple(1e-2 / 2**k for k in range(11)),
}

# which optional parameters each command understands
_PARAMS = {
    "volume": ("slabs", "mode"),
    "converge": ("base_slabs", "levels"),
    "rg": ("base_slabs", "levels", "mode", "target_thickness"),
    "fixedpoint": ("slabs", "mode"),
    "democritus": ("z", "eps"),
    "density": ("z", "eps"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    profile: str = "cone"
    radius: float = 1.0
    height: float = 1.0
    slabs: int | None = None
    base_slabs: int | None = None
    levels: int | None = None
    mode: str | None = None
    z: float | None = None
    eps: tuple[float, ...] | None = None
    target_thickness: float | None = None
    format: str = "table"
    output: str | None = None

    def argv(self) -> list[str]:
        out = [self.command, "--profile", self.profile]
        if not self.profile.startswith("table:"):
            out += ["--radius", repr(self.radius), "--height", repr(self.height)]
        for f in fields(self):
            if f.name not in _PARAMS[self.command]:
                continue
            value = getattr(self, f.name)
            if value is None:
                continue
            flag = "--" + f.name.replace("_", "-")
            if f.name == "eps":
                value = ",".join(repr(e) for e in value)
            elif isinstance(value, float):
                value = repr(value)
            out += [flag, str(value)]
        out += ["--format", self.format]
        if self.output:
            out += ["--output", self.output]
        return out

    def canonical(self) -> str:
        return shlex.join(self.argv())

    def load_profile(self) -> profiles.Profile:
        if self.profile.startswith("table:"):
            return profiles.load_table(self.profile[len("table:"):])
        return profiles.make_profile(self.profile, self.radius, self.height)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return value


def _float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def _eps_list(text: str) -> tuple[float, ...]:
    return tuple(_positive_float(t) for t in text.split(",") if t.strip())


def _profile_spec(text: str) -> str:
    if text in ("cone", "cylinder", "paraboloid") or (text.startswith("table:") and len(text) > 6):
        return text
    raise argparse.ArgumentTypeError(
        f"expected cone, cylinder, paraboloid or table:<path>, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", type=_profile_spec, default="cone",
                        help="cone, cylinder, paraboloid or table:<csv path> (default: cone)")
    common.add_argument("--radius", type=_positive_float, default=1.0)
    common.add_argument("--height", type=_positive_float, default=1.0)
    common.add_argument("--format", choices=FORMATS, default=None,
                        help=f"output format (default: ${FORMAT_ENV} or table)")
    common.add_argument("--output", default=None, help="write here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="conecut",
        description="Cylinder-stack bounds, Wilson averaging and cutter limits for solids of revolution.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("volume", parents=[common], help="inscribed/circumscribed volumes and gap")
    p.add_argument("--slabs", type=_positive_int, default=DEFAULT_SLABS)
    p.add_argument("--mode", choices=("inscribed", "circumscribed", "both"), default="both")

    p = sub.add_parser("converge", parents=[common], help="refinement table over n0 * 2**k slabs")
    p.add_argument("--base-slabs", type=_positive_int, default=DEFAULT_BASE_SLABS)
    p.add_argument("--levels", type=_nonneg_int, default=DEFAULT_LEVELS)

    p = sub.add_parser("rg", parents=[common], help="renormalized series at a fixed thickness")
    p.add_argument("--base-slabs", type=_positive_int, default=DEFAULT_BASE_SLABS)
    p.add_argument("--levels", type=_nonneg_int, default=DEFAULT_LEVELS)
    p.add_argument("--mode", choices=ziggurat.MODES, default="inscribed")
    p.add_argument("--target-thickness", type=_positive_float, default=None,
                   help="reference thickness; overrides --base-slabs (must divide the height)")

    p = sub.add_parser("fixedpoint", parents=[common], help="average down to a single slab")
    p.add_argument("--slabs", type=_positive_int, default=DEFAULT_SLABS)
    p.add_argument("--mode", choices=ziggurat.MODES, default="inscribed")

    for name, text in (("democritus", "face-area mismatch of a thin cutter"),
                       ("density", "slice volume / thickness against A(z)")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--z", type=_float, default=DEFAULT_Z)
        p.add_argument("--eps", type=_eps_list, default=DEFAULT_EPS[name],
                       help="comma-separated cutter thicknesses")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    fmt = ns.format
    if fmt is None:
        fmt = os.environ.get(FORMAT_ENV, "table") or "table"
        if fmt not in FORMATS:
            parser.error(f"{FORMAT_ENV}={fmt!r} is not one of {', '.join(FORMATS)}")
    kwargs = {name: getattr(ns, name) for name in _PARAMS[ns.command]}
    if "eps" in kwargs and not kwargs["eps"]:
        parser.error("argument --eps: needs at least one value")
    return RunConfig(ns.command, ns.profile, ns.radius, ns.height,
                     format=fmt, output=ns.output, **kwargs)


# ---------------------------------------------------------------- reports

class Report:
    """Columns and rows for table/CSV output, plus a JSON document."""

    def __init__(self, header, rows, document=None, csv_text=None):
        self.header = tuple(header)
        self.rows = [tuple(r) for r in rows]
        self._document = document
        self._csv = csv_text

    def document(self, config: RunConfig) -> dict:
        if self._document is not None:
            return self._document
        return {
            "command": config.command,
            "config": config.canonical(),
            "rows": [dict(zip(self.header, r)) for r in self.rows],
        }

    def render(self, config: RunConfig) -> str:
        if config.format == "table":
            return dumps_table(self.header, self.rows)
        if config.format == "csv":
            return self._csv if self._csv is not None else dumps_csv(self.header, self.rows)
        return dumps_json(self.document(config)) + "\n"


def _ratio(prev: float | None, cur: float) -> float | None:
    if prev is None or cur == 0:
        return None
    return prev / cur


def _volume(cfg: RunConfig, p: profiles.Profile) -> Report:
    n = cfg.slabs
    exact = profiles.oracle_volume(p)
    row: dict = {"slabs": n}
    if cfg.mode in ("inscribed", "both"):
        row["inscribed"] = ziggurat.total_volume(ziggurat.build_ziggurat(p, n, "inscribed"))
    if cfg.mode in ("circumscribed", "both"):
        row["circumscribed"] = ziggurat.total_volume(ziggurat.build_ziggurat(p, n, "circumscribed"))
    row["exact"] = exact
    g = ziggurat.gap(p, n)
    row["gap"] = g.by_subtraction
    row["gap_closed_form"] = g.closed_form
    return Report(row.keys(), [row.values()])


def _converge(cfg: RunConfig, p: profiles.Profile) -> Report:
    exact = profiles.oracle_volume(p)
    rows = []
    prev_in = prev_out = None
    for k in range(cfg.levels + 1):
        n = cfg.base_slabs * 2**k
        vin = ziggurat.total_volume(ziggurat.build_ziggurat(p, n, "inscribed"))
        vout = ziggurat.total_volume(ziggurat.build_ziggurat(p, n, "circumscribed"))
        e_in, e_out = abs(exact - vin), abs(vout - exact)
        rows.append((k, n, vin, vout, ziggurat.gap(p, n).by_subtraction, exact, e_in, e_out,
                     _ratio(prev_in, e_in), _ratio(prev_out, e_out)))
        prev_in, prev_out = e_in, e_out
    header = ("level", "slabs", "inscribed", "circumscribed", "gap", "exact",
              "error_inscribed", "error_circumscribed", "ratio_inscribed", "ratio_circumscribed")
    return Report(header, rows)


def _base_slabs(cfg: RunConfig, p: profiles.Profile) -> int:
    if cfg.target_thickness is None:
        return cfg.base_slabs
    n0 = round(p.height / cfg.target_thickness)
    if n0 < 1 or abs(n0 * cfg.target_thickness - p.height) > 1e-9 * p.height:
        raise ConecutError(
            f"target thickness {cfg.target_thickness!r} does not divide height {p.height!r}")
    return n0


def _rg(cfg: RunConfig, p: profiles.Profile) -> Report:
    series = rg.renormalized_series(p, _base_slabs(cfg, p), cfg.levels, cfg.mode)
    ratios = series.ratios()
    rows = []
    for k, lv in enumerate(series.levels):
        for i, (v, e) in enumerate(zip(lv.figure.volumes.tolist(), lv.errors.tolist())):
            ratio = None if k == 0 or math.isnan(ratios[k - 1, i]) else float(ratios[k - 1, i])
            rows.append((k, i, v, e, ratio))
    return Report(("level", "bin", "volume", "error", "ratio"), rows,
                  document=series.to_dict(), csv_text=series.to_csv())


def _fixedpoint(cfg: RunConfig, p: profiles.Profile) -> Report:
    report = rg.iterate_to_fixed_point(ziggurat.build_ziggurat(p, cfg.slabs, cfg.mode))
    rows = [r + (float(zg.effective_radii.min()), float(zg.effective_radii.max()))
            for r, zg in zip(report.rows(), report.iterates)]
    return Report(("iterate", "slabs", "thickness", "invariance_distance",
                   "min_radius", "max_radius"), rows,
                  document=report.to_dict(), csv_text=report.to_csv())


def _democritus(cfg: RunConfig, p: profiles.Profile) -> Report:
    rows = []
    for e in cfg.eps:
        g = ziggurat.democritus_gap(p, cfg.z, e)
        rows.append((e, g, g / e))
    return Report(("eps", "gap", "gap_over_eps"), rows)


def _density(cfg: RunConfig, p: profiles.Profile) -> Report:
    target = profiles.area(p, cfg.z)
    dens = qcovector.density_limit(p, cfg.z, cfg.eps)
    rows = []
    prev = None
    for e, d in zip(cfg.eps, dens):
        err = abs(d - target)
        rows.append((e, d, target, err, _ratio(prev, err)))
        prev = err
    return Report(("eps", "density", "area", "error", "ratio"), rows)


_RUNNERS = {
    "volume": _volume,
    "converge": _converge,
    "rg": _rg,
    "fixedpoint": _fixedpoint,
    "democritus": _democritus,
    "density": _density,
}


def render(config: RunConfig) -> str:
    """Run ``config`` and return the formatted output; module errors propagate."""
    p = config.load_profile()
    return _RUNNERS[config.command](config, p).render(config)


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        text = render(config)
    except (ConecutError, OSError) as exc:
        print(f"conecut: error: {exc}", file=stderr)
        return 1
    if config.output:
        try:
            Path(config.output).write_bytes(text.encode("utf-8"))
        except OSError as exc:
            print(f"conecut: error: {exc}", file=stderr)
            return 1
    else:
        stdout.write(text)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
