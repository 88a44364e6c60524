"""Command-line front end: ``kelvin sample | verify | derive``.

Settings come from built-in defaults, then an optional flat ``key = value``
config file (``--config``), then command-line flags; later sources win.
Reports are JSON with sorted keys and echo the effective configuration.

Exit codes: 0 success, 1 failed check or derivation step, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import sys
from dataclasses import dataclass

import numpy as np

from kelvin.fields import PointLoad, kelvin_displacement, kelvin_strain, kelvin_stress
from kelvin.material import IsotropicElastic, MaterialError

log = logging.getLogger("kelvin")

COLUMNS = ("z", "r", "sigma_zz", "sigma_rr", "sigma_phiphi", "sigma_zr",
           "E_zz", "E_rr", "E_phiphi", "E_zr", "u_z", "u_r")

DEFAULTS = {
    "f": 1.0,
    "nu": 0.25,
    "G": 1.0,
    "grid": "z=-2:2:9,r=0:2:5",
    "exclusion": 1e-3,
    "radii": "0.5,1,2,10",
    "suite": "all",
    "seed": 0,
    "out": None,
    "report": None,
    "use_paper_printed_signs": False,
    "skip_closure": False,
}
_TYPES = {"f": float, "nu": float, "G": float, "exclusion": float, "seed": int}
_BOOLS = ("use_paper_printed_signs", "skip_closure")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    z: tuple
    r: tuple
    exclusion: float = 1e-3

    @classmethod
    def parse(cls, text: str, exclusion: float = 1e-3) -> "GridSpec":
        parts = {}
        for item in text.split(","):
            key, _, rng = item.partition("=")
            fields = rng.split(":")
            if key.strip() not in ("z", "r") or len(fields) != 3:
                raise UsageError(f"bad grid item {item!r}; expected z=a:b:n,r=c:d:m")
            try:
                a, b, n = float(fields[0]), float(fields[1]), int(fields[2])
            except ValueError as exc:
                raise UsageError(f"bad grid item {item!r}") from exc
            if n < 2 or not (math.isfinite(a) and math.isfinite(b)):
                raise UsageError(f"grid {key} needs finite bounds and count >= 2")
            parts[key.strip()] = (a, b, n)
        if set(parts) != {"z", "r"}:
            raise UsageError("grid needs both z and r ranges")
        if min(parts["r"][:2]) < 0:
            raise UsageError("grid r range must be >= 0")
        return cls(parts["z"], parts["r"], exclusion)

    def points(self):
        zs = np.linspace(*self.z)
        rs = np.linspace(*self.r)
        Z, R = np.meshgrid(zs, rs, indexing="ij")
        return Z.ravel(), R.ravel()


def _coerce(key, value):
    if key in _BOOLS:
        if isinstance(value, bool):
            return value
        v = str(value).strip().lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"{key} expects a boolean, got {value!r}")
    if key in _TYPES and value is not None:
        try:
            return _TYPES[key](value)
        except ValueError as exc:
            raise UsageError(f"{key} expects {_TYPES[key].__name__}, got {value!r}") from exc
    return value


def read_config(path: str) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[run]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for key, value in cp["run"].items():
        k = key.replace("-", "_")
        if k not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        out[k] = value
    return out


def effective_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None and v is not False:
            cfg[key] = v
    return {k: _coerce(k, v) for k, v in cfg.items()}


def _parse_radii(text) -> tuple:
    try:
        radii = tuple(float(v) for v in str(text).split(","))
    except ValueError as exc:
        raise UsageError(f"bad radii {text!r}") from exc
    if not radii or any(not (r > 0 and math.isfinite(r)) for r in radii):
        raise UsageError("radii must be positive")
    return radii


def _dump(obj) -> str:
    def default(o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(type(o).__name__)

    return json.dumps(obj, sort_keys=True, indent=2, default=default) + "\n"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_sample(cfg: dict) -> int:
    m = IsotropicElastic(cfg["G"], cfg["nu"])
    load = PointLoad(cfg["f"])
    grid = GridSpec.parse(cfg["grid"], cfg["exclusion"])
    z, r = grid.points()
    keep = np.hypot(z, r) >= grid.exclusion
    excluded = int(np.count_nonzero(~keep))
    for a, b in zip(z[~keep], r[~keep]):
        log.warning("excluded grid point z=%g r=%g (inside exclusion radius %g)", a, b,
                    grid.exclusion)
    z, r = z[keep], r[keep]
    rows = [z, r]
    if z.size:
        rows += list(kelvin_stress((z, r), load, m).stack())
        rows += list(kelvin_strain((z, r), load, m).stack())
        rows += list(kelvin_displacement((z, r), load, m).stack())
        table = np.column_stack([np.atleast_1d(v) for v in rows]) + 0.0  # no "-0" cells
    else:
        table = np.zeros((0, len(COLUMNS)))
    lines = [",".join(COLUMNS)]
    lines += [",".join("%.16e" % v for v in row) for row in table]
    _write(cfg["out"], "\n".join(lines) + "\n")
    if cfg["report"]:
        _write(cfg["report"], _dump({"command": "sample", "config": cfg,
                                     "rows": int(table.shape[0]), "excluded": excluded}))
    return 0


def cmd_verify(cfg: dict) -> int:
    from kelvin.verify import SUITES, run_suites

    m = IsotropicElastic(cfg["G"], cfg["nu"])
    load = PointLoad(cfg["f"])
    suites = SUITES if cfg["suite"] in ("all", "", None) else tuple(
        s.strip() for s in cfg["suite"].split(",") if s.strip())
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise UsageError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}")
    radii = _parse_radii(cfg["radii"])
    reports = run_suites(suites, load, m, cfg["seed"], radii, cfg["use_paper_printed_signs"])
    ok = all(r.passed for r in reports)
    for r in reports:
        extra = "" if r.passed else f" (failing: {', '.join(r.failing)})"
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: max {r.max_residual:.3e} "
              f"tol {r.tolerance:.1e}{extra}", file=sys.stderr)
    body = {"command": "verify", "config": cfg, "checks": [r.to_dict() for r in reports],
            "pass": ok}
    _write(cfg["report"], _dump(body))
    return 0 if ok else 1


def cmd_derive(cfg: dict) -> int:
    from kelvin.derivation import ConvergenceError, QuadratureError, run_derivation

    IsotropicElastic(cfg["G"], cfg["nu"])
    try:
        rep = run_derivation(cfg["f"], cfg["nu"], cfg["skip_closure"], cfg["seed"])
    except (ConvergenceError, QuadratureError) as exc:
        print(f"FAIL derivation: {exc}", file=sys.stderr)
        _write(cfg["report"], _dump({"command": "derive", "config": cfg, "state": "failed",
                                     "error": str(exc)}))
        return 1
    for s in rep["steps"]:
        print(f"{'PASS' if s['pass'] else 'FAIL'} {s['name']}: {s['residual']:.3e} "
              f"tol {s['tolerance']:.1e}", file=sys.stderr)
    closure = next((s for s in rep["steps"] if s["name"] == "symmetry_closure"), None)
    if closure is not None:
        for key in ("alpha0", "beta0"):
            print(f"{key} = {closure['detail'][key]:.9e} "
                  f"(rel. error {closure['detail'][key + '_rel_error']:.2e})", file=sys.stderr)
    failed = [s["name"] for s in rep["steps"] if not s["pass"]]
    if failed:
        print(f"failed step(s): {', '.join(failed)}", file=sys.stderr)
    print(f"state: {rep['state']}", file=sys.stderr)
    _write(cfg["report"], _dump({"command": "derive", "config": cfg, **rep}))
    return 1 if rep["state"] == "failed" else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    common.add_argument("--f", type=float, help="load magnitude (default 1)")
    common.add_argument("--nu", type=float, help="Poisson ratio (default 0.25)")
    common.add_argument("--G", type=float, help="shear modulus (default 1)")
    common.add_argument("--seed", type=int, help="seed for random sample points (default 0)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--report", help="JSON report file (default stdout for verify/derive)")

    p = argparse.ArgumentParser(prog="kelvin", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="tabulate fields on a (z, r) grid")
    s.add_argument("--grid", help="z=a:b:n,r=c:d:m")
    s.add_argument("--exclusion", type=float, help="skip points with rho below this (1e-3)")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", help="comma-separated suites or 'all'")
    v.add_argument("--radii", help="sphere radii for the traction suite")
    v.add_argument("--use-paper-printed-signs", action="store_true",
                   help="verify the stress with the misprinted (1-2nu) signs instead")

    d = sub.add_parser("derive", parents=[common], help="replay the stress-first derivation")
    d.add_argument("--skip-closure", action="store_true",
                   help="stop before fixing the constants by the axis condition")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    commands = {"sample": cmd_sample, "verify": cmd_verify, "derive": cmd_derive}
    try:
        cfg = effective_config(args)
        return commands[args.command](cfg)
    except (UsageError, MaterialError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
