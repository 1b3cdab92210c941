"""Command-line front end: scenario files, figure presets, sweeps, CSV/JSON output.

Gains are given in dB at this boundary only.  All emitted numbers carry 12
significant digits so repeated runs diff clean.

Scenario file format (flat key = value lines, '#' comments):

    name = my-case
    gamma1_db = 10
    gamma2_db = 15
    gamma3_db = 3
    theta_points = 181          # optional, default 181
    alpha_grid = 33             # optional, default 33
    protocols = outer, mabc     # optional, default: outer bound only
    outputs = ./results         # optional, default '.'
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import achievable
from .core import (
    ZERO_SHARES,
    ChannelGains,
    ValidationError,
    db_to_linear,
    linear_to_db,
    validate_gains,
)
from .lp import SolverError
from .outer import (
    analytic_rb_bound,
    capacity_thresholds,
    one_way_bound,
    one_way_bound_ab,
    outer_ratio_bound,
)
from .region import Region, max_radial_gap, sweep_region, symmetric_rate

SCHEMA_VERSION = 1

PROTOCOL_IDS = ("outer", "outer-analytic", "mabc", "tdbc", "hbc",
                "six-state-df", "six-state", "comabc")

# gamma1, gamma2, gamma3 in dB
PRESETS = {
    "case-a": (10.0, 15.0, 3.0),
    "case-b": (20.0, 20.0, 8.0),
    "case-c": (30.0, 35.0, 13.0),
    "low-snr": (0.0, 5.0, -7.0),
}


@dataclass(frozen=True)
class Scenario:
    name: str
    gamma1_db: float
    gamma2_db: float
    gamma3_db: float
    theta_points: int = 181
    alpha_grid: int = 33
    protocols: tuple[str, ...] = ()
    outputs: str = "."

    def __post_init__(self) -> None:
        for nm in ("gamma1_db", "gamma2_db", "gamma3_db"):
            v = getattr(self, nm)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValidationError(f"{nm} must be finite, got {v!r}")
        if self.theta_points < 3:
            raise ValidationError(f"theta_points must be >= 3, got {self.theta_points}")
        if self.alpha_grid < 2:
            raise ValidationError(f"alpha_grid must be >= 2, got {self.alpha_grid}")
        for p in self.protocols:
            if p not in PROTOCOL_IDS:
                raise ValidationError(
                    f"unknown protocol {p!r}; known: {', '.join(PROTOCOL_IDS)}")

    def gains(self, auto_swap: bool = True) -> ChannelGains:
        return validate_gains(
            db_to_linear(self.gamma1_db),
            db_to_linear(self.gamma2_db),
            db_to_linear(self.gamma3_db),
            auto_swap=auto_swap,
        )


def preset_scenario(name: str, **overrides) -> Scenario:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    g1, g2, g3 = PRESETS[name]
    return Scenario(name=name, gamma1_db=g1, gamma2_db=g2, gamma3_db=g3, **overrides)


_INT_KEYS = ("theta_points", "alpha_grid")
_FLOAT_KEYS = ("gamma1_db", "gamma2_db", "gamma3_db")


def load_scenario(path: str | Path) -> Scenario:
    """Parse a flat key = value scenario file (see the module docstring)."""
    path = Path(path)
    fields: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "name" or key == "outputs":
            fields[key] = value
        elif key in _FLOAT_KEYS:
            try:
                fields[key] = float(value)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: {key} must be a number, got {value!r}")
        elif key in _INT_KEYS:
            try:
                fields[key] = int(value)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: {key} must be an integer, got {value!r}")
        elif key == "protocols":
            fields[key] = tuple(p.strip() for p in value.split(",") if p.strip())
        else:
            raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
    missing = [k for k in ("name", *_FLOAT_KEYS) if k not in fields]
    if missing:
        raise ValidationError(f"{path}: missing required keys: {', '.join(missing)}")
    return Scenario(**fields)


def _zero_point(k: float, rb: float) -> achievable.BoundaryPoint:
    ra = rb if math.isinf(k) else k * rb
    rb_out = 0.0 if math.isinf(k) else rb
    return achievable.BoundaryPoint(ra, rb_out, ZERO_SHARES)


def protocol_evaluator(name: str, gains: ChannelGains, alpha_grid: int = 33):
    """Per-ray evaluator for a protocol or bound identifier."""
    if name == "outer":
        return lambda k: outer_ratio_bound(k, gains)
    if name == "outer-analytic":
        def analytic(k: float):
            if isinstance(k, float) and math.isinf(k):
                return _zero_point(k, one_way_bound_ab(gains))
            if k == 0.0:
                return _zero_point(k, one_way_bound(gains))
            return _zero_point(k, analytic_rb_bound(k, gains))
        return analytic
    if name == "mabc":
        return lambda k: achievable.mabc_boundary(k, gains)
    if name == "tdbc":
        return lambda k: achievable.hbc_boundary(k, gains, tdbc_only=True)
    if name == "hbc":
        return lambda k: achievable.hbc_boundary(k, gains)
    if name == "six-state-df":
        return lambda k: achievable.six_state_df_boundary(k, gains, alpha_grid)
    if name == "six-state":
        return lambda k: achievable.six_state_boundary(k, gains)
    if name == "comabc":
        return lambda k: achievable.comabc_boundary(k, gains)
    raise ValidationError(f"unknown protocol {name!r}")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


_CSV_HEADER = ("theta_deg,k,ra,rb,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6,"
               "active_state_count")


def _region_csv(reg: Region, mirrored: bool) -> str:
    """CSV rows for a swept region, mirrored back to the caller's orientation
    when the gains were relabeled."""
    rows = []
    for theta, p in zip(reg.thetas_deg, reg.points):
        ra, rb = p.ra, p.rb
        shares = getattr(p, "shares", None)
        lams = shares.as_tuple() if shares is not None else (0.0,) * 6
        if mirrored:
            theta = 90.0 - theta
            ra, rb = rb, ra
            lams = (lams[1], lams[0], lams[2], lams[3], lams[5], lams[4])
        k = math.inf if theta == 90.0 else math.tan(math.radians(theta))
        if theta == 45.0:
            k = 1.0
        active = sum(1 for v in lams if v > 1e-7)
        rows.append((theta, k, ra, rb, *lams, active))
    rows.sort(key=lambda r: r[0])
    lines = [_CSV_HEADER]
    for r in rows:
        lines.append(",".join([_fmt(v) for v in r[:-1]] + [str(r[-1])]))
    return "\n".join(lines) + "\n"


def run_compare(scenario: Scenario, auto_swap: bool = True,
                out_dir: str | Path | None = None) -> list[Path]:
    """Sweep the outer bound plus every requested protocol; emit CSVs and a summary.

    Returns the written paths.  Output is deterministic byte-for-byte for
    identical inputs.
    """
    gains = scenario.gains(auto_swap=auto_swap)
    out = Path(out_dir if out_dir is not None else scenario.outputs)
    out.mkdir(parents=True, exist_ok=True)

    names = ["outer"] + [p for p in scenario.protocols if p != "outer"]
    regions: dict[str, Region] = {}
    for name in names:
        ev = protocol_evaluator(name, gains, scenario.alpha_grid)
        regions[name] = sweep_region(ev, gains, scenario.theta_points, label=name)

    written = []
    for name in names:
        path = out / f"{scenario.name}_{name}.csv"
        path.write_text(_region_csv(regions[name], gains.swapped), newline="\n")
        written.append(path)

    outer_reg = regions["outer"]
    summary: dict = {
        "schema_version": SCHEMA_VERSION,
        "scenario": {
            "name": scenario.name,
            "gamma1_db": scenario.gamma1_db,
            "gamma2_db": scenario.gamma2_db,
            "gamma3_db": scenario.gamma3_db,
            "theta_points": scenario.theta_points,
            "alpha_grid": scenario.alpha_grid,
            "auto_swap": bool(auto_swap),
            "swapped": bool(gains.swapped),
        },
        "protocols": {},
    }
    for name in names:
        reg = regions[name]
        gap, _ = max_radial_gap(outer_reg, reg)
        summary["protocols"][name] = {
            "symmetric_rate": _round12(symmetric_rate(reg)),
            "sum_rate_max": _round12(max(p.ra + p.rb for p in reg.points)),
            "max_gap_vs_outer": _round12(gap),
        }
    spath = out / f"{scenario.name}_summary.json"
    spath.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n", newline="\n")
    written.append(spath)
    return written


def _round12(x: float) -> float:
    return float(format(float(x), ".12g"))


def run_thresholds(gamma2_db_range: tuple[float, float, float],
                   c_values, out_path: str | Path) -> Path:
    """Sweep the direct-link capacity threshold over gamma2 for each c = gamma1/gamma2.

    Writes one CSV row (c, gamma2_db, threshold_db) per grid point.
    """
    lo, hi, step = gamma2_db_range
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise ValidationError(f"bad gamma2 dB range: {lo}..{hi}")
    if not (math.isfinite(step) and step > 0.0):
        raise ValidationError(f"range step must be > 0, got {step}")
    c_values = tuple(float(c) for c in c_values)
    for c in c_values:
        if not 0.0 < c <= 1.0:
            raise ValidationError(f"c must lie in (0, 1], got {c}")

    lines = ["c,gamma2_db,threshold_db"]
    for c in c_values:
        db = lo
        while db <= hi + 1e-12:
            g2 = db_to_linear(db)
            g1 = c * g2
            th = capacity_thresholds(ChannelGains(g1, g2, 0.0))
            lines.append(f"{_fmt(c)},{_fmt(db)},{_fmt(linear_to_db(th.operative))}")
            db += step
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text("\n".join(lines) + "\n", newline="\n")
    return out_path


def _scenario_from_args(args, default_protocols=()) -> Scenario:
    overrides: dict = {}
    if args.theta_points is not None:
        overrides["theta_points"] = args.theta_points
    if args.alpha_grid is not None:
        overrides["alpha_grid"] = args.alpha_grid
    if args.scenario:
        sc = load_scenario(args.scenario)
        for key, val in overrides.items():
            sc = Scenario(**{**sc.__dict__, key: val})
        return sc
    if args.preset:
        protocols = overrides.pop("protocols", default_protocols)
        return preset_scenario(args.preset, protocols=tuple(protocols), **overrides)
    raise ValidationError("provide either --scenario FILE or --preset NAME")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="path to a scenario file")
    p.add_argument("--preset", help="named preset: " + ", ".join(PRESETS))
    p.add_argument("--theta-points", type=int, default=None, dest="theta_points")
    p.add_argument("--alpha-grid", type=int, default=None, dest="alpha_grid")
    p.add_argument("--auto-swap", action=argparse.BooleanOptionalAction, default=True,
                   help="relabel terminals so gamma1 <= gamma2 (default on)")
    p.add_argument("--out", default=None, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twrc",
                                 description="Two-way relay channel rate-region toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p_cmp = sub.add_parser("compare", help="sweep the outer bound and protocols")
    _add_common(p_cmp)
    p_cmp.add_argument("--protocols",
                       help="comma-separated protocol ids (default: all protocols)")

    p_out = sub.add_parser("outer", help="sweep the outer bound only")
    _add_common(p_out)

    p_sw = sub.add_parser("sweep", help="sweep a single protocol or bound")
    _add_common(p_sw)
    p_sw.add_argument("--protocol", required=True, choices=PROTOCOL_IDS)

    p_th = sub.add_parser("thresholds", help="direct-link capacity thresholds vs gamma2")
    p_th.add_argument("--gamma2-db", required=True, metavar="LO:HI:STEP",
                      help="gamma2 sweep range in dB, e.g. 0:40:1")
    p_th.add_argument("--c-values", default="1,0.5,0.1",
                      help="comma-separated gamma1/gamma2 ratios in (0, 1]")
    p_th.add_argument("--out", default=".", help="output directory")
    return ap


_ALL_PROTOCOLS = ("mabc", "tdbc", "hbc", "six-state-df", "six-state", "comabc")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            if args.protocols is not None:
                protocols = tuple(p.strip() for p in args.protocols.split(",") if p.strip())
            else:
                protocols = _ALL_PROTOCOLS
            sc = _scenario_from_args(args, default_protocols=protocols)
            if args.scenario and args.protocols is not None:
                sc = Scenario(**{**sc.__dict__, "protocols": protocols})
            paths = run_compare(sc, auto_swap=args.auto_swap, out_dir=args.out)
        elif args.command == "outer":
            sc = _scenario_from_args(args)
            sc = Scenario(**{**sc.__dict__, "protocols": ()})
            paths = run_compare(sc, auto_swap=args.auto_swap, out_dir=args.out)
        elif args.command == "sweep":
            sc = _scenario_from_args(args)
            sc = Scenario(**{**sc.__dict__, "protocols": (args.protocol,)})
            paths = run_compare(sc, auto_swap=args.auto_swap, out_dir=args.out)
        elif args.command == "thresholds":
            try:
                lo, hi, step = (float(v) for v in args.gamma2_db.split(":"))
            except ValueError:
                raise ValidationError(f"--gamma2-db expects LO:HI:STEP, got {args.gamma2_db!r}")
            c_values = [float(c) for c in args.c_values.split(",") if c.strip()]
            out = Path(args.out) / "thresholds.csv"
            paths = [run_thresholds((lo, hi, step), c_values, out)]
        else:  # pragma: no cover
            raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
