"""Command-line front end.

Data goes to stdout (CSV or JSON); provenance and diagnostics go to stderr.
Exit codes: 0 ok, 1 failed validation or I/O error, 2 invalid input,
3 numerical non-convergence, 4 infeasible plan.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import closed_form as cf
from . import planner
from .errors import ConvergenceError, InfeasibleError, ModelError
from .link_model import LinkBudget, MobilityProfile
from .quadrature import QuadratureSpec, quadrature_bound
from .units import InfoQuantity, Unit, convert, parse_quantity

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONVERGENCE, EXIT_INFEASIBLE = 0, 1, 2, 3, 4

# Reference scenario; x0 defaults to the reference distance.
DEFAULTS = {
    "bandwidth": 1e5,
    "noise": 1e-8,
    "ref-distance": 1.0,
    "gain": 1.0,
    "power": 1.0,
    "alpha": 2.0,
    "x0": None,
    "z0": 0.0,
    "speed": 5.0,
    "T": "3600",
    "target": None,
    "unit": "nats",
    "format": "csv",
    "series-max-terms": 100,
    "qtol": 1e-10,
}

_FLOAT_KEYS = ("bandwidth", "noise", "ref-distance", "gain", "power", "alpha", "x0", "z0", "speed", "qtol")


@dataclass(frozen=True)
class RunConfig:
    budget: LinkBudget
    profile: MobilityProfile
    times: tuple
    target: InfoQuantity | None
    unit: Unit
    fmt: str
    series: cf.SeriesOptions
    quadrature: QuadratureSpec
    explicit: frozenset


class UsageError(ModelError):
    pass


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model (defaults: B=1e5 Hz, noise=1e-8 W, d0=1 m, G=1, P=1 W, alpha=2, x0=d0, z0=0, v=5 m/s)")
    g.add_argument("--bandwidth", type=float, metavar="HZ", help="bandwidth B in Hz")
    g.add_argument("--noise", type=float, metavar="W", help="receiver noise power in W")
    g.add_argument("--ref-distance", type=float, metavar="M", help="reference distance d0 in m")
    g.add_argument("--gain", type=float, metavar="X", help="unitless antenna gain G")
    g.add_argument("--power", type=float, metavar="W", help="transmit power P in W")
    g.add_argument("--alpha", type=float, metavar="A", help="path-loss exponent (>= 2)")
    g.add_argument("--x0", type=float, metavar="M", help="initial lateral position in m (default d0)")
    g.add_argument("--z0", type=float, metavar="M", help="constant lateral offset in m")
    g.add_argument("--speed", type=float, metavar="MPS", help="speed v in m/s")
    g.add_argument("--T", metavar="S", help="horizon in s; `finite` accepts a comma list (default 3600)")
    g.add_argument("--target", metavar="AMOUNT", help="data target such as 10MB or 1.96e7nats")
    o = p.add_argument_group("output and numerics")
    o.add_argument("--unit", metavar="U", help="output unit: nats, bits, bytes or MB (default nats)")
    o.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    o.add_argument("--series-max-terms", type=int, metavar="N", help="series term cap (default 100)")
    o.add_argument("--qtol", type=float, metavar="TOL", help="quadrature relative tolerance (default 1e-10)")
    o.add_argument("--config", metavar="PATH", help="JSON file keyed by long flag names; flags override it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    ap = argparse.ArgumentParser(
        prog="datalimit",
        description="Bounds on the total data deliverable to a terminal receding on a straight line.",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    b = sub.add_parser(
        "bound", parents=[common], help="one unlimited-horizon bound with provenance",
        epilog="CSV columns: value_<unit>,formula,terms,trunc_err",
    )
    b.add_argument(
        "--formula", default="auto",
        choices=("auto", "thm1", "lower", "error", "thm2", "cor2", "quadrature"),
        help="auto: general-alpha closed form when z0=0 and x0=d0, alpha=2 offset form otherwise, "
        "quadrature when neither applies",
    )

    sub.add_parser(
        "finite", parents=[common], help="data within finite horizons and its fraction of the total",
        epilog="CSV columns: T,D_T_<unit>,D_inf_<unit>,ratio,formula",
    )

    s = sub.add_parser(
        "sweep", parents=[common], help="grid sweep (default: v in [1,100] x P in [1e-3,100], 50x50 log)",
        epilog="CSV columns: <axis names...>,value_<unit>,formula,trunc_err. "
        f"Axes: {', '.join(planner.AXES)}.",
    )
    s.add_argument("--axis", action="append", default=[], metavar="SPEC",
                   help="name:min:max:count[:log|lin] or name:value; repeat for more axes (first is outermost)")
    s.add_argument("--formula", default="thm1", choices=planner.FORMULAS, help="what to evaluate per point")
    s.add_argument("--spot-check", type=float, metavar="FRACTION",
                   help="compare this fraction of closed-form rows to quadrature; report on stderr")

    p = sub.add_parser(
        "plan", parents=[common], help="solve speed for a given power, or power for a given speed",
        epilog="CSV columns: power_w,speed_mps,target_<unit>,solved. Giving --speed (and not --power) "
        "solves for power; otherwise speed is solved at --power.",
    )
    p.add_argument("--curve", action="store_true", help="sample the admissible (P, v) curve instead")
    p.add_argument("--p-min", type=float, default=1e-3, help="curve: smallest power in W")
    p.add_argument("--p-max", type=float, default=100.0, help="curve: largest power in W")
    p.add_argument("--points", type=int, default=50, help="curve: number of log-spaced powers")

    v = sub.add_parser(
        "validate", parents=[common], help="closed form vs quadrature pass/fail table",
        epilog="CSV columns: check,deviation,tolerance,status",
    )
    v.add_argument("--check", action="append", default=[], metavar="NAME",
                   help="run only the named check (repeatable)")
    return ap


def _load_config(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise UsageError(f"config {path}: unknown keys {unknown}; keys must match long flag names")
    return data


def resolve(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, optional config file and flags (in increasing precedence)."""
    values = dict(DEFAULTS)
    explicit = set()
    if args.config:
        cfg = _load_config(args.config)
        values.update(cfg)
        explicit.update(cfg)
    for key in DEFAULTS:
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            values[key] = val
            explicit.add(key)
    for key in _FLOAT_KEYS:
        if values[key] is not None:
            try:
                values[key] = float(values[key])
            except (TypeError, ValueError):
                raise UsageError(f"--{key}: expected a number, got {values[key]!r}") from None
    budget = _field("model", LinkBudget, bandwidth_hz=values["bandwidth"], noise_power_w=values["noise"],
                    ref_distance_m=values["ref-distance"], antenna_gain=values["gain"],
                    tx_power_w=values["power"], path_loss_exp=values["alpha"])
    x0 = values["x0"] if values["x0"] is not None else budget.ref_distance_m
    profile = _field("trajectory", MobilityProfile, x0_m=x0, z0_m=values["z0"], speed_mps=values["speed"])
    try:
        times = tuple(float(t) for t in str(values["T"]).split(","))
    except ValueError:
        raise UsageError(f"--T: expected a number or comma list, got {values['T']!r}") from None
    target = parse_quantity(str(values["target"])) if values["target"] is not None else None
    series = _field("series", cf.SeriesOptions, max_terms=int(values["series-max-terms"]))
    quad = _field("quadrature", QuadratureSpec, rel_tol=values["qtol"])
    return RunConfig(budget, profile, times, target, Unit.parse(values["unit"]), values["format"],
                     series, quad, frozenset(explicit))


def _field(what, cls, **kwargs):
    try:
        return cls(**kwargs)
    except ModelError as exc:
        raise UsageError(f"invalid {what} parameters: {exc}") from None


# --------------------------------------------------------------------------
# output


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit(rows, fieldnames, fmt="csv", stream=None) -> None:
    """Write ``rows`` (dicts) as CSV with a header, or as a JSON array of objects."""
    stream = sys.stdout if stream is None else stream
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt(row[k]) for k in fieldnames])
    elif fmt == "json":
        if not rows:
            stream.write("[]\n")
            return
        stream.write("[\n")
        for i, row in enumerate(rows):
            tail = ",\n" if i + 1 < len(rows) else "\n"
            stream.write(json.dumps({k: row[k] for k in fieldnames}) + tail)
        stream.write("]\n")
    else:
        raise UsageError(f"unknown output format {fmt!r}")
    stream.flush()


def _note(msg):
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# subcommands


def _bound_result(cfg: RunConfig, formula: str):
    b, p = cfg.budget, cfg.profile
    if formula == "auto":
        if p.z0_m == 0 and p.x0_m == b.ref_distance_m:
            formula = "thm1"
        elif b.path_loss_exp == 2:
            formula = "thm2"
        else:
            formula = "quadrature"
            _note("no closed form for this geometry; using the quadrature oracle")
    if formula == "quadrature":
        return quadrature_bound(b, p, None, cfg.quadrature)
    return planner.evaluate_formula(formula, b, p, None, cfg.series, cfg.quadrature)


def cmd_bound(cfg, args):
    try:
        res = _bound_result(cfg, args.formula)
    except cf.HypothesisError as exc:
        raise UsageError(f"{exc} (pass --formula quadrature)") from None
    _note(f"formula={res.formula.value} S={cfg.budget.snr0!r} alpha={cfg.budget.path_loss_exp!r} "
          f"v={cfg.profile.speed_mps!r} terms={res.series_terms_used}")
    col = f"value_{cfg.unit.value}"
    scale = convert(InfoQuantity(1.0), cfg.unit)
    row = {col: res.to(cfg.unit), "formula": res.formula.value, "terms": res.series_terms_used,
           "trunc_err": res.truncation_error_nats * scale}
    emit([row], [col, "formula", "terms", "trunc_err"], cfg.fmt)
    return EXIT_OK


def cmd_finite(cfg, args):
    total = planner.infinite_horizon(cfg.budget, cfg.profile, cfg.series, cfg.quadrature)
    points = planner.finite_time_curve(cfg.budget, cfg.profile, cfg.times, cfg.series, cfg.quadrature)
    formula = "ClosedFiniteAlpha2" if cfg.budget.path_loss_exp == 2 else "Quadrature"
    _note(f"finite={formula} total={total.formula.value}")
    u = cfg.unit.value
    rows = [
        {"T": pt.T, f"D_T_{u}": convert(InfoQuantity(pt.data_nats), cfg.unit),
         f"D_inf_{u}": total.to(cfg.unit), "ratio": pt.ratio, "formula": formula}
        for pt in points
    ]
    emit(rows, ["T", f"D_T_{u}", f"D_inf_{u}", "ratio", "formula"], cfg.fmt)
    return EXIT_OK


def cmd_sweep(cfg, args):
    common = dict(formula=args.formula, unit=cfg.unit, budget=cfg.budget, profile=cfg.profile,
                  T=cfg.times[-1], series=cfg.series, quadrature=cfg.quadrature)
    if args.axis:
        spec = planner.SweepSpec(axes=tuple(planner.Axis.parse(a) for a in args.axis), **common)
    else:
        spec = planner.default_grid_spec(**common)
    rows = planner.sweep(spec)
    flagged = sum(r.flagged for r in rows)
    if flagged:
        _note(f"{flagged} of {len(rows)} rows fell back to quadrature or are invalid")
    if args.spot_check:
        _note(f"spot-check max relative deviation: {planner.spot_check(spec, rows, args.spot_check)!r}")
    fields = [a.name for a in spec.axes] + [f"value_{cfg.unit.value}", "formula", "trunc_err"]
    emit([r.as_dict(cfg.unit) for r in rows], fields, cfg.fmt)
    return EXIT_OK


def cmd_plan(cfg, args):
    if cfg.target is None:
        raise UsageError("plan needs --target, e.g. --target 10MB")
    b = cfg.budget
    base = dict(alpha=b.path_loss_exp, bandwidth_hz=b.bandwidth_hz, noise_power_w=b.noise_power_w,
                ref_distance_m=b.ref_distance_m, antenna_gain=b.antenna_gain)
    col = f"target_{cfg.unit.value}"
    tgt = cfg.target.to(cfg.unit)
    fields = ["power_w", "speed_mps", col, "solved"]
    if args.curve:
        if not (0 < args.p_min < args.p_max) or args.points < 2:
            raise UsageError("curve needs 0 < --p-min < --p-max and --points >= 2")
        powers = planner.Axis("P", args.p_min, args.p_max, args.points, log=True).values()
        q = planner.PlanQuery(cfg.target, fixed_power_w=powers[0], **base)
        pts = planner.admissible_curve(q, powers, cfg.series)
        emit([{"power_w": P, "speed_mps": v, col: tgt, "solved": "speed"} for P, v in pts], fields, cfg.fmt)
        return EXIT_OK
    if "speed" in cfg.explicit and "power" in cfg.explicit:
        raise UsageError("plan: give --power (to solve speed) or --speed (to solve power), not both")
    if "speed" in cfg.explicit:
        q = planner.PlanQuery(cfg.target, fixed_speed_mps=cfg.profile.speed_mps, **base)
        row = {"power_w": planner.solve_power(q, cfg.series), "speed_mps": q.fixed_speed_mps,
               col: tgt, "solved": "power"}
    else:
        q = planner.PlanQuery(cfg.target, fixed_power_w=b.tx_power_w, **base)
        row = {"power_w": q.fixed_power_w, "speed_mps": planner.solve_speed(q, cfg.series),
               col: tgt, "solved": "speed"}
    emit([row], fields, cfg.fmt)
    return EXIT_OK


def cmd_validate(cfg, args):
    from .validation import CHECKS, run_checks

    unknown = [n for n in args.check if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; available: {', '.join(CHECKS)}")
    results = run_checks(args.check or None)
    rows = [{"check": c.name, "deviation": float(c.deviation), "tolerance": float(c.tolerance),
             "status": "PASS" if c.passed else "FAIL"} for c in results]
    emit(rows, ["check", "deviation", "tolerance", "status"], cfg.fmt)
    return EXIT_OK if all(c.passed for c in results) else EXIT_FAIL


COMMANDS = {
    "bound": cmd_bound,
    "finite": cmd_finite,
    "sweep": cmd_sweep,
    "plan": cmd_plan,
    "validate": cmd_validate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg, args)
    except InfeasibleError as exc:
        _note(f"infeasible: {exc}")
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        _note(f"no convergence: {exc} (best estimate {exc.value!r} +/- {exc.error!r})")
        return EXIT_CONVERGENCE
    except ModelError as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_FAIL
    except OSError as exc:
        _note(f"I/O error: {exc}")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
