"""Design inversion and parameter sweeps built on the bounds."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from scipy.optimize import brentq

from . import closed_form as cf
from .closed_form import DEFAULT_SERIES, BoundResult, FormulaTag, SeriesOptions
from .errors import ConvergenceError, HypothesisError, InfeasibleError, ModelError
from .link_model import LinkBudget, MobilityProfile
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec, integrate_finite, integrate_infinite, quadrature_bound
from .units import InfoQuantity, Unit, convert


# --------------------------------------------------------------------------
# inversion


@dataclass(frozen=True)
class PlanQuery:
    """Find the speed for a fixed power, or the power for a fixed speed,
    that delivers ``target`` with ``z0 = 0``, ``x0 = d0``."""

    target: InfoQuantity
    fixed_power_w: float | None = None
    fixed_speed_mps: float | None = None
    alpha: float = 2.0
    bandwidth_hz: float = 1e5
    noise_power_w: float = 1e-8
    ref_distance_m: float = 1.0
    antenna_gain: float = 1.0

    def __post_init__(self):
        if (self.fixed_power_w is None) == (self.fixed_speed_mps is None):
            raise ModelError("exactly one of fixed_power_w / fixed_speed_mps must be given")
        if not self.target.value_nats > 0:
            raise ModelError("planning target must be > 0")

    def budget(self, power_w: float = 1.0) -> LinkBudget:
        return LinkBudget(
            bandwidth_hz=self.bandwidth_hz,
            noise_power_w=self.noise_power_w,
            ref_distance_m=self.ref_distance_m,
            antenna_gain=self.antenna_gain,
            tx_power_w=power_w,
            path_loss_exp=self.alpha,
        )


def solve_speed(query: PlanQuery, opts: SeriesOptions = DEFAULT_SERIES) -> float:
    """Speed at which the fixed power delivers exactly the target (explicit, D ~ 1/v)."""
    if query.fixed_power_w is None:
        raise ModelError("solve_speed needs fixed_power_w")
    budget = query.budget(query.fixed_power_w)
    c, _ = cf.shannon_factor(_snr_checked(budget), budget.path_loss_exp, opts)
    return budget.bandwidth_hz * budget.ref_distance_m * c / query.target.value_nats


def _snr_checked(budget):
    S = budget.snr0
    if not S > 1:
        raise HypothesisError(f"planning inverts the closed form, which needs S > 1 (got S={S!r})")
    return S


def infimum_factor(alpha: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Limit of ``C(S, alpha)`` as ``S -> 1+``: ``int_1^inf ln(1 + x**-alpha) dx``.

    Evaluated by quadrature, since the series converges too slowly at S = 1.
    """
    budget = LinkBudget(bandwidth_hz=1.0, noise_power_w=1.0, tx_power_w=1.0, path_loss_exp=alpha)
    return integrate_infinite(budget, MobilityProfile(x0_m=1.0, z0_m=0.0, speed_mps=1.0), spec).value


def solve_power(
    query: PlanQuery,
    opts: SeriesOptions = DEFAULT_SERIES,
    rtol: float = 1e-12,
    max_decades: int = 300,
) -> float:
    """Transmit power at which the fixed speed delivers exactly the target.

    ``C(S, alpha)`` increases strictly with S, so the root is bracketed and
    found with Brent's method on S.
    """
    v = query.fixed_speed_mps
    if v is None:
        raise ModelError("solve_power needs fixed_speed_mps")
    if not (math.isfinite(v) and v > 0):
        raise ModelError(f"speed must be finite and > 0, got {v!r}")
    alpha = query.alpha
    need = query.target.value_nats * v / (query.bandwidth_hz * query.ref_distance_m)
    floor = infimum_factor(alpha)
    if need <= floor:
        raise InfeasibleError(
            f"target {query.target.value_nats!r} nats is at or below the S -> 1+ infimum "
            f"{floor * query.bandwidth_hz * query.ref_distance_m / v!r} nats at this speed; "
            "no power with S > 1 achieves it"
        )

    def g(S):
        return cf.shannon_factor(S, alpha, opts)[0] - need

    lo = 1.0 + 1e-12
    if g(lo) >= 0:
        raise InfeasibleError("target lies within the truncation error of the series near S = 1")
    hi = 10.0
    for _ in range(max_decades):
        if g(hi) >= 0:
            break
        lo, hi = hi, hi * 10.0
    else:
        raise ConvergenceError("could not bracket the transmit SNR for the target")
    S = brentq(g, lo, hi, xtol=1e-300, rtol=rtol, maxiter=500)
    return query.budget().power_for_snr(S)


def admissible_curve(query: PlanQuery, powers: Sequence[float], opts: SeriesOptions = DEFAULT_SERIES):
    """Sample the level set ``{(P, v) : D = target}`` as ``[(P, v), ...]``."""
    out = []
    for p in powers:
        q = PlanQuery(
            query.target, fixed_power_w=p, alpha=query.alpha, bandwidth_hz=query.bandwidth_hz,
            noise_power_w=query.noise_power_w, ref_distance_m=query.ref_distance_m,
            antenna_gain=query.antenna_gain,
        )
        out.append((p, solve_speed(q, opts)))
    return out


# --------------------------------------------------------------------------
# finite horizons


class FinitePoint(NamedTuple):
    T: float
    data_nats: float
    ratio: float


def _is_line_start(budget, profile):
    return profile.z0_m == 0 and profile.x0_m == budget.ref_distance_m


def infinite_horizon(
    budget: LinkBudget,
    profile: MobilityProfile,
    opts: SeriesOptions = DEFAULT_SERIES,
    qspec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> BoundResult:
    """Best available evaluation of the unlimited-horizon total for this geometry."""
    if budget.path_loss_exp == 2 and profile.x0_m >= budget.ref_distance_m:
        return cf.d_inf_2(budget, profile)
    if _is_line_start(budget, profile) and budget.snr0 > 1:
        return cf.d_inf_1(budget, profile.speed_mps, opts)
    return quadrature_bound(budget, profile, None, qspec)


def finite_horizon(
    budget: LinkBudget, profile: MobilityProfile, T: float, qspec: QuadratureSpec = DEFAULT_QUADRATURE
) -> BoundResult:
    if budget.path_loss_exp == 2:
        return cf.d_t_closed_alpha2(budget, profile, T)
    return quadrature_bound(budget, profile, T, qspec)


def finite_time_curve(
    budget: LinkBudget,
    profile: MobilityProfile,
    times: Sequence[float],
    opts: SeriesOptions = DEFAULT_SERIES,
    qspec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> list[FinitePoint]:
    """``(T, D_T, D_T / D_inf)`` for ascending, non-negative ``times``."""
    prev = 0.0
    for t in times:
        if not (t >= 0 and math.isfinite(t)):
            raise ModelError(f"times must be finite and >= 0, got {t!r}")
        if t < prev:
            raise ModelError("times must be ascending")
        prev = t
    total = infinite_horizon(budget, profile, opts, qspec).nats
    out = []
    best = 0.0
    for t in times:
        d = finite_horizon(budget, profile, t, qspec).nats
        # clamp rounding-level excursions so the curve stays a monotone fraction
        ratio = min(max(d / total, best), 1.0)
        best = ratio
        out.append(FinitePoint(t, d, ratio))
    return out


def time_to_ratio(
    budget: LinkBudget,
    profile: MobilityProfile,
    ratio: float,
    opts: SeriesOptions = DEFAULT_SERIES,
    qspec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Horizon T at which ``D_T / D_inf`` first reaches ``ratio``."""
    if not 0 < ratio < 1:
        raise ModelError(f"ratio must lie in (0, 1), got {ratio!r}")
    total = infinite_horizon(budget, profile, opts, qspec).nats

    def g(t):
        return finite_horizon(budget, profile, t, qspec).nats / total - ratio

    hi = 1.0
    while g(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("ratio not reached at any representable horizon")
    return brentq(g, 0.0, hi, xtol=1e-300, rtol=1e-12, maxiter=500)


# --------------------------------------------------------------------------
# sweeps

# axis name -> (object, field)
AXES = {
    "P": ("budget", "tx_power_w"),
    "v": ("profile", "speed_mps"),
    "alpha": ("budget", "path_loss_exp"),
    "z0": ("profile", "z0_m"),
    "x0": ("profile", "x0_m"),
    "B": ("budget", "bandwidth_hz"),
    "sigma2": ("budget", "noise_power_w"),
    "d0": ("budget", "ref_distance_m"),
    "G": ("budget", "antenna_gain"),
    "S": (None, None),
    "T": (None, None),
}

FORMULAS = ("thm1", "lower", "error", "thm2", "cor2", "finite", "quadrature")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int
    log: bool = False

    def __post_init__(self):
        if self.name not in AXES:
            raise ModelError(f"unknown sweep axis {self.name!r}; expected one of {', '.join(AXES)}")
        if self.count < 1:
            raise ModelError(f"axis {self.name}: count must be >= 1")
        if self.count >= 2 and not self.lo < self.hi:
            raise ModelError(f"axis {self.name}: min must be < max")
        if self.log and not self.lo > 0:
            raise ModelError(f"axis {self.name}: log spacing needs min > 0")

    def values(self) -> list[float]:
        if self.count == 1:
            return [float(self.lo)]
        n = self.count - 1
        if self.log:
            a, b = math.log10(self.lo), math.log10(self.hi)
            vals = [10.0 ** (a + (b - a) * i / n) for i in range(self.count)]
        else:
            vals = [self.lo + (self.hi - self.lo) * i / n for i in range(self.count)]
        # pin the end points exactly
        vals[0], vals[-1] = float(self.lo), float(self.hi)
        return vals

    @classmethod
    def parse(cls, text: str) -> Axis:
        """``name:min:max:count[:log|lin]``, or ``name:value`` for a single point."""
        parts = text.split(":")
        try:
            if len(parts) == 2:
                return cls(parts[0], float(parts[1]), float(parts[1]), 1)
            if len(parts) in (4, 5):
                spacing = parts[4].lower() if len(parts) == 5 else "lin"
                if spacing not in ("log", "lin", "linear"):
                    raise ModelError(f"axis spacing must be log or lin, got {parts[4]!r}")
                return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]), spacing == "log")
        except ValueError as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"cannot parse axis {text!r}: {exc}") from None
        raise ModelError(f"cannot parse axis {text!r}; expected name:min:max:count[:log|lin]")


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    formula: str = "thm1"
    unit: Unit = Unit.NATS
    budget: LinkBudget = field(default_factory=LinkBudget)
    profile: MobilityProfile = field(default_factory=MobilityProfile)
    T: float = 3600.0
    series: SeriesOptions = DEFAULT_SERIES
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise ModelError(f"unknown formula {self.formula!r}; expected one of {', '.join(FORMULAS)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ModelError("sweep axes must be distinct")
        if "S" in names and "P" in names:
            raise ModelError("sweep axes S and P both set the transmit power; use one")
        object.__setattr__(self, "unit", Unit.parse(self.unit))


@dataclass(frozen=True)
class SweepRow:
    coords: dict
    value: float
    formula: str
    truncation_error: float
    flagged: bool = False

    def as_dict(self, unit: Unit) -> dict:
        out = dict(self.coords)
        out[f"value_{Unit.parse(unit).value}"] = self.value
        out["formula"] = self.formula
        out["trunc_err"] = self.truncation_error
        return out


def _point_model(spec: SweepSpec, coords: dict):
    budget_changes, profile_changes = {}, {}
    T = spec.T
    for name, val in coords.items():
        target, attr = AXES[name]
        if target == "budget":
            budget_changes[attr] = val
        elif target == "profile":
            profile_changes[attr] = val
        elif name == "T":
            T = val
    budget = spec.budget.replace(**budget_changes)
    if "S" in coords:
        budget = budget.replace(tx_power_w=budget.power_for_snr(coords["S"]))
    if profile_changes.get("x0_m") is None and "d0" in coords:
        # keep the line-start geometry when only d0 moves
        if spec.profile.x0_m == spec.budget.ref_distance_m:
            profile_changes["x0_m"] = budget.ref_distance_m
    profile = spec.profile.replace(**profile_changes)
    return budget, profile, T


def evaluate_formula(formula, budget, profile, T, series=DEFAULT_SERIES, qspec=DEFAULT_QUADRATURE) -> BoundResult:
    """Evaluate one named formula at one model point."""
    v = profile.speed_mps
    if formula == "thm1":
        return cf.d_inf_1(budget, v, series)
    if formula == "lower":
        return cf.d_inf_1_lower(budget, v)
    if formula == "error":
        return cf.approx_error_result(budget, v, series)
    if formula == "thm2":
        return cf.d_inf_2(budget, profile)
    if formula == "cor2":
        return cf.d_inf_3(budget, v)
    if formula == "finite":
        return finite_horizon(budget, profile, T, qspec)
    if formula == "quadrature":
        return quadrature_bound(budget, profile, None, qspec)
    raise ModelError(f"unknown formula {formula!r}")


def _fallback(formula, budget, profile, T, qspec):
    """Oracle value for a point where the requested closed form does not apply."""
    if formula in ("thm1", "lower", "cor2"):
        profile = profile.replace(x0_m=budget.ref_distance_m, z0_m=0.0)
    elif formula == "error":
        raise HypothesisError("approximation error has no oracle counterpart outside S > 1")
    return quadrature_bound(budget, profile, T if formula == "finite" else None, qspec)


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the formula over the Cartesian grid, first axis outermost.

    Points that violate the formula's hypothesis fall back to the quadrature
    oracle and are flagged; points outside the model altogether yield NaN.
    """
    names = [a.name for a in spec.axes]
    rows = []
    for combo in itertools.product(*(a.values() for a in spec.axes)):
        coords = dict(zip(names, combo))
        flagged = False
        try:
            budget, profile, T = _point_model(spec, coords)
            try:
                res = evaluate_formula(spec.formula, budget, profile, T, spec.series, spec.quadrature)
            except HypothesisError:
                flagged = True
                res = _fallback(spec.formula, budget, profile, T, spec.quadrature)
        except (ModelError, ConvergenceError):
            rows.append(SweepRow(coords, math.nan, "Invalid", math.nan, True))
            continue
        rows.append(
            SweepRow(
                coords,
                convert(res.amount, spec.unit),
                res.formula.value,
                res.truncation_error_nats / _unit_scale(spec.unit),
                flagged,
            )
        )
    return rows


def _unit_scale(unit):
    return 1.0 / convert(InfoQuantity(1.0), unit)


def spot_check(spec: SweepSpec, rows: Sequence[SweepRow], fraction: float = 0.01, seed: int = 0) -> float:
    """Max relative deviation between closed-form rows and the quadrature oracle
    on a random subsample of at least one row."""
    candidates = [r for r in rows if r.formula not in ("Quadrature", "Invalid", "Cor1Lower", "Cor1Error")]
    if not candidates:
        return 0.0
    k = max(1, round(fraction * len(candidates)))
    rng = random.Random(seed)
    worst = 0.0
    for row in rng.sample(candidates, k):
        budget, profile, T = _point_model(spec, row.coords)
        if row.formula in ("Thm1", "Cor2"):
            profile = profile.replace(x0_m=budget.ref_distance_m, z0_m=0.0)
        if row.formula == "ClosedFiniteAlpha2":
            ref = integrate_finite(budget, profile, T, spec.quadrature).value
        else:
            ref = integrate_infinite(budget, profile, spec.quadrature).value
        got = row.value * _unit_scale(spec.unit)
        worst = max(worst, abs(got - ref) / abs(ref))
    return worst


def default_grid_spec(**overrides) -> SweepSpec:
    """Speed/power grid: v in [1, 100] and P in [1e-3, 100], 50 log-spaced points each."""
    axes = (Axis("v", 1.0, 100.0, 50, log=True), Axis("P", 1e-3, 100.0, 50, log=True))
    return SweepSpec(axes=axes, **overrides)
