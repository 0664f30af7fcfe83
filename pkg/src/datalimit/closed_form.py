"""Closed-form bounds on the data a receding terminal can deliver.

All functions return nats. Infinite-horizon results carry a ``B/v``
prefactor, so they scale exactly as ``1/v`` and linearly in ``B``.

Summary of the formulas (``S`` = transmit SNR, ``a`` = path-loss exponent,
``Sigma(S, a) = sum_{n>=1} (-1)**(n+1) / (S**n (a n + 1))``):

* general ``a``, ``z0 = 0``, ``x0 = d0``::

      D = (B d0 / v) (pi S**(1/a) csc(pi/a) - ln(1+S) + a Sigma - a)

  and dropping ``a Sigma`` gives a lower bound whose gap is bounded by
  ``(B d0 a / v)(1 - sqrt(S) atan(1/sqrt(S))) <= (B d0 a / v)(1 - pi/4)``.
* ``a = 2`` with offset ``z0`` and ``eps = z0**2 + S d0**2``: the remaining
  data beyond lateral position ``x`` is::

      (B/v) [2 sqrt(eps) atan(sqrt(eps)/x) - 2 z0 atan(z0/x)
             - x ln(1 + S d0**2 / (x**2 + z0**2))]
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from . import _backend
from .errors import HypothesisError, ModelError
from .link_model import LinkBudget, MobilityProfile, check_pair
from .units import InfoQuantity


class FormulaTag(str, Enum):
    THM1 = "Thm1"
    COR1_LOWER = "Cor1Lower"
    COR1_ERROR = "Cor1Error"
    THM2 = "Thm2"
    COR2 = "Cor2"
    CLOSED_FINITE_ALPHA2 = "ClosedFiniteAlpha2"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class SeriesOptions:
    """Truncation policy for the alternating series.

    Summation stops after ``max_terms`` terms, or earlier once the next term
    drops below ``min(target_abs_error, target_rel_error * first_term)``.
    """

    max_terms: int = 100
    target_abs_error: float = 1e-15
    target_rel_error: float = 2.0**-53

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ModelError(f"max_terms must be an integer >= 1, got {self.max_terms!r}")
        if not self.target_abs_error > 0:
            raise ModelError(f"target_abs_error must be > 0, got {self.target_abs_error!r}")
        if not self.target_rel_error >= 0:
            raise ModelError(f"target_rel_error must be >= 0, got {self.target_rel_error!r}")


DEFAULT_SERIES = SeriesOptions()


@dataclass(frozen=True)
class BoundResult:
    amount: InfoQuantity
    formula: FormulaTag
    series_terms_used: int = 0
    truncation_error_nats: float = 0.0

    @property
    def nats(self) -> float:
        return self.amount.value_nats

    def to(self, unit) -> float:
        return self.amount.to(unit)


class SeriesSum(NamedTuple):
    value: float
    remainder_bound: float
    terms_used: int


def _require_snr_above_one(S):
    if not S > 1:
        raise HypothesisError(
            f"closed form requires transmit SNR S > 1 (got S={S!r}); "
            "evaluate with the quadrature oracle instead"
        )


def _require_alpha2(budget):
    if budget.path_loss_exp != 2:
        raise HypothesisError(
            f"closed form requires path-loss exponent alpha == 2, got {budget.path_loss_exp!r}"
        )


def _require_speed(v):
    if not (math.isfinite(v) and v > 0):
        raise ModelError(f"speed must be finite and > 0, got {v!r}")


def series_sum(S: float, alpha: float, opts: SeriesOptions = DEFAULT_SERIES) -> SeriesSum:
    """Partial sum of ``(-1)**(n+1) / (S**n (alpha n + 1))`` with its remainder bound.

    Terms alternate and shrink for ``S > 1``, so the first omitted term
    bounds the truncation error.
    """
    _require_snr_above_one(S)
    if not (math.isfinite(alpha) and alpha >= 2):
        raise ModelError(f"alpha must be finite and >= 2, got {alpha!r}")
    first = 1.0 / (S * (alpha + 1.0))
    target = min(opts.target_abs_error, opts.target_rel_error * first)
    if target <= 0:
        target = opts.target_abs_error if opts.target_rel_error == 0 else 5e-324
    value, rem, n = _backend.alternating_series(float(S), float(alpha), int(opts.max_terms), target)
    return SeriesSum(value, rem, n)


def shannon_factor(S: float, alpha: float, opts: SeriesOptions = DEFAULT_SERIES) -> tuple[float, SeriesSum]:
    """Dimensionless bracket ``C(S, alpha)`` such that ``D = (B d0 / v) C``."""
    ser = series_sum(S, alpha, opts)
    c = (
        math.pi * S ** (1.0 / alpha) / math.sin(math.pi / alpha)
        - math.log1p(S)
        + alpha * ser.value
        - alpha
    )
    return c, ser


def _infinite_horizon_inputs(budget, v):
    _require_speed(v)
    S = budget.snr0
    _require_snr_above_one(S)
    return S, budget.path_loss_exp, budget.bandwidth_hz * budget.ref_distance_m


def d_inf_1(budget: LinkBudget, v: float, opts: SeriesOptions = DEFAULT_SERIES) -> BoundResult:
    """Total data for ``z0 = 0``, ``x0 = d0`` and any ``alpha >= 2`` as T grows without limit."""
    S, alpha, bd0 = _infinite_horizon_inputs(budget, v)
    c, ser = shannon_factor(S, alpha, opts)
    return BoundResult(
        InfoQuantity(bd0 * c / v),
        FormulaTag.THM1,
        ser.terms_used,
        bd0 * alpha * ser.remainder_bound / v,
    )


def d_inf_1_lower(budget: LinkBudget, v: float) -> BoundResult:
    """Series-free lower bound on :func:`d_inf_1`.

    The bracket goes negative for S close to 1 with large alpha; zero is
    returned there, which is still a valid lower bound.
    """
    S, alpha, bd0 = _infinite_horizon_inputs(budget, v)
    c = math.pi * S ** (1.0 / alpha) / math.sin(math.pi / alpha) - math.log1p(S) - alpha
    return BoundResult(InfoQuantity(max(bd0 * c / v, 0.0)), FormulaTag.COR1_LOWER)


def d_inf_1_lower_raw(budget: LinkBudget, v: float) -> float:
    """Unclamped lower-bound expression in nats (may be negative)."""
    S, alpha, bd0 = _infinite_horizon_inputs(budget, v)
    c = math.pi * S ** (1.0 / alpha) / math.sin(math.pi / alpha) - math.log1p(S) - alpha
    return bd0 * c / v


def approx_error(budget: LinkBudget, v: float, opts: SeriesOptions = DEFAULT_SERIES) -> float:
    """Gap between :func:`d_inf_1` and its lower bound, ``(B d0 alpha / v) Sigma``."""
    S, alpha, bd0 = _infinite_horizon_inputs(budget, v)
    return bd0 * alpha * series_sum(S, alpha, opts).value / v


def approx_error_result(budget: LinkBudget, v: float, opts: SeriesOptions = DEFAULT_SERIES) -> BoundResult:
    S, alpha, bd0 = _infinite_horizon_inputs(budget, v)
    ser = series_sum(S, alpha, opts)
    return BoundResult(
        InfoQuantity(bd0 * alpha * ser.value / v),
        FormulaTag.COR1_ERROR,
        ser.terms_used,
        bd0 * alpha * ser.remainder_bound / v,
    )


def one_minus_sqrt_atan(S: float) -> float:
    """``1 - sqrt(S) atan(1/sqrt(S))`` without cancellation, for ``S >= 1``.

    Uses Euler's transformation of the arctangent series. With
    ``w = 1/(1+S)`` the quantity equals ``w * sum_m c_m w**m / (2m + 3)``,
    ``c_0 = 1``, ``c_m = c_{m-1} 2m/(2m+1)``: all terms positive, ratio <= 1/2.
    """
    if not S >= 1:
        raise ModelError(f"requires S >= 1, got {S!r}")
    if math.isinf(S):
        return 0.0
    w = 1.0 / (1.0 + S)
    total = 0.0
    coef = 1.0
    wm = 1.0
    m = 0
    while True:
        term = coef * wm / (2 * m + 3)
        total += term
        if term <= 1e-17 * total:
            break
        m += 1
        coef *= 2.0 * m / (2.0 * m + 1.0)
        wm *= w
    return w * total


def error_envelope(budget: LinkBudget, v: float) -> tuple[float, float]:
    """``(tight, loose)`` upper bounds on :func:`approx_error`.

    ``S = 1`` is accepted as the boundary value (both bounds coincide there).
    """
    _require_speed(v)
    S = budget.snr0
    if not S >= 1:
        raise HypothesisError(f"error envelope requires transmit SNR S >= 1, got S={S!r}")
    scale = budget.bandwidth_hz * budget.ref_distance_m * budget.path_loss_exp / v
    return scale * one_minus_sqrt_atan(S), scale * (1.0 - math.pi / 4.0)


def log_antiderivative(x: float, a: float) -> float:
    """Antiderivative of ``ln(x**2 + a)``: ``x (ln(x**2 + a) - 2) + 2 sqrt(a) atan(x / sqrt(a))``."""
    if not a > 0:
        raise ModelError(f"log_antiderivative requires a > 0, got {a!r}")
    r = math.sqrt(a)
    return x * (math.log(x * x + a) - 2.0) + 2.0 * r * math.atan(x / r)


def _alpha2_remaining(S, d0, z0, x):
    """Position integral of ``ln(1 + S d0**2 / (z0**2 + u**2))`` over ``u`` in ``[x, inf)``."""
    gamma = S * d0 * d0
    r = math.sqrt(z0 * z0 + gamma)
    if math.isinf(x):
        return 0.0
    if x == 0.0:
        # atan(r/x) -> pi/2; z0 > 0 is guaranteed by the distance check
        return math.pi * (r - z0)
    tail = 2.0 * r * math.atan(r / x) - x * math.log1p(gamma / (x * x + z0 * z0))
    if z0 != 0.0:
        tail -= 2.0 * z0 * math.atan(z0 / x)
    return tail


def d_inf_2(budget: LinkBudget, profile: MobilityProfile) -> BoundResult:
    """Total data for ``alpha = 2`` with lateral offset ``z0`` and ``x0 >= d0``."""
    _require_alpha2(budget)
    check_pair(budget, profile)
    if profile.x0_m < budget.ref_distance_m:
        raise HypothesisError(
            f"closed form requires x0 >= d0 (got x0={profile.x0_m!r}, d0={budget.ref_distance_m!r})"
        )
    rem = _alpha2_remaining(budget.snr0, budget.ref_distance_m, profile.z0_m, profile.x0_m)
    return BoundResult(InfoQuantity(budget.bandwidth_hz * rem / profile.speed_mps), FormulaTag.THM2)


def d_t_closed_alpha2(budget: LinkBudget, profile: MobilityProfile, T: float) -> BoundResult:
    """Data delivered during ``[0, T]`` for ``alpha = 2``."""
    _require_alpha2(budget)
    check_pair(budget, profile)
    if not T >= 0:
        raise ModelError(f"horizon T must be >= 0, got {T!r}")
    if T == 0:
        return BoundResult(InfoQuantity(0.0), FormulaTag.CLOSED_FINITE_ALPHA2)
    S, d0, z0, x0 = budget.snr0, budget.ref_distance_m, profile.z0_m, profile.x0_m
    xT = x0 + profile.speed_mps * T
    span = _alpha2_remaining(S, d0, z0, x0) - _alpha2_remaining(S, d0, z0, xT)
    return BoundResult(
        InfoQuantity(max(budget.bandwidth_hz * span / profile.speed_mps, 0.0)),
        FormulaTag.CLOSED_FINITE_ALPHA2,
    )


def d_inf_3(budget: LinkBudget, v: float) -> BoundResult:
    """Total data for ``alpha = 2``, ``z0 = 0``, ``x0 = d0``:
    ``(B d0 / v)(2 sqrt(S) atan(sqrt(S)) - ln(1+S))``."""
    _require_alpha2(budget)
    _require_speed(v)
    S = budget.snr0
    rs = math.sqrt(S)
    c = 2.0 * rs * math.atan(rs) - math.log1p(S)
    return BoundResult(
        InfoQuantity(max(budget.bandwidth_hz * budget.ref_distance_m * c / v, 0.0)),
        FormulaTag.COR2,
    )
