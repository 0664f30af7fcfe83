"""Numerical oracle for the Shannon integral ``B * int ln(1 + SNR(t)) dt``.

Integration runs over lateral position (``dx = v dt``). The span is cut
into geometrically growing chunks so that integrands spanning many decades
are resolved evenly, and each chunk goes to the adaptive Gauss-Kronrod
kernel. The semi-infinite case stops at a point where an analytic tail
bound certifies the neglected remainder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _backend
from .closed_form import BoundResult, FormulaTag
from .errors import ConvergenceError, ModelError
from .link_model import LinkBudget, MobilityProfile, check_pair
from .units import InfoQuantity

_MAX_CHUNKS = 4000


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the oracle.

    ``abs_tol`` is an absolute floor per chunk (in position units times
    nats/s/Hz), ``rel_tol`` the relative target per chunk, and
    ``tail_rel_tol`` the certified tail size relative to the running total.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 10**6
    tail_rel_tol: float = 1e-9

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "tail_rel_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ModelError(f"{name} must be finite and > 0, got {v!r}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise ModelError(f"max_subdivisions must be an integer >= 1, got {self.max_subdivisions!r}")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadResult(NamedTuple):
    value: float
    error: float


class _Accumulator:
    """Compensated running sum over chunks plus subdivision bookkeeping."""

    def __init__(self, spec):
        self.spec = spec
        self.s = 0.0
        self.c = 0.0
        self.err = 0.0
        self.budget = spec.max_subdivisions
        self.converged = True

    @property
    def total(self):
        return self.s + self.c

    def add_chunk(self, S, alpha, d0, z0, a, b):
        value, err, nsub, ok = _backend.integrate_span(
            S, alpha, d0, z0, a, b, self.spec.abs_tol, self.spec.rel_tol, max(self.budget, 0)
        )
        self.budget -= nsub
        self.converged = self.converged and ok
        t = self.s + value
        if abs(self.s) >= abs(value):
            self.c += (self.s - t) + value
        else:
            self.c += (value - t) + self.s
        self.s = t
        self.err += err


def _first_break(x0, d0, z0):
    hi = max(2.0 * x0, d0, z0)
    return hi if hi > x0 else 2.0 * x0


def _position_integral(budget, profile, a, b, spec):
    """Integral over lateral positions ``[a, b]`` (finite), unscaled."""
    acc = _Accumulator(spec)
    S, alpha, d0, z0 = budget.snr0, budget.path_loss_exp, budget.ref_distance_m, profile.z0_m
    lo = a
    hi = min(_first_break(a, d0, z0), b)
    while lo < b:
        acc.add_chunk(S, alpha, d0, z0, lo, hi)
        lo = hi
        hi = min(2.0 * hi, b)
    return acc


def integrate_finite(
    budget: LinkBudget, profile: MobilityProfile, T: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadResult:
    """Data delivered during ``[0, T]``, in nats, with an error estimate."""
    check_pair(budget, profile)
    if not (T >= 0 and math.isfinite(T)):
        raise ModelError(f"horizon T must be finite and >= 0, got {T!r}")
    if T == 0:
        return QuadResult(0.0, 0.0)
    x0 = profile.x0_m
    acc = _position_integral(budget, profile, x0, x0 + profile.speed_mps * T, spec)
    scale = budget.bandwidth_hz / profile.speed_mps
    value, err = scale * acc.total, scale * acc.err
    if not acc.converged:
        raise ConvergenceError("finite-horizon quadrature did not reach its tolerance", value, err)
    return QuadResult(value, err)


def tail_bound(budget: LinkBudget, profile: MobilityProfile, X: float) -> float:
    """Upper bound on the data still deliverable once the terminal passes ``x = X``.

    Uses ``d >= x`` and ``ln(1 + y) <= y``:
    ``(B/v) S d0**alpha X**(1-alpha) / (alpha - 1)``.
    """
    alpha = budget.path_loss_exp
    if not alpha > 1:
        raise ModelError(f"tail bound diverges for alpha <= 1, got {alpha!r}")
    d0 = budget.ref_distance_m
    if not X >= max(profile.x0_m, d0):
        raise ModelError(f"tail bound needs X >= max(x0, d0), got X={X!r}")
    return (
        budget.bandwidth_hz / profile.speed_mps
        * budget.snr0 * d0 / (alpha - 1.0)
        * (d0 / X) ** (alpha - 1.0)
    )


def integrate_infinite(
    budget: LinkBudget, profile: MobilityProfile, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadResult:
    """Total data as the horizon grows without limit.

    Chunks are added until the tail bound at the current end point is at
    most ``tail_rel_tol`` times the running total; the tail bound is added to
    the reported error.
    """
    check_pair(budget, profile)
    S, alpha, d0, z0 = budget.snr0, budget.path_loss_exp, budget.ref_distance_m, profile.z0_m
    scale = budget.bandwidth_hz / profile.speed_mps
    acc = _Accumulator(spec)
    lo = profile.x0_m
    hi = _first_break(lo, d0, z0)
    for _ in range(_MAX_CHUNKS):
        acc.add_chunk(S, alpha, d0, z0, lo, hi)
        lo = hi
        hi = 2.0 * hi
        tail = tail_bound(budget, profile, lo)
        if tail <= spec.tail_rel_tol * scale * acc.total:
            break
    else:
        raise ConvergenceError(
            "semi-infinite quadrature: tail bound never fell below tolerance",
            scale * acc.total,
            scale * acc.err + tail,
        )
    value, err = scale * acc.total, scale * acc.err + tail
    if not acc.converged:
        raise ConvergenceError("semi-infinite quadrature did not reach its tolerance", value, err)
    return QuadResult(value, err)


def quadrature_bound(
    budget: LinkBudget,
    profile: MobilityProfile,
    T: float | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> BoundResult:
    """Oracle result packaged like the closed forms (``T=None`` means unlimited horizon)."""
    res = integrate_infinite(budget, profile, spec) if T is None else integrate_finite(budget, profile, T, spec)
    return BoundResult(InfoQuantity(max(res.value, 0.0)), FormulaTag.QUADRATURE, 0, res.error)
