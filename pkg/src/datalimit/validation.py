"""Closed-form versus oracle checks behind ``datalimit validate``."""
from __future__ import annotations

import math
import random
from typing import Callable, NamedTuple

from . import closed_form as cf
from .link_model import LinkBudget, MobilityProfile
from .planner import PlanQuery, default_grid_spec, finite_time_curve, solve_power, solve_speed, spot_check, sweep
from .quadrature import integrate_finite, integrate_infinite
from .units import InfoQuantity, Unit, convert


class Check(NamedTuple):
    name: str
    deviation: float
    tolerance: float
    passed: bool


def _rel(a, b):
    return abs(a - b) / abs(b)


def oracle_equivalence() -> Check:
    worst = 0.0
    for S in (1e1, 1e3, 1e5, 1e7, 1e8):
        for alpha in (2.0, 2.5, 3.0, 4.0):
            for v in (1.0, 5.0, 50.0):
                b = LinkBudget.from_snr(S, path_loss_exp=alpha)
                p = MobilityProfile(x0_m=b.ref_distance_m, z0_m=0.0, speed_mps=v)
                worst = max(worst, _rel(cf.d_inf_1(b, v).nats, integrate_infinite(b, p).value))
    return Check("oracle_equivalence", worst, 1e-6, worst <= 1e-6)


def consistency_triangle() -> Check:
    worst = 0.0
    for S in (1e1, 1e3, 1e5, 1e8):
        b = LinkBudget.from_snr(S)
        d3 = cf.d_inf_3(b, 5.0).nats
        worst = max(worst, _rel(cf.d_inf_1(b, 5.0).nats, d3))
        worst = max(worst, _rel(cf.d_inf_2(b, MobilityProfile(1.0, 0.0, 5.0)).nats, d3))
    return Check("consistency_triangle", worst, 1e-10, worst <= 1e-10)


def envelope_at_snr_one() -> Check:
    b = LinkBudget.from_snr(1.0)
    loose_mb = convert(InfoQuantity(cf.error_envelope(b, 5.0)[1]), Unit.MEGABYTES)
    dev = _rel(loose_mb, 1.5e-3)
    return Check("envelope_at_S1_MB", dev, 0.04, dev <= 0.04)


def one_hour_ratio() -> Check:
    b, p = LinkBudget(), MobilityProfile()
    closed = finite_time_curve(b, p, [3600.0])[0].ratio
    quad = integrate_finite(b, p, 3600.0).value / integrate_infinite(b, p).value
    dev = max(abs(closed - 0.831), abs(quad - 0.831))
    return Check("one_hour_ratio", dev, 0.005, dev <= 0.005 and min(closed, quad) > 0.80)


def error_chain(samples: int = 1000, seed: int = 1) -> Check:
    # S close to 1 needs thousands of terms before the series is exact to 1e-12
    opts = cf.SeriesOptions(max_terms=10**6)
    rng = random.Random(seed)
    ok = True
    worst = 0.0
    for _ in range(samples):
        S = 10.0 ** rng.uniform(0.0, 9.0)
        if S <= 1:
            continue
        alpha = rng.uniform(2.0, 6.0)
        v = 10.0 ** rng.uniform(0.0, 2.0)
        b = LinkBudget.from_snr(S, path_loss_exp=alpha)
        err = cf.approx_error(b, v, opts)
        tight, loose = cf.error_envelope(b, v)
        ok = ok and 0 < err <= tight * (1 + 1e-12) and tight <= loose
        b2 = b.replace(path_loss_exp=2.0)
        worst = max(worst, _rel(cf.approx_error(b2, v, opts), cf.error_envelope(b2, v)[0]))
    chain = [cf.approx_error(LinkBudget.from_snr(10.0 ** (k / 4)), 5.0, opts) for k in range(1, 41)]
    ok = ok and all(a > b for a, b in zip(chain, chain[1:]))
    return Check("error_chain", worst, 1e-12, ok and worst <= 1e-12)


def series_truncation(seed: int = 2) -> Check:
    rng = random.Random(seed)
    ok = True
    worst = 0.0
    for _ in range(200):
        S = 1.0 + 10.0 ** rng.uniform(-3.0, 9.0)
        alpha = rng.uniform(2.0, 6.0)
        short = cf.series_sum(S, alpha, cf.SeriesOptions(max_terms=100))
        long = cf.series_sum(S, alpha, cf.SeriesOptions(max_terms=10**4))
        diff = abs(short.value - long.value)
        ok = ok and (diff < short.remainder_bound or diff == short.remainder_bound == 0)
        if short.remainder_bound > 0:
            worst = max(worst, diff / short.remainder_bound)
    return Check("series_truncation", worst, 1.0, ok)


def planner_round_trip() -> Check:
    speed_dev = power_dev = 0.0
    for i in range(10):
        P = 10.0 ** (-3 + 5 * i / 9)
        for j in range(10):
            M = 10.0 ** (6 + 4 * j / 9)
            q = PlanQuery(InfoQuantity(M), fixed_power_w=P)
            v = solve_speed(q)
            speed_dev = max(speed_dev, _rel(cf.d_inf_1(q.budget(P), v).nats, M))
            P2 = solve_power(PlanQuery(InfoQuantity(M), fixed_speed_mps=v))
            power_dev = max(power_dev, _rel(P2, P), _rel(cf.d_inf_1(q.budget(P2), v).nats, M))
    return Check("planner_round_trip", power_dev, 1e-9, speed_dev <= 1e-12 and power_dev <= 1e-9)


def scaling_laws() -> Check:
    b = LinkBudget()
    ref = cf.d_inf_1(b, 1.0).nats
    worst = max(_rel(v * cf.d_inf_1(b, v).nats, ref) for v in (1.0, 2.0, 10.0, 100.0))
    for B in (1e3, 1e6):
        k = B / b.bandwidth_hz
        b2 = b.replace(bandwidth_hz=B)
        worst = max(
            worst,
            _rel(cf.d_inf_1(b2, 5).nats, k * cf.d_inf_1(b, 5).nats),
            _rel(cf.d_inf_3(b2, 5).nats, k * cf.d_inf_3(b, 5).nats),
            _rel(cf.d_inf_1_lower(b2, 5).nats, k * cf.d_inf_1_lower(b, 5).nats),
        )
    return Check("scaling_laws", worst, 1e-14, worst <= 1e-14)


def sweep_spot_check() -> Check:
    spec = default_grid_spec()
    dev = spot_check(spec, sweep(spec), 0.01, seed=3)
    return Check("sweep_spot_check", dev, 1e-8, dev <= 1e-8)


CHECKS: dict[str, Callable[[], Check]] = {
    "oracle_equivalence": oracle_equivalence,
    "consistency_triangle": consistency_triangle,
    "envelope_at_S1_MB": envelope_at_snr_one,
    "one_hour_ratio": one_hour_ratio,
    "error_chain": error_chain,
    "series_truncation": series_truncation,
    "planner_round_trip": planner_round_trip,
    "scaling_laws": scaling_laws,
    "sweep_spot_check": sweep_spot_check,
}


def run_checks(names=None) -> list[Check]:
    return [CHECKS[n]() for n in (names or CHECKS)]
