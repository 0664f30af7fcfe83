import math

import pytest

from datalimit import closed_form as cf
from datalimit import planner
from datalimit.errors import HypothesisError, InfeasibleError, ModelError
from datalimit.link_model import LinkBudget, MobilityProfile
from datalimit.quadrature import integrate_infinite
from datalimit.units import InfoQuantity, Unit

M_EXAMPLE = InfoQuantity(1.9599e7)
D_INF_S1E5 = 19598917.955626331


def test_solve_speed_example():
    v = planner.solve_speed(planner.PlanQuery(M_EXAMPLE, fixed_power_w=1e-3))
    assert v == pytest.approx(5.0 * D_INF_S1E5 / 1.9599e7, rel=1e-12)
    assert v == pytest.approx(5.0, rel=1e-5)


def test_solve_speed_inverse_in_target():
    v1 = planner.solve_speed(planner.PlanQuery(M_EXAMPLE, fixed_power_w=1e-3))
    v2 = planner.solve_speed(planner.PlanQuery(InfoQuantity(2 * 1.9599e7), fixed_power_w=1e-3))
    assert v2 == pytest.approx(v1 / 2, rel=1e-15)


@pytest.mark.parametrize("P, v0", [(1e-3, 1.0), (1.0, 5.0), (50.0, 77.0)])
def test_solve_speed_round_trip(P, v0):
    M = cf.d_inf_1(LinkBudget(tx_power_w=P), v0).nats
    assert planner.solve_speed(planner.PlanQuery(InfoQuantity(M), fixed_power_w=P)) == pytest.approx(v0, rel=1e-12)


def test_solve_power_examples():
    P = planner.solve_power(planner.PlanQuery(M_EXAMPLE, fixed_speed_mps=5.0))
    assert P == pytest.approx(1e-3, rel=1e-5)
    M = cf.d_inf_1(LinkBudget(), 5.0).nats
    assert planner.solve_power(planner.PlanQuery(InfoQuantity(M), fixed_speed_mps=5.0)) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("alpha", [2.0, 3.0, 5.0])
def test_solve_power_infeasible(alpha):
    with pytest.raises(InfeasibleError):
        planner.solve_power(planner.PlanQuery(InfoQuantity(1.0), fixed_speed_mps=5.0, alpha=alpha))


def test_solve_power_just_above_infimum():
    floor = planner.infimum_factor(2.0) * 1e5 / 5.0
    P = planner.solve_power(planner.PlanQuery(InfoQuantity(1.5 * floor), fixed_speed_mps=5.0))
    assert LinkBudget(tx_power_w=P).snr0 > 1


def test_infimum_factor():
    assert planner.infimum_factor(2.0) == pytest.approx(math.pi / 2 - math.log(2), rel=1e-8)


def test_factor_increasing_in_snr():
    for alpha in (2.0, 3.0, 6.0):
        grid = [1.0 + 10.0 ** (k / 10) for k in range(-30, 110)]
        vals = [cf.shannon_factor(S, alpha)[0] for S in grid]
        assert all(x < y for x, y in zip(vals, vals[1:]))


def test_bound_decreasing_in_alpha_via_oracle():
    for S in (10.0, 1e4, 1e8):
        vals = []
        for alpha in (2.0, 2.5, 3.0, 4.0, 6.0):
            b = LinkBudget.from_snr(S, path_loss_exp=alpha)
            q = integrate_infinite(b, MobilityProfile(1.0, 0.0, 5.0)).value
            assert cf.d_inf_1(b, 5.0).nats == pytest.approx(q, rel=1e-8)
            vals.append(q)
        assert all(x > y for x, y in zip(vals, vals[1:]))


def test_query_validation():
    with pytest.raises(ModelError):
        planner.PlanQuery(M_EXAMPLE)
    with pytest.raises(ModelError):
        planner.PlanQuery(M_EXAMPLE, fixed_power_w=1.0, fixed_speed_mps=1.0)
    with pytest.raises(ModelError):
        planner.PlanQuery(InfoQuantity(0.0), fixed_power_w=1.0)
    with pytest.raises(HypothesisError):
        planner.solve_speed(planner.PlanQuery(M_EXAMPLE, fixed_power_w=1e-9))


def test_admissible_curve_is_level_set():
    q = planner.PlanQuery(M_EXAMPLE, fixed_power_w=1.0)
    pts = planner.admissible_curve(q, [1e-3, 1e-1, 10.0])
    for P, v in pts:
        assert cf.d_inf_1(LinkBudget(tx_power_w=P), v).nats == pytest.approx(M_EXAMPLE.value_nats, rel=1e-12)
    assert [v for _, v in pts] == sorted(v for _, v in pts)


# -- finite horizons ------------------------------------------------------


def test_one_hour_ratio(table1):
    (pt,) = planner.finite_time_curve(table1, MobilityProfile(), [3600.0])
    assert pt.ratio == pytest.approx(0.83118978157102639, rel=1e-12)


@pytest.mark.parametrize("alpha, z0", [(2.0, 0.0), (2.0, 40.0), (3.0, 0.0), (2.5, 20.0)])
def test_curve_properties(alpha, z0):
    b = LinkBudget(path_loss_exp=alpha)
    pts = planner.finite_time_curve(b, MobilityProfile(1.0, z0, 5.0), [0.0, 1.0, 60.0, 3600.0, 86400.0])
    ratios = [p.ratio for p in pts]
    assert ratios[0] == 0.0
    assert all(0 <= r <= 1 for r in ratios)
    assert all(x <= y for x, y in zip(ratios, ratios[1:]))
    assert ratios[-1] < 1


def test_curve_rejects_bad_times(table1, line_start):
    with pytest.raises(ModelError):
        planner.finite_time_curve(table1, line_start, [10.0, 5.0])
    with pytest.raises(ModelError):
        planner.finite_time_curve(table1, line_start, [-1.0])


def test_faster_terminals_converge_sooner(table1):
    speeds = [1.0, 2.0, 5.0, 10.0, 20.0]
    for T in (60.0, 600.0, 3600.0):
        ratios = [planner.finite_time_curve(table1, MobilityProfile(1.0, 0.0, v), [T])[0].ratio for v in speeds]
        assert all(x < y for x, y in zip(ratios, ratios[1:]))
    times = [planner.time_to_ratio(table1, MobilityProfile(1.0, 0.0, v), 0.8) for v in speeds]
    assert all(x > y for x, y in zip(times, times[1:]))


def test_time_to_ratio_inverts_curve(table1, line_start):
    T = planner.time_to_ratio(table1, line_start, 0.83118978157102639)
    assert T == pytest.approx(3600.0, rel=1e-9)


# -- sweeps ---------------------------------------------------------------


def test_default_grid():
    rows = planner.sweep(planner.default_grid_spec())
    assert len(rows) == 2500
    assert all(math.isfinite(r.value) and r.formula == "Thm1" for r in rows)
    # first axis outermost
    assert rows[0].coords == {"v": 1.0, "P": 1e-3}
    assert rows[1].coords["v"] == 1.0 and rows[50].coords["v"] > 1.0
    assert rows[-1].coords == {"v": 100.0, "P": 100.0}


def test_default_grid_spot_check():
    spec = planner.default_grid_spec()
    assert planner.spot_check(spec, planner.sweep(spec), 0.01, seed=11) <= 1e-8


def test_one_point_sweep_equals_scalar():
    spec = planner.SweepSpec(axes=(planner.Axis("v", 7.0, 7.0, 1), planner.Axis("P", 0.02, 0.02, 1)))
    (row,) = planner.sweep(spec)
    assert row.value == cf.d_inf_1(LinkBudget(tx_power_w=0.02), 7.0).nats


def test_snr_sweep_gap_shape():
    spec = planner.SweepSpec(axes=(planner.Axis("S", 1.001, 1e10, 60, log=True),), formula="error")
    gaps = [r.value for r in planner.sweep(spec)]
    assert all(x > y for x, y in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-9 * gaps[0]


def test_invalid_points_fall_back_and_are_flagged():
    spec = planner.SweepSpec(axes=(planner.Axis("S", 0.1, 10.0, 3, log=True),))
    rows = planner.sweep(spec)
    assert [r.formula for r in rows] == ["Quadrature", "Quadrature", "Thm1"]
    assert [r.flagged for r in rows] == [True, True, False]
    b = LinkBudget.from_snr(0.1)
    assert rows[0].value == pytest.approx(integrate_infinite(b, MobilityProfile()).value, rel=1e-12)


def test_out_of_model_points_are_nan():
    spec = planner.SweepSpec(axes=(planner.Axis("alpha", 1.0, 2.0, 2),))
    rows = planner.sweep(spec)
    assert math.isnan(rows[0].value) and rows[0].formula == "Invalid"
    assert rows[1].formula == "Thm1"


def test_sweep_units_and_offset_axis():
    spec = planner.SweepSpec(axes=(planner.Axis("z0", 0.0, 1e3, 5),), formula="thm2", unit=Unit.MEGABYTES)
    rows = planner.sweep(spec)
    vals = [r.value for r in rows]
    assert vals[0] == pytest.approx(
        cf.d_inf_3(LinkBudget(), 5.0).to("MB"), rel=1e-15
    )
    assert all(x > y for x, y in zip(vals, vals[1:]))


@pytest.mark.parametrize(
    "text",
    ["q:1:2:3", "v:1:2", "v:2:1:5", "v:0:1:5:log", "v:1:2:3:cubic", "v", "v:a:b:c"],
)
def test_axis_parse_errors(text):
    with pytest.raises(ModelError):
        planner.Axis.parse(text)


def test_axis_values():
    ax = planner.Axis.parse("P:1e-3:100:6:log")
    assert ax.values() == pytest.approx([1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0], rel=1e-14)
    assert ax.values()[0] == 1e-3 and ax.values()[-1] == 100.0
    assert planner.Axis.parse("v:5").values() == [5.0]
