import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from datalimit.errors import ModelError
from datalimit.link_model import LinkBudget, MobilityProfile, check_pair, distance, snr, transmit_snr


def test_distance_examples():
    assert distance(MobilityProfile(3.0, 4.0, 1.0), 0.0) == 5.0
    assert distance(MobilityProfile(1.0, 0.0, 5.0), 3600.0) == 18001.0
    assert distance(MobilityProfile(1.0, 100.0, 5.0), 0.0) == pytest.approx(math.sqrt(10001.0), rel=1e-15)


def test_distance_rejects_negative_time():
    with pytest.raises(ModelError):
        distance(MobilityProfile(), -1.0)


def test_transmit_snr():
    assert transmit_snr(LinkBudget()) == pytest.approx(1e8, rel=1e-15)
    assert transmit_snr(LinkBudget(tx_power_w=1e-3)) == pytest.approx(1e5, rel=1e-15)
    b = LinkBudget(noise_power_w=3e-9, antenna_gain=2.0, tx_power_w=1.5e-9)
    assert transmit_snr(b) == pytest.approx(1.0, rel=1e-15)


def test_snr_examples(table1, line_start):
    assert snr(table1, line_start, 0.0) == pytest.approx(1e8, rel=1e-15)
    assert snr(table1, line_start, 1e300) == pytest.approx(0.0, abs=1e-200)
    # d = 10 d0 -> S / 100 at alpha = 2
    assert snr(table1, line_start, 9.0 / 5.0) == pytest.approx(1e6, rel=1e-14)


def test_snr_inside_reference_distance_rejected(table1):
    with pytest.raises(ModelError):
        snr(table1, MobilityProfile(x0_m=0.5, z0_m=0.0), 0.0)
    with pytest.raises(ModelError):
        check_pair(table1.replace(ref_distance_m=10.0), MobilityProfile(x0_m=3.0, z0_m=4.0))
    # offset alone can satisfy the distance condition
    check_pair(table1, MobilityProfile(x0_m=0.0, z0_m=1.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(bandwidth_hz=0.0),
        dict(noise_power_w=-1.0),
        dict(ref_distance_m=math.nan),
        dict(antenna_gain=math.inf),
        dict(path_loss_exp=1.9),
        dict(tx_power_w=0.0),
    ],
)
def test_budget_validation(kwargs):
    with pytest.raises(ModelError):
        LinkBudget(**kwargs)


@pytest.mark.parametrize("kwargs", [dict(x0_m=-1.0), dict(z0_m=-0.1), dict(speed_mps=0.0)])
def test_profile_validation(kwargs):
    with pytest.raises(ModelError):
        MobilityProfile(**kwargs)


def test_from_snr():
    b = LinkBudget.from_snr(1e5, noise_power_w=2e-8, antenna_gain=4.0)
    assert b.snr0 == pytest.approx(1e5, rel=1e-15)
    assert b.tx_power_w == pytest.approx(5e-4, rel=1e-15)


profiles = st.builds(
    MobilityProfile,
    x0_m=st.floats(1.0, 1e4),
    z0_m=st.floats(0.0, 1e4),
    speed_mps=st.floats(0.1, 1e3),
)


@given(profiles, st.floats(2.0, 6.0), st.floats(0.0, 1e5), st.floats(0.0, 1e5))
def test_snr_monotone_in_time(profile, alpha, t1, t2):
    b = LinkBudget(path_loss_exp=alpha)
    lo, hi = sorted((t1, t2))
    assert snr(b, profile, hi) <= snr(b, profile, lo)


@given(profiles, st.floats(2.0, 6.0), st.floats(2.0, 6.0), st.floats(0.0, 1e5))
def test_snr_non_increasing_in_alpha(profile, a1, a2, t):
    lo, hi = sorted((a1, a2))
    assert snr(LinkBudget(path_loss_exp=hi), profile, t) <= snr(LinkBudget(path_loss_exp=lo), profile, t)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_snr_scaling(kp, kn):
    p = MobilityProfile(x0_m=2.0, z0_m=3.0)
    base = snr(LinkBudget(), p, 10.0)
    scaled = snr(LinkBudget(tx_power_w=kp, noise_power_w=1e-8 * kn), p, 10.0)
    assert scaled == pytest.approx(base * kp / kn, rel=1e-13)
