"""Channel and trajectory model.

A stationary receiver sits at the origin. The transmitter moves along
``x(t) = x0 + v t`` at a constant offset ``z0``; the received SNR follows a
power law in distance, valid beyond the reference distance ``d0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ModelError


def _check_positive(name, value):
    if not math.isfinite(value) or value <= 0:
        raise ModelError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class LinkBudget:
    """Static radio parameters. Defaults are the reference scenario
    (B=100 kHz, noise 10 nW, d0=1 m, G=1, P=1 W, free-space alpha=2)."""

    bandwidth_hz: float = 1e5
    noise_power_w: float = 1e-8
    ref_distance_m: float = 1.0
    antenna_gain: float = 1.0
    tx_power_w: float = 1.0
    path_loss_exp: float = 2.0

    def __post_init__(self):
        _check_positive("bandwidth_hz", self.bandwidth_hz)
        _check_positive("noise_power_w", self.noise_power_w)
        _check_positive("ref_distance_m", self.ref_distance_m)
        _check_positive("antenna_gain", self.antenna_gain)
        _check_positive("tx_power_w", self.tx_power_w)
        if not math.isfinite(self.path_loss_exp) or self.path_loss_exp < 2:
            raise ModelError(f"path_loss_exp must be finite and >= 2, got {self.path_loss_exp!r}")
        s = self.snr0
        if not math.isfinite(s) or s <= 0:
            raise ModelError(f"transmit SNR P*G/noise must be finite and > 0, got {s!r}")

    @property
    def snr0(self) -> float:
        """Transmit SNR ``S = P G / noise``."""
        return self.tx_power_w * self.antenna_gain / self.noise_power_w

    @classmethod
    def from_snr(cls, snr: float, **fields) -> LinkBudget:
        """Build a budget whose transmit power yields the given ``S``."""
        noise = fields.get("noise_power_w", cls.noise_power_w)
        gain = fields.get("antenna_gain", cls.antenna_gain)
        fields["tx_power_w"] = snr * noise / gain
        return cls(**fields)

    def power_for_snr(self, snr: float) -> float:
        return snr * self.noise_power_w / self.antenna_gain

    def replace(self, **changes) -> LinkBudget:
        return replace(self, **changes)


@dataclass(frozen=True)
class MobilityProfile:
    """Straight-line trajectory: lateral start ``x0``, fixed offset ``z0``, speed ``v``.

    Only receding motion is modelled, so ``x0 >= 0``.
    """

    x0_m: float = 1.0
    z0_m: float = 0.0
    speed_mps: float = 5.0

    def __post_init__(self):
        if not math.isfinite(self.x0_m) or self.x0_m < 0:
            raise ModelError(f"x0_m must be finite and >= 0, got {self.x0_m!r}")
        if not math.isfinite(self.z0_m) or self.z0_m < 0:
            raise ModelError(f"z0_m must be finite and >= 0, got {self.z0_m!r}")
        _check_positive("speed_mps", self.speed_mps)

    @property
    def start_distance(self) -> float:
        return math.hypot(self.x0_m, self.z0_m)

    def replace(self, **changes) -> MobilityProfile:
        return replace(self, **changes)


def check_pair(budget: LinkBudget, profile: MobilityProfile) -> None:
    """Reject a trajectory that starts inside the reference distance.

    Distance never decreases for a receding terminal, so checking t=0 covers
    the whole trajectory.
    """
    if profile.start_distance < budget.ref_distance_m:
        raise ModelError(
            f"trajectory starts at distance {profile.start_distance!r} m, inside the "
            f"reference distance d0={budget.ref_distance_m!r} m where the path-loss model is invalid"
        )


def transmit_snr(budget: LinkBudget) -> float:
    return budget.snr0


def distance(profile: MobilityProfile, t: float) -> float:
    if not t >= 0:
        raise ModelError(f"time must be >= 0, got {t!r}")
    return math.hypot(profile.z0_m, profile.x0_m + profile.speed_mps * t)


def snr(budget: LinkBudget, profile: MobilityProfile, t: float) -> float:
    """Received SNR at time ``t``: ``S (d0 / d(t))**alpha``."""
    check_pair(budget, profile)
    d = distance(profile, t)
    if math.isinf(d):
        return 0.0
    return budget.snr0 * (budget.ref_distance_m / d) ** budget.path_loss_exp
