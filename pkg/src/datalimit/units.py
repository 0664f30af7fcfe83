"""Information quantities.

Everything is computed in nats. Other units only appear at output
boundaries: bits = nats / ln 2, bytes = bits / 8, MB = bytes / 1e6
(decimal megabytes).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import ModelError


class Unit(str, Enum):
    NATS = "nats"
    BITS = "bits"
    BYTES = "bytes"
    MEGABYTES = "MB"

    @classmethod
    def parse(cls, name: str | Unit) -> Unit:
        if isinstance(name, Unit):
            return name
        key = name.strip()
        try:
            return _ALIASES[key.lower()]
        except KeyError:
            raise ModelError(
                f"unknown information unit {name!r}; expected one of nats, bits, bytes, MB"
            ) from None


_ALIASES = {
    "nat": Unit.NATS,
    "nats": Unit.NATS,
    "bit": Unit.BITS,
    "bits": Unit.BITS,
    "b": Unit.BITS,
    "byte": Unit.BYTES,
    "bytes": Unit.BYTES,
    "mb": Unit.MEGABYTES,
    "megabyte": Unit.MEGABYTES,
    "megabytes": Unit.MEGABYTES,
}

# One scale factor per unit keeps the round trip down to two roundings.
NATS_PER_UNIT = {
    Unit.NATS: 1.0,
    Unit.BITS: math.log(2.0),
    Unit.BYTES: 8.0 * math.log(2.0),
    Unit.MEGABYTES: 8.0e6 * math.log(2.0),
}


@dataclass(frozen=True)
class InfoQuantity:
    """A non-negative amount of information, stored in nats."""

    value_nats: float

    def __post_init__(self):
        v = self.value_nats
        if not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
            raise ModelError(f"information amount must be finite and >= 0, got {v!r}")

    @classmethod
    def from_unit(cls, value: float, unit: str | Unit) -> InfoQuantity:
        return cls(float(value) * NATS_PER_UNIT[Unit.parse(unit)])

    def to(self, unit: str | Unit) -> float:
        return convert(self, unit)

    def __add__(self, other: InfoQuantity) -> InfoQuantity:
        return InfoQuantity(self.value_nats + other.value_nats)


def convert(q: InfoQuantity, unit: str | Unit) -> float:
    """Express ``q`` in ``unit``."""
    return q.value_nats / NATS_PER_UNIT[Unit.parse(unit)]


def to_nats(value: float, unit: str | Unit) -> float:
    return float(value) * NATS_PER_UNIT[Unit.parse(unit)]


_QUANTITY_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z]*)\s*$"
)


def parse_quantity(text: str, default_unit: str | Unit = Unit.NATS) -> InfoQuantity:
    """Parse strings like ``"10MB"``, ``"1.96e7 nats"`` or ``"4096"``."""
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise ModelError(f"cannot parse information amount {text!r}; expected <value><unit>")
    value, unit = m.groups()
    return InfoQuantity.from_unit(float(value), unit or default_unit)
