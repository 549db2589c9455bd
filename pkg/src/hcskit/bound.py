"""Capacity accounting for level rosters.

A frame of t slots can host at most t slot-claims per frame, so any roster
with per-level demands r_i and user counts u_i must satisfy
sum(r_i * u_i) <= t; rosters meeting it with equality waste no capacity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import HcsError, SystemConfig


class EnumerationCapError(HcsError):
    """Roster enumeration would exceed the configured tuple cap."""


@dataclass(frozen=True)
class BoundReport:
    load: int
    capacity: int
    slack: int
    optimal: bool

    @property
    def feasible(self) -> bool:
        return self.slack >= 0

    def to_dict(self) -> dict:
        return {
            "load": self.load,
            "capacity": self.capacity,
            "slack": self.slack,
            "feasible": self.feasible,
            "optimal": self.optimal,
        }


@dataclass(frozen=True)
class UserCountTuple:
    """One feasible roster in an enumeration: user counts per level."""

    counts: tuple[int, ...]
    load: int
    optimal: bool


def check_bound(config: SystemConfig) -> BoundReport:
    """Slot-load accounting for a roster; never raises on over-capacity."""
    load = config.load
    slack = config.t - load
    return BoundReport(load=load, capacity=config.t, slack=slack, optimal=slack == 0)


def max_users_single_level(t: int, r: int) -> int:
    """Largest user count a single level of demand r can host in t slots."""
    if r < 1:
        raise ValueError(f"slots-per-frame must be positive, got {r}")
    if t < 1:
        raise ValueError(f"frame size must be positive, got {t}")
    return t // r


def enumerate_user_counts(
    t: int,
    level_values: Sequence[int],
    cap: int = 10_000_000,
) -> list[UserCountTuple]:
    """All user-count tuples fitting in t slots, in lexicographic order.

    level_values are the per-level slot demands (strictly increasing).  Every
    tuple of non-negative counts u with sum(r_i * u_i) <= t is emitted, the
    capacity-exact ones flagged optimal.  Raises EnumerationCapError once more
    than ``cap`` tuples would be produced.
    """
    rv = tuple(int(r) for r in level_values)
    if not rv:
        raise ValueError("at least one level value is required")
    if any(r < 1 for r in rv):
        raise ValueError(f"level values must be positive, got {rv}")
    if any(b <= a for a, b in zip(rv, rv[1:])):
        raise ValueError(f"level values must be strictly increasing, got {rv}")
    if t < 1:
        raise ValueError(f"frame size must be positive, got {t}")

    out: list[UserCountTuple] = []

    def rec(idx: int, prefix: tuple[int, ...], remaining: int) -> None:
        r = rv[idx]
        if idx == len(rv) - 1:
            for u in range(remaining // r + 1):
                if len(out) >= cap:
                    raise EnumerationCapError(
                        f"enumeration exceeds the cap of {cap} tuples; "
                        f"raise the cap or narrow the level values"
                    )
                left = remaining - u * r
                out.append(
                    UserCountTuple(counts=prefix + (u,), load=t - left, optimal=left == 0)
                )
            return
        for u in range(remaining // r + 1):
            rec(idx + 1, prefix + (u,), remaining - u * r)

    rec(0, (), t)
    return out
