"""Monte-Carlo link simulator for slotted transmission under interference.

One user transmits binary-antipodal symbols in its per-frame slots over an
AWGN channel; a subset of the frame's slots is additionally hit by an
independent Gaussian interferer at a configured power above the signal.
Hard-decision detection, symbol error rate per SNR point.  Schemes under
test: a fixed slot tuple reused every frame, or a sequence from a generated
set cycled frame by frame, which spreads the interference hits across the
whole frame instead of pinning them to the same slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import rng
from .core import HcsSet

_CHUNK_FRAMES = 8192


@dataclass(frozen=True)
class FixedScheme:
    """Same slot tuple every frame."""

    slots: tuple[int, ...]

    def __post_init__(self) -> None:
        slots = tuple(int(s) for s in self.slots)
        object.__setattr__(self, "slots", slots)
        if not slots:
            raise ValueError("a scheme must use at least one slot per frame")
        if len(set(slots)) != len(slots):
            raise ValueError(f"fixed slots must be distinct, got {slots}")

    @property
    def label(self) -> str:
        return "fixed[" + "-".join(str(s) for s in self.slots) + "]"

    def validate(self, t: int) -> None:
        if any(not 0 <= s < t for s in self.slots):
            raise ValueError(f"fixed slots must lie in [0, {t}), got {self.slots}")

    def frame_slots(self, frames: int) -> np.ndarray:
        return np.tile(np.array(self.slots, dtype=np.int64), (frames, 1))


@dataclass(frozen=True, eq=False)
class HcsScheme:
    """One user's sequence from a set, cycled over successive frames.

    Defaults to the first user of the highest level (the largest per-frame
    demand); pick level/user explicitly to simulate someone else.
    """

    hcs_set: HcsSet
    level: int | None = None
    user: int = 0

    def _sequence(self):
        level = self.level if self.level is not None else self.hcs_set.config.num_levels - 1
        try:
            return self.hcs_set.sequence(level, self.user)
        except KeyError as exc:
            raise ValueError(str(exc)) from exc

    @property
    def label(self) -> str:
        seq = self._sequence()
        return f"hcs-L{self.hcs_set.length}-level{seq.level}-user{seq.user}"

    def validate(self, t: int) -> None:
        if self.hcs_set.t != t:
            raise ValueError(
                f"sequence set is built for {self.hcs_set.t} slots, simulation uses {t}"
            )
        self._sequence()

    def frame_slots(self, frames: int) -> np.ndarray:
        table = self._sequence().frames
        reps = -(-frames // table.shape[0])
        return np.tile(table, (reps, 1))[:frames]


Scheme = Union[FixedScheme, HcsScheme]


@dataclass(frozen=True, eq=False)
class SimConfig:
    t: int
    scheme: Scheme
    snr_db: tuple[float, ...]
    interference_slots: tuple[int, ...] = ()
    interference_power_db: float = 10.0
    symbols_per_slot: int = 64
    frames: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        object.__setattr__(
            self, "interference_slots", tuple(int(s) for s in self.interference_slots)
        )
        if self.t < 1:
            raise ValueError(f"frame size must be positive, got {self.t}")
        if not self.snr_db:
            raise ValueError("at least one SNR point is required")
        if self.symbols_per_slot < 1 or self.frames < 1:
            raise ValueError("symbols per slot and frame count must be positive")
        if len(set(self.interference_slots)) != len(self.interference_slots):
            raise ValueError("interference slots must be distinct")
        if any(not 0 <= s < self.t for s in self.interference_slots):
            raise ValueError(f"interference slots must lie in [0, {self.t})")
        self.scheme.validate(self.t)


@dataclass(frozen=True)
class SerPoint:
    snr_db: float
    ser: float
    symbols_total: int
    symbols_error: int


@dataclass(frozen=True)
class SerCurve:
    scheme: str
    scenario: str
    points: tuple[SerPoint, ...]

    def sers(self) -> np.ndarray:
        return np.array([p.ser for p in self.points])


def scenario_label(interference_slots: Sequence[int], power_db: float) -> str:
    slots = tuple(int(s) for s in interference_slots)
    if not slots:
        return "clean"
    return "I=" + "-".join(str(s) for s in slots) + f"@{power_db:g}dB"


def interference_hit_fraction(
    scheme: Scheme, interference_slots: Sequence[int], frames: int, t: int | None = None
) -> float:
    """Fraction of transmitted slots that fall on interfered slot numbers."""
    if frames < 1:
        raise ValueError(f"frame count must be positive, got {frames}")
    if t is not None:
        scheme.validate(t)
    slots = scheme.frame_slots(frames)
    hits = np.isin(slots, np.asarray(tuple(interference_slots), dtype=np.int64))
    return float(np.count_nonzero(hits)) / slots.size


def simulate_ser(config: SimConfig) -> SerCurve:
    """Symbol error rate at each SNR point.

    SNR is symbol energy over noise density; the interferer adds zero-mean
    Gaussian samples at signal power times 10^(power_db/10) in interfered
    slots.  Each SNR point draws from its own (seed, point index) substream,
    so curves are reproducible bit for bit and points are independent.
    """
    slots = config.scheme.frame_slots(config.frames)
    r = slots.shape[1]
    hit_mask = np.isin(slots, np.asarray(config.interference_slots, dtype=np.int64))
    interference_std = math.sqrt(10.0 ** (config.interference_power_db / 10.0))
    spl = config.symbols_per_slot
    total = config.frames * r * spl

    points = []
    for index, snr in enumerate(config.snr_db):
        gen = rng.substream(config.seed, rng.DOMAIN_SIMULATOR, index)
        n0 = 10.0 ** (-snr / 10.0)
        noise_std = math.sqrt(n0 / 2.0)
        errors = 0
        for start in range(0, config.frames, _CHUNK_FRAMES):
            stop = min(start + _CHUNK_FRAMES, config.frames)
            shape = (stop - start, r, spl)
            bits = gen.integers(0, 2, size=shape, dtype=np.int8)
            received = (1.0 - 2.0 * bits) + gen.normal(0.0, noise_std, size=shape)
            if config.interference_slots:
                received += gen.normal(0.0, interference_std, size=shape) * hit_mask[
                    start:stop, :, None
                ]
            errors += int(np.count_nonzero((received < 0.0) != (bits == 1)))
        points.append(
            SerPoint(
                snr_db=float(snr),
                ser=errors / total,
                symbols_total=total,
                symbols_error=errors,
            )
        )
    return SerCurve(
        scheme=config.scheme.label,
        scenario=scenario_label(config.interference_slots, config.interference_power_db),
        points=tuple(points),
    )


@dataclass(frozen=True)
class ComparisonRow:
    snr_db: float
    ser_a: float
    ser_b: float
    delta: float
    sigma: float
    b_exceeds_a: bool


@dataclass(frozen=True)
class ComparisonReport:
    scheme_a: str
    scheme_b: str
    scenario: str
    rows: tuple[ComparisonRow, ...]

    @property
    def max_delta(self) -> float:
        """Largest a-minus-b SER gap over the sweep."""
        return max(row.delta for row in self.rows)

    @property
    def flagged(self) -> tuple[ComparisonRow, ...]:
        return tuple(row for row in self.rows if row.b_exceeds_a)


def compare_schemes(config_a: SimConfig, config_b: SimConfig) -> ComparisonReport:
    """Paired SER comparison of two schemes under one scenario.

    Both configs must agree on everything except the scheme.  delta is
    ser_a - ser_b per point; a point is flagged when scheme B is worse than
    scheme A by more than three binomial sigmas, i.e. beyond Monte-Carlo
    noise.
    """
    for name in (
        "t",
        "snr_db",
        "interference_slots",
        "interference_power_db",
        "symbols_per_slot",
        "frames",
    ):
        if getattr(config_a, name) != getattr(config_b, name):
            raise ValueError(f"scenario mismatch between schemes: {name} differs")
    curve_a = simulate_ser(config_a)
    curve_b = simulate_ser(config_b)
    rows = []
    for pa, pb in zip(curve_a.points, curve_b.points):
        var = pa.ser * (1.0 - pa.ser) / pa.symbols_total
        var += pb.ser * (1.0 - pb.ser) / pb.symbols_total
        sigma = math.sqrt(var)
        delta = pa.ser - pb.ser
        rows.append(
            ComparisonRow(
                snr_db=pa.snr_db,
                ser_a=pa.ser,
                ser_b=pb.ser,
                delta=delta,
                sigma=sigma,
                b_exceeds_a=pb.ser > pa.ser + 3.0 * sigma,
            )
        )
    return ComparisonReport(
        scheme_a=curve_a.scheme,
        scheme_b=curve_b.scheme,
        scenario=curve_a.scenario,
        rows=tuple(rows),
    )
