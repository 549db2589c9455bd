"""Iterated modular-affine construction for multi-level slot sets.

Start from the t cyclic shift rows c_k(b0) = (k + b0) mod t and extend n
times: each extension round multiplies the length by d and scales the row
values by powers of a unit g modulo t.  Row k at composite index
b = (a_n, ..., a_1, b0) (digits a in base d, remainder b0 in base t) is

    g^((a_n + ... + a_1) mod d) * (k + a_1 + b0) mod t

Distinct rows stay distinct at every index because g's powers are units,
so a roster mapped to disjoint row ranges is collision-free; each row also
visits every slot exactly d^n times per cycle.

By default d is the true multiplicative order of g.  A compat mode accepts
an explicit d (e.g. the unit-group size) for reproducing previously
published tables built with an overstated order; all collision and
occupancy properties hold for any d >= 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, HcsSequence, HcsSet, SystemConfig

MODES = ("true-order", "compat")

# guard against accidental huge d^n * t allocations
MAX_LENGTH = 20_000_000


def multiplicative_order(g: int, t: int) -> int:
    """Smallest d >= 1 with g^d = 1 mod t; g must be a unit modulo t."""
    if t < 2:
        raise ValueError(f"modulus must be at least 2, got {t}")
    if math.gcd(g, t) != 1:
        raise ValueError(f"{g} is not a unit modulo {t}")
    x = g % t
    d = 1
    while x != 1:
        x = x * g % t
        d += 1
    return d


def find_generator(t: int) -> tuple[int, int]:
    """(g, d): the smallest unit of maximal multiplicative order modulo t."""
    if t < 2:
        raise ValueError(f"modulus must be at least 2, got {t}")
    best_g, best_d = 1, 1
    for g in range(1, t):
        if math.gcd(g, t) == 1:
            d = multiplicative_order(g, t)
            if d > best_d:
                best_g, best_d = g, d
    return best_g, best_d


def initial_set(t: int) -> np.ndarray:
    """The t cyclic shift rows as a (t, t) matrix: row k is (k + b0) mod t."""
    if t < 1:
        raise ValueError(f"frame size must be positive, got {t}")
    base = np.arange(t, dtype=np.int64)
    return (base[:, None] + base[None, :]) % t


@dataclass(frozen=True)
class MixedRadixIndex:
    """Composite frame index: digits a = (a_n, ..., a_1) base d, then b0 base t."""

    a: tuple[int, ...]
    b0: int

    @classmethod
    def from_value(cls, value: int, d: int, n: int, t: int) -> "MixedRadixIndex":
        if d < 1 or n < 1 or t < 1:
            raise ValueError("d, n, t must all be positive")
        total = d**n * t
        if not 0 <= value < total:
            raise ValueError(f"index must lie in [0, {total}), got {value}")
        b0 = value % t
        q = value // t
        digits = []
        for _ in range(n):
            digits.append(q % d)
            q //= d
        return cls(a=tuple(reversed(digits)), b0=b0)

    def to_value(self, d: int, t: int) -> int:
        q = 0
        for digit in self.a:
            q = q * d + digit
        return q * t + self.b0


@dataclass(frozen=True)
class Cons2Params:
    """Unit g, exponent modulus d, round count n, per-level row offsets."""

    g: int
    d: int
    n: int
    omega2: tuple[int, ...]


def evaluate_c(k: int, index: MixedRadixIndex, params: Cons2Params, t: int) -> int:
    """Row k's slot at the given composite index."""
    if not 0 <= k < t:
        raise ValueError(f"row must lie in [0, {t}), got {k}")
    if len(index.a) != params.n:
        raise ValueError(f"index has {len(index.a)} digits, construction uses {params.n}")
    e = sum(index.a) % params.d
    return pow(params.g, e, t) * (k + index.a[-1] + index.b0) % t


def cons2_params(
    config: SystemConfig,
    n: int,
    g: int | None = None,
    d: int | None = None,
    mode: str = "true-order",
) -> Cons2Params:
    t = config.t
    if t < 2:
        raise ConfigError(f"frame size must be at least 2, got {t}")
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"round count must be a positive int, got {n!r}")
    if mode not in MODES:
        raise ConfigError(f"unknown order mode {mode!r}, expected one of {MODES}")
    if config.load > t:
        raise ConfigError(
            f"roster claims {config.load} slots per frame but the frame has only {t}"
        )
    if mode == "true-order":
        if d is not None:
            raise ConfigError("exponent modulus is derived from g in true-order mode")
        if g is None:
            g, d = find_generator(t)
        else:
            try:
                d = multiplicative_order(g, t)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
    else:
        if g is None or d is None:
            raise ConfigError("compat mode requires explicit g and d")
        if math.gcd(g, t) != 1:
            raise ConfigError(f"{g} is not a unit modulo {t}")
        if d < 1:
            raise ConfigError(f"exponent modulus must be positive, got {d}")
    omega2 = []
    prefix = 0
    for lv in config.levels:
        omega2.append(prefix)
        prefix += lv.r * lv.u
    if d**n * t > MAX_LENGTH:
        raise ConfigError(
            f"sequence length d^n*t = {d**n * t} exceeds the {MAX_LENGTH} guard; "
            f"pick fewer rounds or a smaller-order unit"
        )
    return Cons2Params(g=int(g), d=int(d), n=int(n), omega2=tuple(omega2))


def construct2(
    config: SystemConfig,
    n: int,
    g: int | None = None,
    d: int | None = None,
    mode: str = "true-order",
) -> HcsSet:
    """Build the iterated modular-affine sequence set.

    Users are packed onto consecutive rows in level order: level i's user j
    owns rows offset + j*r_i .. offset + (j+1)*r_i - 1, where offset is the
    total slot load of the levels below i.
    """
    params = cons2_params(config, n, g=g, d=d, mode=mode)
    t = config.t
    length = params.d**n * t

    idx = np.arange(length, dtype=np.int64)
    b0 = idx % t
    q = idx // t
    a1 = q % params.d
    esum = np.zeros(length, dtype=np.int64)
    qq = q.copy()
    for _ in range(params.n):
        esum += qq % params.d
        qq //= params.d
    esum %= params.d
    pow_g = np.array([pow(params.g, e, t) for e in range(params.d)], dtype=np.int64)
    mult = pow_g[esum]
    shift = a1 + b0

    sequences = []
    for i, lv in enumerate(config.levels):
        for j in range(lv.u):
            first_row = params.omega2[i] + j * lv.r
            rows = np.arange(first_row, first_row + lv.r, dtype=np.int64)
            frames = (mult[:, None] * (rows[None, :] + shift[:, None])) % t
            sequences.append(HcsSequence(level=i, user=j, frames=frames))

    return HcsSet(
        config=config,
        length=length,
        sequences=tuple(sequences),
        provenance={
            "kind": "c2",
            "params": {"g": params.g, "d": params.d, "n": params.n, "mode": mode},
        },
    )
