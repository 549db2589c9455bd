"""Construction-agnostic checking of sequence sets.

Replays every collision-freedom and occupancy claim against the actual slot
tables and reports a witness for the first failure of each kind.  The checks
only trust the set's provenance field to pick the right occupancy expectation;
everything else is recomputed from the data, so a set corrupted after
generation is flagged no matter which construction produced it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bound import BoundReport, check_bound
from .core import HcsSet, subsequences


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class VerificationReport:
    """Gate results plus informational metrics for one sequence set.

    Gates (all must pass):
      zero_correlation      no two flattened slot runs agree at any aligned
                            position
      occupancy             per-slot usage counts match the construction's
                            stated expectation
      frame_distinctness    every frame tuple holds distinct in-range slots
      slot_coverage         saturated sets use all t slots every frame;
                            sub-saturated sets never double-claim a slot
      load_within_capacity  roster load fits in the frame

    Informational: the whole-set occupancy histogram, sequence length, and
    the worst per-run deviation of slot frequencies from the uniform l/t.
    """

    zero_correlation: CheckResult
    occupancy: CheckResult
    occupancy_counts: tuple[int, ...]
    expected_occupancy: int | None
    frame_distinctness: CheckResult
    bound: BoundReport
    slot_coverage: CheckResult
    load_within_capacity: CheckResult
    length: int
    uniformity_deviation: float
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return bool(
            self.zero_correlation
            and self.occupancy
            and self.frame_distinctness
            and self.slot_coverage
            and self.load_within_capacity
        )

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "zero_correlation": {
                "passed": self.zero_correlation.passed,
                "detail": self.zero_correlation.detail,
            },
            "occupancy": {
                "passed": self.occupancy.passed,
                "detail": self.occupancy.detail,
                "counts": list(self.occupancy_counts),
                "expected": self.expected_occupancy,
            },
            "frame_distinctness": {
                "passed": self.frame_distinctness.passed,
                "detail": self.frame_distinctness.detail,
            },
            "slot_coverage": {
                "passed": self.slot_coverage.passed,
                "detail": self.slot_coverage.detail,
            },
            "load_within_capacity": {
                "passed": self.load_within_capacity.passed,
                "detail": self.load_within_capacity.detail,
            },
            "bound": self.bound.to_dict(),
            "length": self.length,
            "uniformity_deviation": self.uniformity_deviation,
            "warnings": list(self.warnings),
        }


def occupancy_histogram(hcs_set: HcsSet) -> np.ndarray:
    """Per-slot usage counts over all sequences, frames, and offsets.

    Array indexed by slot number; an empty roster yields all zeros.  The
    set must be well-formed (all slots in range) or ValueError is raised.
    """
    t = hcs_set.t
    if not hcs_set.sequences:
        return np.zeros(t, dtype=np.int64)
    values = np.concatenate([s.frames.ravel() for s in hcs_set.sequences])
    if values.size and (values.min() < 0 or values.max() >= t):
        raise ValueError("set contains out-of-range slot values")
    return np.bincount(values, minlength=t).astype(np.int64)


def _label(labels, index) -> str:
    level, user, theta = labels[index]
    return f"level {level} user {user} run {theta}"


def verify(hcs_set: HcsSet) -> VerificationReport:
    """Full check of a sequence set; see VerificationReport for the gates."""
    cfg = hcs_set.config
    t = cfg.t
    length = hcs_set.length
    warnings: list[str] = []

    labels = []
    runs = []
    for level, user, theta, run in subsequences(hcs_set):
        labels.append((level, user, theta))
        runs.append(run)
    k = len(runs)
    stack = np.stack(runs) if k else np.empty((0, length), dtype=np.int64)

    in_range = bool(k == 0 or (stack.min() >= 0 and stack.max() < t))

    # frame tuples: distinct in-range slots
    frame_distinctness = CheckResult(True, "every frame holds distinct in-range slots")
    for s in hcs_set.sequences:
        bad = np.nonzero((s.frames < 0) | (s.frames >= t))
        if bad[0].size:
            f = int(bad[0][0])
            frame_distinctness = CheckResult(
                False,
                f"level {s.level} user {s.user} frame {f} holds out-of-range slot "
                f"{int(s.frames[f, bad[1][0]])}",
            )
            break
        if s.slots_per_frame > 1:
            ordered = np.sort(s.frames, axis=1)
            dup = np.nonzero((np.diff(ordered, axis=1) == 0).any(axis=1))[0]
            if dup.size:
                f = int(dup[0])
                frame_distinctness = CheckResult(
                    False,
                    f"level {s.level} user {s.user} frame {f} repeats a slot: "
                    f"{tuple(int(x) for x in s.frames[f])}",
                )
                break

    # aligned collisions: equivalent to demanding zero Hamming correlation at
    # shift 0 for every pair of flattened runs, but scanned column-wise
    zero_correlation = CheckResult(
        True, "no aligned agreement between any two slot runs" if k > 1 else "fewer than two slot runs"
    )
    if k > 1:
        order = np.argsort(stack, axis=0, kind="stable")
        ordered = np.take_along_axis(stack, order, axis=0)
        hit_rows, hit_cols = np.nonzero(np.diff(ordered, axis=0) == 0)
        if hit_rows.size:
            first = int(np.argmin(hit_cols))
            pos = int(hit_cols[first])
            row = int(hit_rows[first])
            a = int(order[row, pos])
            b = int(order[row + 1, pos])
            value = int(stack[a, pos])
            zero_correlation = CheckResult(
                False,
                f"{_label(labels, a)} and {_label(labels, b)} both claim slot {value} "
                f"at position {pos}",
            )

    # occupancy, keyed by provenance
    kind = hcs_set.provenance.get("kind")
    saturated = cfg.saturated
    if in_range:
        counts = np.bincount(stack.ravel(), minlength=t) if k else np.zeros(t, dtype=np.int64)
    else:
        valid = stack[(stack >= 0) & (stack < t)]
        counts = np.bincount(valid, minlength=t) if valid.size else np.zeros(t, dtype=np.int64)
        warnings.append("histogram ignores out-of-range slot values")
    counts = counts.astype(np.int64)

    expected: int | None = None
    if not in_range:
        occupancy = CheckResult(False, "set contains out-of-range slot values")
    elif kind == "c1":
        if saturated:
            expected = length
            occupancy = _exact_counts(counts, length)
        else:
            occupancy = CheckResult(
                True,
                "sub-saturated roster: exact-count check not applicable; "
                "per-frame single use enforced by the collision checks",
            )
    elif kind == "c2":
        per_run = int(hcs_set.provenance.get("params", {}).get("d", 0)) ** int(
            hcs_set.provenance.get("params", {}).get("n", 0)
        )
        occupancy = CheckResult(True, f"every run visits each slot exactly {per_run} times")
        for idx in range(k):
            run_counts = np.bincount(stack[idx], minlength=t)
            if not np.all(run_counts == per_run):
                bad_slot = int(np.nonzero(run_counts != per_run)[0][0])
                occupancy = CheckResult(
                    False,
                    f"{_label(labels, idx)} visits slot {bad_slot} "
                    f"{int(run_counts[bad_slot])} times, expected {per_run}",
                )
                break
        if occupancy.passed and saturated:
            expected = length
            whole = _exact_counts(counts, length)
            if not whole.passed:
                occupancy = whole
    else:
        warnings.append(
            f"unknown construction kind {kind!r}: occupancy downgraded to within-set uniformity"
        )
        if k == 0:
            occupancy = CheckResult(True, "empty roster")
        elif np.all(counts == counts[0]):
            occupancy = CheckResult(True, f"all slots used {int(counts[0])} times")
        else:
            occupancy = CheckResult(
                False,
                f"slot usage not uniform: min {int(counts.min())}, max {int(counts.max())}",
            )

    # frame-level coverage
    if not in_range:
        slot_coverage = CheckResult(False, "set contains out-of-range slot values")
    elif k == 0:
        slot_coverage = CheckResult(True, "empty roster")
    elif saturated:
        cols = np.sort(stack, axis=0)
        target = np.arange(t, dtype=stack.dtype)[:, None]
        if cols.shape[0] == t and np.array_equal(cols, np.broadcast_to(target, cols.shape)):
            slot_coverage = CheckResult(True, "every frame uses all slots exactly once")
        else:
            bad = int(np.nonzero((cols != target).any(axis=0))[0][0])
            slot_coverage = CheckResult(
                False, f"frame {bad} does not cover every slot exactly once"
            )
    else:
        # sub-saturated: no double-claims per frame is the applicable reading
        dup_free = zero_correlation.passed and frame_distinctness.passed
        slot_coverage = CheckResult(
            dup_free,
            "sub-saturated roster: no slot claimed twice in any frame"
            if dup_free
            else "a slot is claimed twice in some frame",
        )

    bound_report = check_bound(cfg)
    load_within_capacity = CheckResult(
        bound_report.feasible,
        f"load {bound_report.load} of capacity {bound_report.capacity}",
    )

    uniformity = 0.0
    if k and in_range:
        per_run_counts = np.stack([np.bincount(row, minlength=t) for row in stack])
        uniformity = float(np.abs(per_run_counts - length / t).max())

    return VerificationReport(
        zero_correlation=zero_correlation,
        occupancy=occupancy,
        occupancy_counts=tuple(int(c) for c in counts),
        expected_occupancy=expected,
        frame_distinctness=frame_distinctness,
        bound=bound_report,
        slot_coverage=slot_coverage,
        load_within_capacity=load_within_capacity,
        length=length,
        uniformity_deviation=uniformity,
        warnings=tuple(warnings),
    )


def _exact_counts(counts: np.ndarray, expected: int) -> CheckResult:
    if np.all(counts == expected):
        return CheckResult(True, f"every slot used exactly {expected} times")
    bad = int(np.nonzero(counts != expected)[0][0])
    return CheckResult(
        False, f"slot {bad} used {int(counts[bad])} times, expected {expected}"
    )
