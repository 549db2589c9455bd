"""Sequence assignment center: who transmits on which slots, frame by frame.

A central allocator owns one pool of idle sequences per level.  Users ask to
join at a level and either get the lowest-numbered idle sequence or wait in
that level's FIFO queue; a leaving user's sequence goes to the queue head if
anyone is waiting, back to the pool otherwise.  Slot lookup cycles through
the assigned sequence and, in the default global alignment, indexes it by
the network frame counter so all users stay on the same sequence position
and collision freedom carries over from the verified set.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, HcsSet

ALIGNMENTS = ("global", "per-user")

EVENT_KINDS = ("join-request", "assigned", "queued", "released", "granted-from-queue")


@dataclass(frozen=True)
class SacEvent:
    frame: int
    kind: str
    user: str
    level: int
    sequence: int | None = None

    def to_dict(self) -> dict:
        return {
            "frame": self.frame,
            "kind": self.kind,
            "user": self.user,
            "level": self.level,
            "sequence": self.sequence,
        }


@dataclass
class _Assignment:
    level: int
    sequence: int
    join_frame: int


class SacState:
    """Allocator state; single-writer, events applied in frame order."""

    def __init__(
        self,
        hcs_set: HcsSet,
        alignment: str = "global",
        sync_delay: int = 0,
        assign_seed: int | None = None,
    ):
        if alignment not in ALIGNMENTS:
            raise ConfigError(f"unknown alignment {alignment!r}, expected one of {ALIGNMENTS}")
        if sync_delay < 0:
            raise ConfigError(f"sync delay must be non-negative, got {sync_delay}")
        self.hcs_set = hcs_set
        self.alignment = alignment
        self.sync_delay = sync_delay
        self.frame = 0
        self.events: list[SacEvent] = []
        # sequence ids are positions in the set's (level, user)-sorted tuple
        self.pools: list[list[int]] = [[] for _ in hcs_set.config.levels]
        for sid, s in enumerate(hcs_set.sequences):
            self.pools[s.level].append(sid)
        for pool in self.pools:
            pool.sort()
        self.queues: list[deque[str]] = [deque() for _ in hcs_set.config.levels]
        self.assignments: dict[str, _Assignment] = {}
        if assign_seed is None:
            self._rng = None
            self.policy = "lowest-id"
        else:
            self._rng = np.random.default_rng(assign_seed)
            self.policy = f"seeded-random:{assign_seed}"

    # -- internals ---------------------------------------------------------

    def _advance(self, frame: int) -> None:
        if frame < self.frame:
            raise ValueError(
                f"events must arrive in frame order: got frame {frame} after {self.frame}"
            )
        self.frame = frame

    def _pick(self, pool: list[int]) -> int:
        if self._rng is None:
            return pool.pop(0)
        return pool.pop(int(self._rng.integers(len(pool))))

    def _log(self, event: SacEvent) -> SacEvent:
        self.events.append(event)
        return event

    # -- operations --------------------------------------------------------

    def request_access(self, user: str, level: int, frame: int) -> SacEvent:
        """Join request; returns the outcome event (assigned or queued)."""
        self._advance(frame)
        if not 0 <= level < self.hcs_set.config.num_levels:
            raise ValueError(f"unknown level {level}")
        if user in self.assignments:
            raise ValueError(f"user {user!r} already holds a sequence")
        if any(user in q for q in self.queues):
            raise ValueError(f"user {user!r} is already waiting")
        self._log(SacEvent(frame=frame, kind="join-request", user=user, level=level))
        pool = self.pools[level]
        if pool:
            sid = self._pick(pool)
            self.assignments[user] = _Assignment(
                level=level, sequence=sid, join_frame=frame + self.sync_delay
            )
            return self._log(
                SacEvent(frame=frame, kind="assigned", user=user, level=level, sequence=sid)
            )
        self.queues[level].append(user)
        return self._log(SacEvent(frame=frame, kind="queued", user=user, level=level))

    def release(self, user: str, frame: int) -> list[SacEvent]:
        """Leave; frees the sequence and grants it to the queue head, if any."""
        self._advance(frame)
        assignment = self.assignments.pop(user, None)
        if assignment is None:
            raise ValueError(f"user {user!r} holds no sequence")
        level = assignment.level
        out = [
            self._log(
                SacEvent(
                    frame=frame,
                    kind="released",
                    user=user,
                    level=level,
                    sequence=assignment.sequence,
                )
            )
        ]
        if self.queues[level]:
            head = self.queues[level].popleft()
            self.assignments[head] = _Assignment(
                level=level, sequence=assignment.sequence, join_frame=frame + self.sync_delay
            )
            out.append(
                self._log(
                    SacEvent(
                        frame=frame,
                        kind="granted-from-queue",
                        user=head,
                        level=level,
                        sequence=assignment.sequence,
                    )
                )
            )
        else:
            self.pools[level].append(assignment.sequence)
            self.pools[level].sort()
        return out

    def slots_for(self, user: str, frame: int) -> tuple[int, ...]:
        """Slot tuple the user transmits on in the given frame.

        Global alignment indexes every sequence by the network frame count;
        per-user alignment starts each user at its own join frame.  Both wrap
        cyclically after the sequence length.
        """
        assignment = self.assignments.get(user)
        if assignment is None:
            raise ValueError(f"user {user!r} holds no sequence")
        if frame < assignment.join_frame:
            raise ValueError(
                f"user {user!r} is not synchronized until frame {assignment.join_frame}"
            )
        seq = self.hcs_set.sequences[assignment.sequence]
        if self.alignment == "global":
            index = frame % seq.length
        else:
            index = (frame - assignment.join_frame) % seq.length
        return seq.frame(index)

    # -- snapshots ---------------------------------------------------------

    def pool_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.pools)

    def queue_lengths(self) -> tuple[int, ...]:
        return tuple(len(q) for q in self.queues)


def init(
    hcs_set: HcsSet,
    alignment: str = "global",
    sync_delay: int = 0,
    assign_seed: int | None = None,
) -> SacState:
    """Allocator for a verified set; refuses sets that fail verification."""
    from .verification import verify

    report = verify(hcs_set)
    if not report.passed:
        for name in (
            "zero_correlation",
            "occupancy",
            "frame_distinctness",
            "slot_coverage",
            "load_within_capacity",
        ):
            check = getattr(report, name)
            if not check.passed:
                raise ConfigError(f"set failed verification ({name}): {check.detail}")
        raise ConfigError("set failed verification")
    return SacState(
        hcs_set, alignment=alignment, sync_delay=sync_delay, assign_seed=assign_seed
    )


def run_script(
    hcs_set: HcsSet,
    script: list[dict],
    alignment: str = "global",
    sync_delay: int = 0,
    assign_seed: int | None = None,
) -> tuple[SacState, list[tuple[int, int, str, int, int]], list[tuple[int, int]]]:
    """Drive an allocator with a join/leave script and audit slot usage.

    Script entries are {"frame": f, "action": "join"|"leave", "user": name,
    "level": i (join only)}; entries are applied in (frame, script order).
    Returns the final state, audit rows (frame, slot, user, level, sequence)
    for every synchronized user in frames 0..max scripted frame, and the
    (frame, slot) pairs claimed more than once.
    """
    state = init(
        hcs_set, alignment=alignment, sync_delay=sync_delay, assign_seed=assign_seed
    )
    entries = []
    for pos, entry in enumerate(script):
        frame = entry["frame"]
        action = entry["action"]
        if action not in ("join", "leave"):
            raise ValueError(f"script entry {pos}: unknown action {action!r}")
        entries.append((int(frame), pos, entry))
    entries.sort(key=lambda e: (e[0], e[1]))

    audit: list[tuple[int, int, str, int, int]] = []
    collisions: list[tuple[int, int]] = []
    last_frame = entries[-1][0] if entries else -1
    cursor = 0
    for frame in range(last_frame + 1):
        while cursor < len(entries) and entries[cursor][0] == frame:
            entry = entries[cursor][2]
            if entry["action"] == "join":
                state.request_access(entry["user"], int(entry["level"]), frame)
            else:
                state.release(entry["user"], frame)
            cursor += 1
        rows = []
        for user, assignment in state.assignments.items():
            if assignment.join_frame > frame:
                continue
            for slot in state.slots_for(user, frame):
                rows.append((frame, slot, user, assignment.level, assignment.sequence))
        rows.sort(key=lambda row: (row[1], row[2]))
        seen: dict[int, str] = {}
        for row in rows:
            if row[1] in seen:
                collisions.append((frame, row[1]))
            seen[row[1]] = row[2]
        audit.extend(rows)
    return state, audit, collisions
