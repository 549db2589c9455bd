import numpy as np
import pytest

from hcskit import SystemConfig, construct1, construct2

# the two worked configurations exercised throughout the suite
T24_LEVELS = ((2, 3), (3, 4), (6, 1))
T8_LEVELS = ((1, 1), (3, 1), (4, 1))


@pytest.fixture(scope="session")
def cfg24():
    return SystemConfig(t=24, levels=T24_LEVELS, seed=20240817)


@pytest.fixture(scope="session")
def set24(cfg24):
    """Permutation-table set: length 144, 8 sequences over 24 slots."""
    return construct1(cfg24)


@pytest.fixture(scope="session")
def cfg8():
    return SystemConfig(t=8, levels=T8_LEVELS)


@pytest.fixture(scope="session")
def set128(cfg8):
    """Modular-affine set in compat mode: length 128 over 8 slots."""
    return construct2(cfg8, n=2, g=3, d=4, mode="compat")


@pytest.fixture(scope="session")
def set32(cfg8):
    """Modular-affine set in true-order mode: d=2, length 32."""
    return construct2(cfg8, n=2, g=3, mode="true-order")


@pytest.fixture(scope="session")
def set_c1_t8():
    """Permutation-table set on the simulator's 8-slot frame: length 32."""
    return construct1(SystemConfig(t=8, levels=((4, 2),), seed=1105))


def remake_set(hcs_set, mutate):
    """Copy a set with ``mutate(seq_index, frames_array)`` applied to each copy."""
    from hcskit import HcsSequence, HcsSet

    sequences = []
    for index, s in enumerate(hcs_set.sequences):
        frames = np.array(s.frames)
        mutate(index, frames)
        sequences.append(HcsSequence(level=s.level, user=s.user, frames=frames))
    return HcsSet(
        config=hcs_set.config,
        length=hcs_set.length,
        sequences=tuple(sequences),
        provenance=hcs_set.provenance,
    )


def shadow_events(hcs_set, script):
    """Straight-line reimplementation of the allocator for cross-checking.

    FIFO queues, lowest-id pools, per (frame, script order) application; any
    divergence from the real allocator's event stream is a bug in one of them.
    """
    from bisect import insort
    from collections import deque

    pools = {i: [] for i in range(hcs_set.config.num_levels)}
    for sid, s in enumerate(hcs_set.sequences):
        pools[s.level].append(sid)
    for pool in pools.values():
        pool.sort()
    queues = {i: deque() for i in pools}
    held = {}
    events = []
    entries = sorted(
        ((e["frame"], pos, e) for pos, e in enumerate(script)), key=lambda x: (x[0], x[1])
    )
    for frame, _, e in entries:
        user = e["user"]
        if e["action"] == "join":
            level = e["level"]
            events.append((frame, "join-request", user, level, None))
            if pools[level]:
                sid = pools[level].pop(0)
                held[user] = (level, sid)
                events.append((frame, "assigned", user, level, sid))
            else:
                queues[level].append(user)
                events.append((frame, "queued", user, level, None))
        else:
            level, sid = held.pop(user)
            events.append((frame, "released", user, level, sid))
            if queues[level]:
                head = queues[level].popleft()
                held[head] = (level, sid)
                events.append((frame, "granted-from-queue", head, level, sid))
            else:
                insort(pools[level], sid)
    return events


def random_script(gen, hcs_set, frames):
    """Valid join/leave script; tracks holders so leaves are always legal."""
    from collections import deque

    num_levels = hcs_set.config.num_levels
    pools = {
        i: sum(1 for s in hcs_set.sequences if s.level == i) for i in range(num_levels)
    }
    queues = {i: deque() for i in range(num_levels)}
    held = {}
    idle = [f"u{i}" for i in range(12)]
    script = []
    for frame in range(frames):
        for _ in range(int(gen.integers(0, 3))):
            if held and gen.random() < 0.45:
                user = sorted(held)[int(gen.integers(len(held)))]
                level = held.pop(user)
                script.append({"frame": frame, "action": "leave", "user": user})
                idle.append(user)
                if queues[level]:
                    head = queues[level].popleft()
                    held[head] = level
                else:
                    pools[level] += 1
            elif idle:
                user = idle.pop(int(gen.integers(len(idle))))
                level = int(gen.integers(num_levels))
                script.append(
                    {"frame": frame, "action": "join", "user": user, "level": level}
                )
                if pools[level]:
                    pools[level] -= 1
                    held[user] = level
                else:
                    queues[level].append(user)
    return script
