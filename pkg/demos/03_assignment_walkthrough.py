"""A small station walks through joining, waiting, and leaving.

The assignment center hands each joining user the lowest-numbered idle
sequence of its level; when a level runs dry, requests queue FIFO and a
departure hands the freed sequence straight to the queue head.
"""
from hcskit import SystemConfig, construct1, sac


def main():
    hcs_set = construct1(SystemConfig(t=24, levels=((2, 3), (3, 4), (6, 1)), seed=7))
    state = sac.init(hcs_set, alignment="global")
    print(f"pools per level: {state.pool_sizes()}  (3 + 4 + 1 sequences)")

    print("\nframe 0: alice, bob, carol all want level-1 access")
    for user in ("alice", "bob", "carol"):
        event = state.request_access(user, level=1, frame=0)
        print(f"  {user}: {event.kind}, sequence {event.sequence}")

    print("\nframe 2: their slots this frame (3 slots each, never overlapping)")
    for user in ("alice", "bob", "carol"):
        print(f"  {user}: slots {state.slots_for(user, 2)}")

    print("\nframe 3: dave and erin also want level 1, but only one is left")
    for user in ("dave", "erin"):
        event = state.request_access(user, level=1, frame=3)
        print(f"  {user}: {event.kind}" + (
            f", sequence {event.sequence}" if event.sequence is not None else ""
        ))
    print(f"  level-1 queue now holds {state.queue_lengths()[1]} user")

    print("\nframe 6: bob leaves; erin inherits his sequence without re-asking")
    for event in state.release("bob", frame=6):
        print(f"  {event.kind}: {event.user} / sequence {event.sequence}")

    script = [
        {"frame": f, "action": "join", "user": f"u{f}", "level": f % 3} for f in range(6)
    ] + [{"frame": 10, "action": "leave", "user": "u0"}]
    _, audit, collisions = sac.run_script(hcs_set, script)
    print(f"\nscripted replay: {len(audit)} audited slot claims over 11 frames, "
          f"{len(collisions)} collisions")


if __name__ == "__main__":
    main()
