"""How many users fit in a frame, level by level.

A frame of t slots can absorb at most t slot-claims per frame, so a roster
with per-level demands r_i and user counts u_i is feasible only when
sum(r_i * u_i) <= t, and it wastes nothing exactly at equality.
"""
from hcskit import SystemConfig, check_bound, enumerate_user_counts


def show(t, levels):
    report = check_bound(SystemConfig(t=t, levels=levels))
    roster = ", ".join(f"{u} users x {r} slots" for r, u in levels)
    verdict = "saturates the frame" if report.optimal else (
        "feasible" if report.feasible else "over capacity"
    )
    print(f"  t={t:3d}  [{roster}]  load {report.load}/{report.capacity}: {verdict}")


def main():
    print("Single rosters:")
    show(24, ((2, 3), (3, 4), (6, 1)))
    show(8, ((1, 1), (3, 1), (4, 1)))
    show(8, ((4, 3),))
    show(20, ((2, 2), (5, 1)))

    for rv in ((1, 2, 6), (3, 5, 15)):
        rosters = enumerate_user_counts(24, rv)
        optimal = [r.counts for r in rosters if r.optimal]
        print(f"\nAll feasible user-count tuples for t=24, demands {rv}:")
        print(f"  {len(rosters)} tuples, {len(optimal)} saturate the frame")
        print(f"  first saturating rosters: {optimal[:6]}")


if __name__ == "__main__":
    main()
