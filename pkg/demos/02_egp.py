"""Encirclement-guaranteed partitions from scratch.

Shows why three sectors can never work, what the adjacent-sum test
looks like, and how the QP-based construction places sector rays around
a real pursuer configuration.
"""
import numpy as np

from pursuit.partition import (AnglePartition, InfeasiblePartition,
                               construct_egp, egp_oracle, is_egp,
                               partition_cost, relative_angles,
                               select_subset)

PURSUERS = np.array([[10.0, 90.0], [-60.0, 80.0], [-90.0, -90.0],
                     [90.0, -10.0], [-90.0, 30.0]])


def main():
    # the adjacent-sum test on hand-built partitions
    even = AnglePartition(0.0, [np.pi / 2] * 4)
    skewed = AnglePartition(0.0, [2.5, 2.5, 0.6, 2 * np.pi - 5.6])
    for name, part in (("even quarters", even), ("skewed", skewed)):
        print(f"{name}: is_egp={is_egp(part)} "
              f"oracle={egp_oracle(part)} cost={partition_cost(part):.3f}")

    # three sectors: some adjacent pair always spans more than pi
    three = AnglePartition(0.0, [2 * np.pi / 3] * 3)
    print("\nthree equal sectors:", "EGP" if is_egp(three) else "never an EGP")

    # construct a partition around the five-pursuer ring
    ra = relative_angles(PURSUERS, [0.0, 0.0])
    print("\npursuer bearings (rad):", np.round(ra.angles, 3))
    selected = select_subset(ra, 4)
    part = construct_egp(ra, selected)
    print("selected pursuers:", selected)
    print("sector widths:", np.round(part.angles, 4))
    print("boundary rays:", np.round(part.boundaries()[:-1], 4))
    print("cost:", f"{partition_cost(part):.6f}")
    for i in selected:
        print(f"  pursuer {i} sits in sector {part.sector_of_point(PURSUERS[i])}")

    # a clustered team has no encircling subset at all
    clustered = PURSUERS * np.array([0.02, 0.02]) + np.array([50.0, 0.0])
    try:
        construct_egp(relative_angles(clustered, [0.0, 0.0]), [0, 1, 2, 3])
    except InfeasiblePartition as exc:
        print("\nclustered team:", exc)


if __name__ == "__main__":
    main()
