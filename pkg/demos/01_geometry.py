"""Tour of the 2-D polyhedron toolbox.

Builds a few H-rep sets, walks through membership, support, vertices,
and the Minkowski/Pontryagin operations that the tube controller is
built on.
"""
import numpy as np

from pursuit.geom2d import (HPolyhedron, convex_hull, hull_signed_distance,
                            minkowski_sum, pontryagin_diff)


def main():
    box = HPolyhedron.centered_box(1.0)
    print("unit box:")
    print("  vertices:\n", box.vertices())
    print("  contains (0.5, -0.9):", box.contains([0.5, -0.9]))
    print("  support along (1, 1):", box.support([1.0, 1.0]))

    tri = convex_hull([[0, 0], [4, 0], [0, 3]])
    print("\ntriangle hull, CCW vertices:\n", tri.vertices)
    for q in ([1.0, 1.0], [4.0, 3.0]):
        d = hull_signed_distance(tri, q)
        side = "inside" if d >= 0 else "outside"
        print(f"  signed distance to {q}: {d:+.3f} ({side})")

    # growing a set by a disturbance box, then shrinking it back
    big = minkowski_sum(tri.to_hpolyhedron(), box)
    back = pontryagin_diff(big, box)
    print("\n(T + B) - B recovers T:")
    print("  original vertices:\n", tri.vertices)
    print("  recovered vertices:\n", back.vertices())

    # erosion by a set larger than the operand empties it
    gone = pontryagin_diff(box, HPolyhedron.centered_box(2.0))
    print("\nbox eroded by a bigger box is empty:", gone.is_empty())

    # a cone (sector) shrinks by a row-wise offset, staying a cone shape
    A = np.array([[0.0, -1.0], [-np.sin(np.pi / 2), np.cos(np.pi / 2)]])
    cone = HPolyhedron(A, np.zeros(2))
    shrunk = pontryagin_diff(cone, HPolyhedron.centered_box(0.5))
    print("\nquadrant cone tightened by a 0.5 box:")
    print("  offsets:", shrunk.b)


if __name__ == "__main__":
    main()
