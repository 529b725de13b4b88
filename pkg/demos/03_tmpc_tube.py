"""One pursuer, one sector: the tube controller in isolation.

The relative state x = p - e obeys x+ = x + u + w with the evader step w
acting as a bounded disturbance.  The controller plans a nominal
trajectory in tightened sets and adds the ancillary correction; the real
state then stays within one disturbance box of the plan no matter what
the evader does.
"""
import numpy as np

from pursuit.geom2d import HPolyhedron
from pursuit.partition import AnglePartition, sectors_from_partition
from pursuit.tmpc import control, shifted_guess, solve_tmpc, step_relative, tighten


def main():
    part = AnglePartition(0.0, [np.pi / 2] * 4)
    sector = sectors_from_partition(part).elements[0]  # first quadrant
    W = HPolyhedron.centered_box(1.0)    # evader moves
    U = HPolyhedron.centered_box(1.1)    # pursuer budget
    spec = tighten(sector, W, U, horizon=10)
    print("tightened input box offsets:", spec.tightened_input.b)
    print("tightened sector offsets:", spec.tightened_state.b)

    rng = np.random.default_rng(4)
    x = np.array([40.0, 25.0])
    plan = solve_tmpc(x, spec)
    print("\nnominal plan from", x)
    print("  first states:\n", np.round(plan.nominal_states[:4], 2))

    print("\nclosed loop against random disturbances:")
    for t in range(30):
        u = control(x, plan)
        w = rng.uniform(-1.0, 1.0, 2)
        x = step_relative(x, u, w)
        slack = float(np.min(spec.sector.b - spec.sector.A @ x))
        if t % 5 == 0:
            print(f"  t={t:2d} x=({x[0]:7.2f},{x[1]:7.2f}) "
                  f"|u|={np.max(np.abs(u)):.3f} sector slack={slack:+.3f}")
        assert slack >= -1e-9, "left the sector"
        # warm-starting with the shifted plan keeps the QP feasible forever
        plan = solve_tmpc(x, spec, warm=shifted_guess(plan))
    print("stayed in the sector for 30 disturbed steps")


if __name__ == "__main__":
    main()
