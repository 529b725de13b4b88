"""A full pursuit: five pursuers, tube controllers, fleeing evader.

Runs the bundled five-pursuer ring against the flee-nearest evader and
prints a progress table.  The thing to watch is the assigned-hull signed
distance: it never goes negative, which is the whole point.
"""
from pursuit.scenario import load_scenario
from pursuit.sim import Game


def main():
    cfg = load_scenario("five_pursuers", ["evader_policy=flee_nearest"])
    game = Game(cfg)
    print("assignment (pursuer -> sector):", game.assignment)
    print(f"{'t':>4} {'min dist':>9} {'hull(assigned)':>14} "
          f"{'hull(all)':>10} {'encircled':>9}")
    while not game.state.captured and game.state.t < cfg.max_steps:
        rec = game.tick()
        if rec.t % 10 == 0 or rec.captured:
            print(f"{rec.t:>4} {rec.min_pursuer_distance:>9.2f} "
                  f"{rec.hull_signed_distance_assigned:>14.3f} "
                  f"{rec.hull_signed_distance_all:>10.3f} "
                  f"{str(rec.encircled):>9}")
    out = game.outcome()
    print(f"\noutcome: {out.kind} at t={out.t}")
    low = min(r.hull_signed_distance_assigned for r in game.records)
    print(f"worst assigned-hull signed distance: {low:.4f} (never negative)")


if __name__ == "__main__":
    main()
