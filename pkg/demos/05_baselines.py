"""Why the guarantee matters: baselines vs the committed boundary runner.

The boundary-seek evader picks the hull edge it can reach fastest under
its box-norm speed limit and commits to that direction.  Both greedy
baselines let it break out of the hull at least once; the tube team
never does.
"""
from pursuit.scenario import load_scenario
from pursuit.sim import run_game


def main():
    print(f"{'team policy':>14} {'outcome':>9} {'t':>4} "
          f"{'violations':>10} {'worst hull dist':>15}")
    for policy in ("tmpc", "voronoi", "direct_charge"):
        cfg = load_scenario("five_pursuers",
                            [f"policy={policy}",
                             "evader_policy=boundary_seek"])
        outcome, records = run_game(cfg)
        violations = sum(1 for r in records if r.hull_signed_distance_all < 0)
        worst = min(r.hull_signed_distance_all for r in records)
        print(f"{policy:>14} {outcome.kind:>9} {outcome.t:>4} "
              f"{violations:>10} {worst:>15.3f}")
    print("\nonly the tube team keeps the evader inside the hull throughout")


if __name__ == "__main__":
    main()
