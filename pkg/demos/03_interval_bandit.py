"""Interval-valued bandit: caution beats optimism against an adversary.

Arm success rates are known only up to intervals ([0.3, 0.7] and
[0.4, 0.8]). The robust belief is the set of the four corner hypotheses;
maximin play picks the arm with the better floor and never wavers. A
classical agent that commits to one corner as its prior can be punished by
an adversary that realizes the worst point of the box for it.
"""

import numpy as np

from ibrl.harness import ExperimentConfig, final_cumulative_regrets, run_experiment

cfg = ExperimentConfig(
    "ku-bandit",
    seed=2024,
    settings={"runs": 20, "steps": 100},
)
records = run_experiment(cfg)
finals = final_cumulative_regrets(records)

print("Worst-case adversary, 100 steps, 20 runs.")
print("Final worst-case expected regret per agent (mean over runs):")
for agent in sorted(finals):
    values = finals[agent]
    print(f"  {agent:24s} {values.mean():7.2f}  (all runs equal: {np.ptp(values) == 0.0})")

ib_actions = sorted({r.action for r in records if r.agent == "ib"})
print()
print(f"Arms the robust agent ever pulled: {ib_actions} (arm 2 has the better floor)")
print("Regret grows 0.3 per step for the robust floor versus 0.5 for the")
print("corner prior that bets on arm 1, which the adversary exploits forever.")
