"""Local search on sparse knowledge graphs.

On a small-world graph the explainer can only step to concepts adjacent to
ones already examined. When the shared concepts sit far from the target,
a depth-first walk reaches them sooner than breadth-first layering. If they
live in a separate component the search always exhausts.
"""

from explainsim import (
    ExperimentConfig,
    FarFromTarget,
    OtherComponent,
    Outcome,
    SmallWorld,
    TwoComponent,
    compare_strategies,
    monte_carlo,
)

cfg = ExperimentConfig(SmallWorld(200, 4, 0.1), 5, placement=FarFromTarget(5), reps=500, seed=0)
for strategy, s in compare_strategies(cfg, ["bfs", "dfs", "random_neighbor"]).items():
    print(f"{strategy.value:>16}: mean time {s.success_time_mean:6.1f} +/- {s.success_time_se:.1f},"
          f" mean path length {sum(r.path_length for r in s.records) / len(s.records):.1f}")

split = ExperimentConfig(TwoComponent(SmallWorld(60, 4, 0.1), SmallWorld(40, 4, 0.1)), 5,
                         placement=OtherComponent(), strategy="bfs", reps=200, seed=0)
print("exhaustion rate across components:", monte_carlo(split).rates[Outcome.EXHAUSTED])
