"""How long does it take to find common ground on a complete graph?

Draws are made without replacement from the explainer's concepts, so the
waiting time until the first shared concept follows a negative
hypergeometric law. This script prints E(T) for a few overlap sizes and
checks a quick Monte Carlo run against it.
"""

from explainsim import Complete, ExperimentConfig, expected_explanation_time, monte_carlo, time_pmf

N_R = 300

print(f"knowledge graph with {N_R} concepts")
for n_k in (1, 3, 9, 30, 100, 299):
    d = time_pmf(N_R, n_k)
    print(f"  overlap {n_k:3d}: E(T) = {expected_explanation_time(N_R, n_k):7.3f}"
          f"  sd = {d.variance() ** 0.5:6.3f}")

# each extra shared concept helps, but by less and less
gains = [expected_explanation_time(N_R, k) - expected_explanation_time(N_R, k + 1) for k in range(1, 6)]
print("savings from one more shared concept:", ", ".join(f"{g:.2f}" for g in gains))

stats = monte_carlo(ExperimentConfig(Complete(N_R), 9, reps=5000, seed=1))
print(f"simulated mean for overlap 9: {stats.success_time_mean:.2f} +/- {stats.success_time_se:.2f}")
