"""A rational explainer can quit even though common ground exists.

Five of a hundred concepts are shared, but the explainer starts from a
uniform belief over how many there are. Each step costs 0.2 and success
pays 1, so once the expected benefit of the next draw drops to the cost the
explainer stops. A tie counts as not worth it.
"""

from explainsim import (
    Complete,
    CostFunction,
    ExperimentConfig,
    Outcome,
    StoppingRule,
    abandonment_probability,
    benefit_trajectory,
    make_uniform_prior,
    monte_carlo,
    myopic_stop_time,
    worth_continuing,
)

N_R, N_K = 100, 5
cost = CostFunction.constant(0.2)
prior = make_uniform_prior(N_R)

traj = benefit_trajectory(prior, N_R, 1.0, t_max=6)
for s in traj.steps:
    verdict = "draw" if worth_continuing(s.expected_benefit, cost(s.t)) else "stop"
    print(f"t={s.t}: E(B_t) = {s.expected_benefit:.4f} vs cost {cost(s.t):.1f} -> {verdict}")

stop = myopic_stop_time(prior, N_R, 1.0, cost)
paid = stop - 1
print(f"stops before step {stop}, after {paid} paid draws")
print(f"chance the shared concepts were never reached: {abandonment_probability(N_R, N_K, paid):.4f}")

stats = monte_carlo(ExperimentConfig(Complete(N_R), N_K, stopping=StoppingRule(1.0, cost),
                                     reps=20000, seed=3))
print(f"simulated abandonment rate: {stats.rates[Outcome.ABANDONED]:.4f}")
print(f"mean net payoff: {stats.net_payoff_mean:.4f}")
