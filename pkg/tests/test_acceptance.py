"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists a
PASS/FAIL line per criterion with the measured values.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from explainsim.analytic import (
    abandonment_probability,
    expected_explanation_time,
    time_pmf,
    time_pmf_exact,
)
from explainsim.belief import (
    CostFunction,
    OverlapPrior,
    TrendClass,
    benefit_trajectory,
    classify_trend,
    make_uniform_prior,
    myopic_stop_time,
)
from explainsim.experiments import (
    ExperimentConfig,
    UniformPrior,
    chi_square_vs_pmf,
    compare_strategies,
    monte_carlo,
    reproduce_figure1,
    reproduce_figure2,
)
from explainsim.graph import Complete, OtherComponent, SmallWorld, TwoComponent
from explainsim.search import Outcome, SearchStrategy, StoppingRule

from oracles import enumerate_success_pmf, exact_bayes_trajectory

ALPHA = 0.001


@pytest.fixture
def measured(request):
    def record(text):
        request.node.user_properties.append(("measured", text))
    return record


def test_criterion_01_expected_time_law(measured):
    start = time.perf_counter()
    assert expected_explanation_time(300, 9) == 30.0
    worst = 0.0
    for n_r in range(2, 201):
        for n_k in range(1, n_r):
            d = time_pmf(n_r, n_k)
            worst = max(worst, abs(d.mean() - expected_explanation_time(n_r, n_k)))
    elapsed = time.perf_counter() - start
    measured(f"max |mean - E(T)| = {worst:.2e}, {elapsed:.1f}s")
    assert worst <= 1e-10
    assert elapsed < 10


def test_criterion_02_pmf_validity(measured):
    worst = 0.0
    for n_r in range(2, 201):
        for n_k in range(1, n_r):
            worst = max(worst, abs(time_pmf(n_r, n_k).pmf.sum() - 1.0))
    for n_r in range(2, 10):
        for n_k in range(1, n_r):
            assert time_pmf_exact(n_r, n_k) == enumerate_success_pmf(n_r, n_k)
    measured(f"max |sum - 1| = {worst:.2e}; exact match for N_R <= 9")
    assert worst <= 1e-12


def test_criterion_03_monte_carlo_vs_analytic(measured):
    start = time.perf_counter()
    s = monte_carlo(ExperimentConfig(Complete(300), 9, reps=20_000, seed=2024))
    gof = chi_square_vs_pmf(s.time_counts, time_pmf(300, 9))
    elapsed = time.perf_counter() - start
    z = (s.success_time_mean - 30.0) / s.success_time_se
    measured(f"mean {s.success_time_mean:.3f} (z={z:+.2f}), chi2 p={gof.p_value:.3f}, {elapsed:.1f}s")
    assert abs(z) < 3
    assert not gof.rejects(ALPHA)
    assert elapsed < 30


def test_criterion_04_uniform_benefit_law(measured):
    worst = 0.0
    for n_r in (10, 50, 300):
        eb = benefit_trajectory(make_uniform_prior(n_r), n_r, 1.0).expected_benefit
        exact = exact_bayes_trajectory([1] * n_r, n_r)
        assert exact == [Fraction(1, t + 1) for t in range(1, n_r)]
        worst = max(worst, float(np.max(np.abs(eb - 1 / np.arange(2, n_r + 1)))))
        assert eb[0] == 0.5
    fig = reproduce_figure1()
    for c in fig.curves:
        assert np.all(np.diff(c.trajectory.expected_benefit) <= 0)
    measured(f"max |E(B_t) - 1/(t+1)| = {worst:.2e}")
    assert worst <= 1e-12


def _exact_trend_sign(weights, n_r):
    e1, e2 = exact_bayes_trajectory(weights, n_r, t_max=2)[:2]
    return e2 > e1


def test_criterion_05_trend_classifier(measured):
    rng = np.random.default_rng(5)
    disagreements = ties = 0
    for k in range(1000):
        n_r = int(rng.integers(3, 80))
        m = int(rng.integers(1, n_r))
        weights = [int(w) for w in rng.integers(0, 30, size=m + 1)]
        if k % 10 == 0:
            # constructed ties: mass 1/4 at 0 and 3/4 at 2 with N_R = 4
            n_r, weights = 4, [1, 0, 3]
        if sum(weights[1:]) == 0:
            weights[-1] = 1
        rising = _exact_trend_sign(weights, n_r)
        e1, e2 = exact_bayes_trajectory(weights, n_r, t_max=2)[:2]
        ties += e1 == e2
        prior = OverlapPrior.from_weights(np.array(weights, dtype=float))
        got = classify_trend(prior, n_r) is TrendClass.RISING
        disagreements += got != rising
    measured(f"{disagreements} disagreements over 1000 priors ({ties} exact ties)")
    assert disagreements == 0


def test_criterion_06_figure2_reproduction(measured):
    start = time.perf_counter()
    fig = reproduce_figure2(300, 10.0, (0.5, 1, 2, 5), 1.0)
    elapsed = time.perf_counter() - start
    low = fig["ratio=0.5"].trajectory.expected_benefit
    peak_t = int(np.argmax(low)) + 1
    assert low[1] > low[0]
    assert peak_t < 250 and low[249] < low[248]
    for ratio in ("1", "2", "5"):
        eb = fig[f"ratio={ratio}"].trajectory.expected_benefit
        assert np.all(np.diff(eb[:50]) <= 0)
    measured(f"ratio 0.5 peaks at t={peak_t}, {elapsed:.2f}s")
    assert elapsed < 5


def test_criterion_07_stopping_despite_overlap(measured):
    rule = StoppingRule(1.0, CostFunction.constant(0.2))
    stop = myopic_stop_time(make_uniform_prior(100), 100, rule.benefit, rule.cost)
    reps = 100_000
    s = monte_carlo(ExperimentConfig(Complete(100), 5, prior=UniformPrior(),
                                     strategy=SearchStrategy.UNIFORM, stopping=rule,
                                     reps=reps, seed=7))
    target = (94 / 99) * (93 / 98) * (92 / 97) * (91 / 96)
    assert target == pytest.approx(abandonment_probability(100, 5, 4), rel=1e-14)
    rate = s.rates[Outcome.ABANDONED]
    se = np.sqrt(target * (1 - target) / reps)
    measured(f"stop time {stop}, abandonment {rate:.4f} vs {target:.4f} "
             f"(z={(rate - target) / se:+.1f}); three-draw value "
             f"{abandonment_probability(100, 5, 3):.4f}")
    assert stop == 4
    assert abs(rate - target) < 3 * se


def test_criterion_08_complete_graph_strategy_equivalence(measured):
    cfg = ExperimentConfig(Complete(50), 5, reps=100_000, seed=8)
    dist = time_pmf(50, 5)
    results = compare_strategies(cfg, list(SearchStrategy))
    pvals = {s.value: chi_square_vs_pmf(r.time_counts, dist).p_value for s, r in results.items()}
    measured(", ".join(f"{k} p={v:.3f}" for k, v in pvals.items()))
    assert all(p >= ALPHA for p in pvals.values())


def test_criterion_09_incompatibility_exhaustion(measured):
    spec = TwoComponent(SmallWorld(30, 4, 0.2), Complete(10))
    rates = {}
    for strategy in (SearchStrategy.BFS, SearchStrategy.DFS, SearchStrategy.RANDOM_NEIGHBOR):
        s = monte_carlo(ExperimentConfig(spec, 3, placement=OtherComponent(),
                                         strategy=strategy, reps=10_000, seed=9))
        rates[strategy.value] = s.rates[Outcome.EXHAUSTED]
    measured(", ".join(f"{k} {v:.4f}" for k, v in rates.items()))
    assert all(r == 1.0 for r in rates.values())


def test_criterion_10_knowledge_accumulation(measured):
    e = [expected_explanation_time(300, k, exact=True) for k in range(1, 300)]
    d = [b - a for a, b in zip(e, e[1:])]
    assert all(isinstance(x, Fraction) for x in e)
    measured(f"E(T) from {e[0]} to {e[-1]}")
    assert all(x < 0 for x in d)
    assert all(abs(b) <= abs(a) for a, b in zip(d, d[1:]))


def test_criterion_11_determinism(measured, tmp_path):
    from explainsim.cli import main

    cfg = ExperimentConfig(SmallWorld(80, 4, 0.1), 3, strategy=SearchStrategy.DFS,
                           stopping=StoppingRule(1.0, CostFunction.linear(0.001)),
                           reps=500, seed=11)
    a, b = monte_carlo(cfg), monte_carlo(cfg)
    for attr in ("to_csv", "histogram_csv", "episodes_csv"):
        assert getattr(a, attr)() == getattr(b, attr)()
    assert reproduce_figure2().to_csv() == reproduce_figure2().to_csv()

    config = tmp_path / "run.json"
    config.write_text('{"graph": {"kind": "erdos_renyi", "n": 60, "p": 0.08},'
                      ' "overlap": {"n_k": 2}, "strategy": "random_neighbor",'
                      ' "reps": 300, "seed": 3}')
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        assert main(["simulate", str(config), "--out", str(out)]) == 0
    names = sorted(p.name for p in outs[0].glob("*.csv"))
    assert names
    for name in names:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    measured(f"{len(names)} simulate CSVs byte-identical")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
