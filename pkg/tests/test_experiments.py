from fractions import Fraction

import numpy as np
import pytest

from explainsim.analytic import abandonment_probability, time_pmf
from explainsim.belief import CostFunction, TrendClass
from explainsim.experiments import (
    GRAPH_STREAM,
    OVERLAP_STREAM,
    EpisodeRecord,
    ExperimentConfig,
    PointPrior,
    TruncatedNormalPrior,
    UniformPrior,
    build_prior,
    chi_square_vs_pmf,
    compare_strategies,
    derive_seed,
    monte_carlo,
    reproduce_figure1,
    reproduce_figure2,
    run_replication,
    seed_sequence,
    summarize,
)
from explainsim.graph import (
    Complete,
    FarFromTarget,
    OtherComponent,
    SmallWorld,
    TwoComponent,
    UniformRandom,
    generate,
    place_overlap,
)
from explainsim.search import Outcome, SearchStrategy, StoppingRule

from oracles import exact_bayes_trajectory


def test_derive_seed_is_counter_based():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert len({derive_seed(1, s, r) for s in range(3) for r in range(100)}) == 300


def test_build_prior_variants():
    assert build_prior(UniformPrior(), 10).m == 9
    assert build_prior(PointPrior(3), 10).mean == 3
    p = build_prior(TruncatedNormalPrior(10, 5), 300)
    assert p.m == 299


def test_monte_carlo_complete_mean_time():
    cfg = ExperimentConfig(Complete(300), 9, reps=4000, seed=11)
    s = monte_carlo(cfg)
    assert s.counts[Outcome.EXPLAINED] == 4000
    assert abs(s.success_time_mean - 30.0) < 3 * s.success_time_se


def test_monte_carlo_two_component_exhausts():
    cfg = ExperimentConfig(TwoComponent(Complete(6), Complete(4)), 2,
                           placement=OtherComponent(), strategy="bfs", reps=500, seed=3)
    s = monte_carlo(cfg)
    assert s.rates[Outcome.EXHAUSTED] == 1.0
    assert np.isnan(s.success_time_mean)


def test_monte_carlo_abandonment_rate_three_paid_steps():
    cfg = ExperimentConfig(Complete(100), 5, prior=UniformPrior(), strategy="uniform",
                           stopping=StoppingRule(1.0, CostFunction.constant(0.2)),
                           reps=20000, seed=5)
    s = monte_carlo(cfg)
    p = abandonment_probability(100, 5, 3)
    assert abs(s.rates[Outcome.ABANDONED] - p) < 3 * np.sqrt(p * (1 - p) / cfg.reps)
    assert all(r.t_final <= 3 for r in s.records)


def test_monte_carlo_deterministic_and_worker_independent():
    cfg = ExperimentConfig(SmallWorld(60, 4, 0.2), 3, strategy="dfs",
                           stopping=StoppingRule(1.0, CostFunction.constant(0.01)),
                           reps=300, seed=9)
    a, b = monte_carlo(cfg), monte_carlo(cfg, workers=3)
    assert a.episodes_csv() == b.episodes_csv()
    assert a.to_csv() == b.to_csv()
    assert a == b


def test_summary_order_independent():
    cfg = ExperimentConfig(Complete(30), 2, strategy="random_neighbor", reps=50, seed=1)
    recs = [EpisodeRecord.from_result(r, run_replication(cfg, r)) for r in range(50)]
    assert summarize(recs[::-1]).to_csv() == summarize(recs).to_csv()


def test_summary_counts_sum_to_reps():
    cfg = ExperimentConfig(SmallWorld(40, 2, 0.3), 2, strategy="bfs",
                           stopping=StoppingRule(1.0, CostFunction.constant(0.05)),
                           reps=200, seed=4)
    s = monte_carlo(cfg)
    assert sum(s.counts.values()) == 200
    assert all(0 <= r <= 1 for r in s.rates.values())
    assert s.net_payoff_mean is not None


def test_compare_strategies_paired_complete():
    cfg = ExperimentConfig(Complete(50), 5, reps=3000, seed=21)
    res = compare_strategies(cfg, list(SearchStrategy))
    for s in res.values():
        assert abs(s.success_time_mean - 50 / 6) < 3 * s.success_time_se


def test_compare_strategies_same_graphs():
    cfg = ExperimentConfig(SmallWorld(50, 4, 0.1), 3, reps=20, seed=2)
    res = compare_strategies(cfg, ["bfs", "dfs"])
    for rec_b, rec_d in zip(res[SearchStrategy.BFS].records, res[SearchStrategy.DFS].records):
        assert rec_b.rep == rec_d.rep
        g = generate(cfg.graph, seed_sequence(cfg.seed, GRAPH_STREAM, rec_b.rep))
        g = place_overlap(g, 3, UniformRandom(), seed_sequence(cfg.seed, OVERLAP_STREAM, rec_b.rep))
        assert rec_b.explanatory_node in g.overlap and rec_d.explanatory_node in g.overlap


def test_bfs_dfs_sign_stable_on_small_world():
    signs = set()
    for seed in range(5):
        cfg = ExperimentConfig(SmallWorld(200, 4, 0.1), 5, placement=FarFromTarget(5),
                               reps=300, seed=seed)
        res = compare_strategies(cfg, ["bfs", "dfs"])
        b, d = res[SearchStrategy.BFS], res[SearchStrategy.DFS]
        assert np.isfinite(b.success_time_mean) and np.isfinite(d.success_time_mean)
        signs.add(np.sign(b.success_time_mean - d.success_time_mean))
    assert len(signs) == 1


def test_chi_square_flags_wrong_distribution():
    rng = np.random.default_rng(0)
    d = time_pmf(50, 5)
    wrong = rng.integers(1, 20, size=5000)
    t, c = np.unique(wrong, return_counts=True)
    assert chi_square_vs_pmf(dict(zip(t.tolist(), c.tolist())), d).rejects(0.001)
    # observations outside the support reject outright
    assert chi_square_vs_pmf({47: 3}, d).rejects(0.001)


def test_figure1_curves():
    fig = reproduce_figure1()
    assert [c.label for c in fig.curves] == ["N_R=50", "N_R=100", "N_R=200", "N_R=300"]
    for c in fig.curves:
        eb = c.trajectory.expected_benefit
        assert eb[0] == pytest.approx(0.5, abs=1e-15)
        assert np.all(np.diff(eb) <= 1e-15)


def test_figure1_small_exact():
    eb = reproduce_figure1([10], 1.0)["N_R=10"].trajectory.expected_benefit
    exact = exact_bayes_trajectory([1] * 10, 10)
    assert exact == [Fraction(1, k) for k in range(2, 11)]
    np.testing.assert_allclose(eb, [float(x) for x in exact], atol=1e-15)
    np.testing.assert_allclose(eb[:8], [1 / k for k in range(2, 10)], atol=1e-15)


def test_figure1_t_max_truncates():
    fig = reproduce_figure1([10, 50], 1.0, t_max=20)
    assert [len(c.trajectory) for c in fig.curves] == [9, 20]


def test_figure2_shapes():
    fig = reproduce_figure2()
    low = fig["ratio=0.5"]
    eb = low.trajectory.expected_benefit
    assert low.trend is TrendClass.RISING
    assert eb[1] > eb[0]
    peak_t, _ = low.trajectory.peak()
    assert 2 <= peak_t < 250
    assert np.all(np.diff(eb[peak_t - 1:250]) < 0)
    for label in ("ratio=1", "ratio=2", "ratio=5"):
        c = fig[label]
        assert c.trend is TrendClass.FALLING
        assert np.all(np.diff(c.trajectory.expected_benefit[:50]) <= 0)


def test_figure2_trend_matches_trajectory_sign():
    fig = reproduce_figure2(ratios=[0.25, 0.5, 0.8, 0.95, 1.0, 3.0])
    for c in fig.curves:
        eb = c.trajectory.expected_benefit
        assert (eb[1] - eb[0] > 1e-12) == (c.trend is TrendClass.RISING)


def test_figure2_csv_long_format():
    text = reproduce_figure2(ratios=[0.5], t_max=3).to_csv()
    lines = text.splitlines()
    assert lines[0] == "curve,t,pool,mean,variance,expected_benefit"
    assert len(lines) == 4 and lines[1].startswith("ratio=0.5,1,299,")
