"""Replicated episodes and the two benefit-dynamics figures.

Seeding is counter based: replication ``r`` of an experiment with master
seed ``s`` draws its graph from ``SeedSequence(s, spawn_key=(0, r))``, its
overlap set from ``(1, r)`` and its traversal from ``(2, r)``. Results
therefore do not depend on execution order or worker count, and two
experiments that share a master seed see the same graphs and overlap sets
replication by replication.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import stats

from .analytic import TimeDistribution
from .belief import (
    BenefitTrajectory,
    OverlapPrior,
    TrendClass,
    benefit_trajectory,
    classify_trend,
    make_point_prior,
    make_truncated_normal_prior,
    make_uniform_prior,
)
from .errors import InvalidArgumentError
from .graph import (
    GraphSpec,
    OverlapPlacement,
    UniformRandom,
    generate,
    place_overlap,
)
from .search import (
    BeliefTracker,
    EpisodeResult,
    Outcome,
    SearchStrategy,
    StoppingRule,
    run_episode,
)

GRAPH_STREAM, OVERLAP_STREAM, EPISODE_STREAM = 0, 1, 2


def seed_sequence(master: int, stream: int, rep: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master, spawn_key=(stream, rep))


def derive_seed(master: int, stream: int, rep: int) -> int:
    """64-bit integer seed for one stream of one replication."""
    return int(seed_sequence(master, stream, rep).generate_state(1, dtype=np.uint64)[0])


# ---------------------------------------------------------------------------
# priors


@dataclass(frozen=True)
class UniformPrior:
    """Uniform over ``0 .. n_r - 1``."""


@dataclass(frozen=True)
class TruncatedNormalPrior:
    mean: float
    variance: float
    m: int | None = None  # defaults to n_r - 1


@dataclass(frozen=True)
class PointPrior:
    k: int


PriorSpec = Union[UniformPrior, TruncatedNormalPrior, PointPrior]


def build_prior(spec: PriorSpec, n_r: int) -> OverlapPrior:
    if isinstance(spec, UniformPrior):
        return make_uniform_prior(n_r)
    if isinstance(spec, TruncatedNormalPrior):
        m = n_r - 1 if spec.m is None else spec.m
        if m > n_r - 1:
            raise InvalidArgumentError(f"prior support m={m} exceeds n_r - 1 = {n_r - 1}")
        return make_truncated_normal_prior(spec.mean, spec.variance, m)
    if isinstance(spec, PointPrior):
        if not 0 <= spec.k <= n_r - 1:
            raise InvalidArgumentError(f"point prior at {spec.k} outside 0..{n_r - 1}")
        return make_point_prior(spec.k)
    raise InvalidArgumentError(f"unknown prior spec {spec!r}")


# ---------------------------------------------------------------------------
# configuration and summaries


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSpec
    n_k: int
    placement: OverlapPlacement = UniformRandom()
    prior: PriorSpec = UniformPrior()
    strategy: SearchStrategy = SearchStrategy.UNIFORM
    stopping: StoppingRule | None = None
    reps: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", SearchStrategy(self.strategy))
        if self.reps < 1:
            raise InvalidArgumentError("reps must be >= 1")
        if self.seed < 0:
            raise InvalidArgumentError("seed must be >= 0")


@dataclass(frozen=True)
class EpisodeRecord:
    rep: int
    outcome: Outcome
    t_final: int
    explanatory_node: int | None
    net_payoff: float | None
    path_length: int

    @classmethod
    def from_result(cls, rep: int, r: EpisodeResult) -> EpisodeRecord:
        return cls(rep, r.outcome, r.t, r.explanatory_node, r.net_payoff, r.path_length)


EPISODE_COLUMNS = ("rep", "outcome", "t_final", "explanatory_node", "net_payoff", "path_length")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


@dataclass(frozen=True)
class SummaryStats:
    reps: int
    counts: dict[Outcome, int]
    success_time_mean: float
    success_time_var: float
    success_time_se: float
    net_payoff_mean: float | None
    time_counts: dict[int, int]
    records: tuple[EpisodeRecord, ...] = field(default=(), repr=False, compare=False)

    @property
    def rates(self) -> dict[Outcome, float]:
        return {o: self.counts[o] / self.reps for o in Outcome}

    @property
    def n_explained(self) -> int:
        return self.counts[Outcome.EXPLAINED]

    def rate_se(self, outcome: Outcome) -> float:
        p = self.rates[outcome]
        return math.sqrt(p * (1 - p) / self.reps)

    def as_rows(self) -> list[tuple[str, object]]:
        rows: list[tuple[str, object]] = [("reps", self.reps)]
        for o in Outcome:
            rows.append((f"{o.value}_count", self.counts[o]))
        for o in Outcome:
            rows.append((f"{o.value}_rate", self.rates[o]))
        rows += [
            ("success_time_mean", self.success_time_mean),
            ("success_time_var", self.success_time_var),
            ("success_time_se", self.success_time_se),
            ("net_payoff_mean", self.net_payoff_mean),
        ]
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("metric", "value"))
        for k, v in self.as_rows():
            w.writerow((k, _fmt(v)))
        return buf.getvalue()

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t", "count"))
        for t in sorted(self.time_counts):
            w.writerow((t, self.time_counts[t]))
        return buf.getvalue()

    def episodes_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(EPISODE_COLUMNS)
        for r in self.records:
            w.writerow(
                (r.rep, r.outcome.value, r.t_final, _fmt(r.explanatory_node),
                 _fmt(r.net_payoff), r.path_length)
            )
        return buf.getvalue()


def summarize(records: Sequence[EpisodeRecord]) -> SummaryStats:
    """Aggregate records; the result depends only on the set of ``rep`` indices."""
    records = tuple(sorted(records, key=lambda r: r.rep))
    counts = {o: 0 for o in Outcome}
    times = []
    payoffs = []
    for r in records:
        counts[r.outcome] += 1
        if r.outcome is Outcome.EXPLAINED:
            times.append(r.t_final)
        if r.net_payoff is not None:
            payoffs.append(r.net_payoff)
    times_arr = np.array(times, dtype=float)
    if times_arr.size:
        mean = float(times_arr.mean())
        var = float(times_arr.var(ddof=1)) if times_arr.size > 1 else 0.0
        se = math.sqrt(var / times_arr.size)
    else:
        mean = var = se = math.nan
    ts, cs = np.unique(np.array(times, dtype=int), return_counts=True)
    return SummaryStats(
        reps=len(records),
        counts=counts,
        success_time_mean=mean,
        success_time_var=var,
        success_time_se=se,
        net_payoff_mean=float(np.mean(payoffs)) if payoffs else None,
        time_counts=dict(zip(ts.tolist(), cs.tolist())),
        records=records,
    )


# ---------------------------------------------------------------------------
# Monte Carlo


def run_replication(
    config: ExperimentConfig, rep: int, prior: OverlapPrior | None = None,
    tracker: BeliefTracker | None = None,
) -> EpisodeResult:
    """Build replication ``rep``'s graph and overlap, then run its episode."""
    g = generate(config.graph, seed_sequence(config.seed, GRAPH_STREAM, rep))
    g = place_overlap(g, config.n_k, config.placement, seed_sequence(config.seed, OVERLAP_STREAM, rep))
    if prior is None:
        prior = build_prior(config.prior, g.n)
    return run_episode(
        g, prior, config.strategy, config.stopping,
        seed=derive_seed(config.seed, EPISODE_STREAM, rep), tracker=tracker,
    )


def _run_block(config: ExperimentConfig, reps: Iterable[int]) -> list[EpisodeRecord]:
    prior = build_prior(config.prior, config.graph.n)
    tracker = None
    if config.stopping is not None:
        tracker = BeliefTracker(prior, config.graph.n, config.stopping.benefit)
    return [
        EpisodeRecord.from_result(rep, run_replication(config, rep, prior, tracker))
        for rep in reps
    ]


def monte_carlo(config: ExperimentConfig, workers: int = 1) -> SummaryStats:
    """Run ``config.reps`` independent episodes and summarize them.

    With ``workers > 1`` replications are split into contiguous blocks run in
    separate processes; the summary is identical to the serial one.
    """
    if workers <= 1 or config.reps < 2 * workers:
        return summarize(_run_block(config, range(config.reps)))
    bounds = np.linspace(0, config.reps, workers + 1).astype(int)
    blocks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_run_block, [config] * len(blocks), blocks)
        records = [r for part in parts for r in part]
    return summarize(records)


def compare_strategies(
    config: ExperimentConfig, strategies: Sequence[SearchStrategy | str], workers: int = 1
) -> dict[SearchStrategy, SummaryStats]:
    """Paired comparison: every strategy sees the same graph and overlap per replication."""
    return {
        SearchStrategy(s): monte_carlo(replace(config, strategy=SearchStrategy(s)), workers)
        for s in strategies
    }


@dataclass(frozen=True)
class GoodnessOfFit:
    statistic: float
    dof: int
    p_value: float

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha


def chi_square_vs_pmf(time_counts: dict[int, int], dist: TimeDistribution,
                      min_expected: float = 5.0) -> GoodnessOfFit:
    """Pearson test of observed success steps against ``dist``.

    Adjacent steps are pooled until every bin expects at least
    ``min_expected`` observations; a short last bin joins its neighbour.
    """
    n = sum(time_counts.values())
    if n == 0:
        raise InvalidArgumentError("no successes to test")
    if any(t < 1 or t > dist.pmf.size for t in time_counts):
        return GoodnessOfFit(math.inf, 0, 0.0)
    expected = n * dist.pmf
    observed = np.zeros(dist.pmf.size)
    for t, c in time_counts.items():
        observed[t - 1] = c

    bins_o, bins_e = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            bins_o.append(acc_o)
            bins_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if bins_e:
            bins_o[-1] += acc_o
            bins_e[-1] += acc_e
        else:
            bins_o.append(acc_o)
            bins_e.append(acc_e)
    o_arr, e_arr = np.array(bins_o), np.array(bins_e)
    dof = len(bins_e) - 1
    stat = float(((o_arr - e_arr) ** 2 / e_arr).sum())
    p = float(stats.chi2.sf(stat, dof)) if dof > 0 else 1.0
    return GoodnessOfFit(stat, dof, p)


# ---------------------------------------------------------------------------
# figures


@dataclass(frozen=True)
class Curve:
    label: str
    trajectory: BenefitTrajectory
    trend: TrendClass | None = None
    prior_mean: float | None = None
    prior_variance: float | None = None


@dataclass(frozen=True)
class FigureData:
    name: str
    title: str
    curves: tuple[Curve, ...]

    def __getitem__(self, label: str) -> Curve:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_csv(self) -> str:
        """All curves in long format."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("curve", "t", "pool", "mean", "variance", "expected_benefit"))
        for c in self.curves:
            for s in c.trajectory.steps:
                w.writerow((c.label, s.t, s.pool, repr(s.mean), repr(s.variance),
                            repr(s.expected_benefit)))
        return buf.getvalue()


def reproduce_figure1(
    n_r_list: Sequence[int] = (50, 100, 200, 300), benefit: float = 1.0, t_max: int | None = None
) -> FigureData:
    """Expected benefit under a uniform prior, one curve per graph size."""
    curves = []
    for n_r in n_r_list:
        if n_r < 2:
            raise InvalidArgumentError("every n_r must be >= 2")
        horizon = n_r - 1 if t_max is None else min(t_max, n_r - 1)
        traj = benefit_trajectory(make_uniform_prior(n_r), n_r, benefit, horizon)
        curves.append(Curve(f"N_R={n_r}", traj))
    return FigureData("figure1", "Expected benefit under a uniform prior", tuple(curves))


def reproduce_figure2(
    n_r: int = 300,
    mean: float = 10.0,
    ratios: Sequence[float] = (0.5, 1.0, 2.0, 5.0),
    benefit: float = 1.0,
    t_max: int | None = None,
) -> FigureData:
    """Expected benefit under truncated-normal priors of variance ``ratio * mean``."""
    curves = []
    for ratio in ratios:
        if not ratio > 0:
            raise InvalidArgumentError("variance-to-mean ratios must be > 0")
        prior = make_truncated_normal_prior(mean, ratio * mean, n_r - 1)
        traj = benefit_trajectory(prior, n_r, benefit, t_max)
        curves.append(
            Curve(f"ratio={ratio:g}", traj, classify_trend(prior, n_r), prior.mean, prior.variance)
        )
    return FigureData("figure2", "Expected benefit by prior variance-to-mean ratio", tuple(curves))
