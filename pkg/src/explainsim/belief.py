"""Beliefs about the size of the overlap set and the expected value of searching on.

The agent holds a discrete distribution over how many of the explainer's nodes
are shared with the explainee. Every unsuccessful draw is evidence that the
overlap is small, and the distribution is updated by Bayes' rule. The expected
benefit of the next draw is the chance that it hits the overlap, times ``B``.

The full distribution is carried from step to step, so mean and variance are
always exact; the mean-only recursion is available as
:func:`mean_after_failure` and only used to cross-check.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import BeliefStateError, ImpossibleFailureError, InvalidArgumentError

#: Tolerance used to break ties toward "stop" / "falling".
TIE_TOL = 1e-12

_NORM_TOL = 1e-12


def _tie_tol(*scale: float) -> float:
    return TIE_TOL * max(1.0, *(abs(s) for s in scale))


@dataclass(frozen=True)
class OverlapPrior:
    """Probability mass ``probs[i]`` that the overlap set has ``i`` nodes.

    Instances are immutable; the array is made read-only on construction.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise InvalidArgumentError("probs must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise InvalidArgumentError("probabilities must be finite and non-negative")
        total = p.sum()
        if abs(total - 1.0) > _NORM_TOL:
            raise InvalidArgumentError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, weights) -> OverlapPrior:
        """Build a prior from non-negative, unnormalized weights."""
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if not total > 0:
            raise InvalidArgumentError("weights must have positive total mass")
        return cls(w / total)

    @classmethod
    def from_masses(cls, masses: Mapping[int, float], m: int | None = None) -> OverlapPrior:
        """Build a prior from a sparse ``{size: mass}`` mapping."""
        if any(k < 0 for k in masses):
            raise InvalidArgumentError("overlap sizes must be non-negative")
        top = max(masses) if m is None else m
        w = np.zeros(top + 1)
        for k, v in masses.items():
            w[k] += v
        return cls.from_weights(w)

    @property
    def m(self) -> int:
        """Largest overlap size in the support array."""
        return self.probs.size - 1

    @property
    def max_support(self) -> int:
        """Largest overlap size carrying positive mass."""
        return int(np.flatnonzero(self.probs)[-1])

    @property
    def mean(self) -> float:
        return moments(self)[0]

    @property
    def variance(self) -> float:
        return moments(self)[1]


def make_uniform_prior(n_support: int) -> OverlapPrior:
    """Uniform belief over overlap sizes ``0 .. n_support - 1``."""
    if n_support < 1:
        raise InvalidArgumentError("n_support must be >= 1")
    return OverlapPrior(np.full(n_support, 1.0 / n_support))


def make_point_prior(k: int, m: int | None = None) -> OverlapPrior:
    """All mass on overlap size ``k``, padded with zeros up to ``m``."""
    if k < 0:
        raise InvalidArgumentError("k must be >= 0")
    return OverlapPrior.from_masses({k: 1.0}, m=max(k, m if m is not None else k))


def make_truncated_normal_prior(mean: float, variance: float, m: int) -> OverlapPrior:
    """Normal density evaluated at ``0 .. m`` and renormalized.

    The discrete mean and variance differ slightly from ``mean`` and
    ``variance``; query them with :func:`moments`.
    """
    if not variance > 0:
        raise InvalidArgumentError("variance must be > 0")
    if m < 1:
        raise InvalidArgumentError("m must be >= 1")
    i = np.arange(m + 1, dtype=float)
    log_w = -((i - mean) ** 2) / (2.0 * variance)
    # shift before exponentiating so far-off means do not underflow to all zeros
    w = np.exp(log_w - log_w.max())
    return OverlapPrior.from_weights(w)


def moments(prior: OverlapPrior) -> tuple[float, float]:
    """Return ``(mean, variance)`` of the overlap size."""
    # correctly rounded sums keep closed-form values such as 1/2 exact
    p = prior.probs
    i = np.arange(p.size, dtype=float)
    total = math.fsum(p)
    mean = math.fsum(p * i) / total
    variance = math.fsum(p * (i - mean) ** 2) / total
    return mean, variance


def _check_support(prior: OverlapPrior, pool: int) -> None:
    if pool < 1:
        raise InvalidArgumentError("pool must be >= 1")
    if prior.m > pool and np.any(prior.probs[pool + 1 :] > 0):
        raise BeliefStateError(
            f"belief puts mass on overlap sizes above the {pool} remaining nodes"
        )


def expected_benefit(prior: OverlapPrior, pool: int, benefit: float) -> float:
    """Expected payoff of the next draw from ``pool`` unexamined nodes."""
    _check_support(prior, pool)
    return benefit * moments(prior)[0] / pool


def update_after_failure(prior: OverlapPrior, pool: int) -> OverlapPrior:
    """Posterior after a draw from ``pool`` nodes missed the overlap set.

    Each size ``i`` is reweighted by the miss probability ``(pool - i) / pool``.
    """
    _check_support(prior, pool)
    mean = moments(prior)[0]
    if mean >= pool:
        raise ImpossibleFailureError(
            f"belief mean {mean!r} >= pool {pool}: a miss had zero probability"
        )
    p = prior.probs
    miss = np.clip(pool - np.arange(p.size, dtype=float), 0.0, None)
    post = p * miss
    return OverlapPrior(post / post.sum())


def mean_after_failure(mean: float, variance: float, pool: int) -> float:
    """Mean-only form of :func:`update_after_failure`."""
    return mean - variance / (pool - mean)


class CostKind(str, enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"


@dataclass(frozen=True)
class CostFunction:
    """Per-step cost: ``c`` every step, or ``c * t`` at step ``t``."""

    kind: CostKind
    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", CostKind(self.kind))
        if not (self.c >= 0 and np.isfinite(self.c)):
            raise InvalidArgumentError("cost must be finite and >= 0")

    @classmethod
    def constant(cls, c: float) -> CostFunction:
        return cls(CostKind.CONSTANT, c)

    @classmethod
    def linear(cls, c: float) -> CostFunction:
        return cls(CostKind.LINEAR, c)

    def __call__(self, t: int) -> float:
        return self.c if self.kind is CostKind.CONSTANT else self.c * t

    def total(self, steps: int) -> float:
        """Cost of steps ``1 .. steps``."""
        if self.kind is CostKind.CONSTANT:
            return self.c * steps
        return self.c * steps * (steps + 1) / 2


def worth_continuing(expected: float, cost: float) -> bool:
    """Continue only if the benefit strictly beats the cost; ties stop."""
    return expected - cost > _tie_tol(expected, cost)


@dataclass(frozen=True)
class TrajectoryStep:
    t: int
    pool: int
    mean: float
    variance: float
    expected_benefit: float


TRAJECTORY_COLUMNS = ("t", "pool", "mean", "variance", "expected_benefit")


@dataclass(frozen=True)
class BenefitTrajectory:
    """Belief moments and expected benefit at each step ``t = 1 .. T``.

    ``truncated`` names the reason when the recursion stopped before the
    requested horizon.
    """

    n_r: int
    benefit: float
    steps: tuple[TrajectoryStep, ...]
    truncated: str | None = None

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.steps], dtype=int)

    @property
    def expected_benefit(self) -> np.ndarray:
        return np.array([s.expected_benefit for s in self.steps])

    @property
    def mean(self) -> np.ndarray:
        return np.array([s.mean for s in self.steps])

    @property
    def variance(self) -> np.ndarray:
        return np.array([s.variance for s in self.steps])

    def peak(self) -> tuple[int, float]:
        """Step and value of the largest expected benefit (first if tied)."""
        eb = self.expected_benefit
        k = int(np.argmax(eb))
        return self.steps[k].t, float(eb[k])

    def to_csv(self, cost: CostFunction | None = None) -> str:
        """CSV text; with ``cost`` adds ``cost`` and ``continue_flag`` columns."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = list(TRAJECTORY_COLUMNS)
        if cost is not None:
            header += ["cost", "continue_flag"]
        w.writerow(header)
        for s in self.steps:
            row = [s.t, s.pool, repr(s.mean), repr(s.variance), repr(s.expected_benefit)]
            if cost is not None:
                c = cost(s.t)
                row += [repr(float(c)), str(worth_continuing(s.expected_benefit, c)).lower()]
            w.writerow(row)
        return buf.getvalue()


def benefit_trajectory(
    prior: OverlapPrior, n_r: int, benefit: float, t_max: int | None = None
) -> BenefitTrajectory:
    """Run the failure-update recursion from ``t = 1`` up to ``t_max``.

    Step ``t`` draws from ``n_r - t`` remaining nodes. ``t_max`` defaults to
    ``n_r - 1``, the last step with a non-empty pool.
    """
    if n_r < 2:
        raise InvalidArgumentError("n_r must be >= 2")
    if t_max is None:
        t_max = n_r - 1
    if not 1 <= t_max <= n_r - 1:
        raise InvalidArgumentError(f"t_max must lie in 1..{n_r - 1}, got {t_max}")
    _check_support(prior, n_r - 1)

    steps = []
    belief = prior
    truncated = None
    for t in range(1, t_max + 1):
        pool = n_r - t
        mean, variance = moments(belief)
        steps.append(TrajectoryStep(t, pool, mean, variance, benefit * mean / pool))
        if t == t_max:
            break
        try:
            belief = update_after_failure(belief, pool)
        except ImpossibleFailureError as exc:
            truncated = f"stopped after t={t}: {exc}"
            break
    return BenefitTrajectory(n_r, benefit, tuple(steps), truncated)


class TrendClass(str, enum.Enum):
    RISING = "rising"
    FALLING = "falling"


def classify_trend(prior: OverlapPrior, n_r: int) -> TrendClass:
    """Whether the expected benefit rises from the first draw to the second.

    Uses the closed-form comparison ``mean * (n_r - 1 - mean)`` against
    ``variance * (n_r - 1)``; equality counts as falling.
    """
    if n_r < 2:
        raise InvalidArgumentError("n_r must be >= 2")
    mean, variance = moments(prior)
    if mean <= 0:
        raise InvalidArgumentError("trend is undefined when the belief mean is 0")
    lhs = mean * (n_r - 1 - mean)
    rhs = variance * (n_r - 1)
    return TrendClass.RISING if lhs - rhs > _tie_tol(lhs, rhs) else TrendClass.FALLING


def myopic_stop_time(
    prior: OverlapPrior, n_r: int, benefit: float, cost: CostFunction | Callable[[int], float]
) -> int | None:
    """First step ``t`` whose expected benefit does not beat ``cost(t)``.

    Returns ``None`` when every step up to ``n_r - 1`` is worth taking.
    """
    traj = benefit_trajectory(prior, n_r, benefit)
    for s in traj.steps:
        if not worth_continuing(s.expected_benefit, cost(s.t)):
            return s.t
    return None
