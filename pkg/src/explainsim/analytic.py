"""Closed forms for search on a complete graph.

With every node adjacent to every other, local search is sampling without
replacement from the ``n_r - 1`` non-target nodes, ``n_k`` of which are shared.
The number of draws until the first shared node follows a negative
hypergeometric law.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError


def _check_sizes(n_r: int, n_k: int) -> None:
    if n_k < 1:
        raise InvalidArgumentError("overlap must be >= 1")
    if n_r < 2 or n_k > n_r - 1:
        raise InvalidArgumentError(f"need 1 <= n_k <= n_r - 1, got n_r={n_r}, n_k={n_k}")


def success_hazard(n_r: int, n_k: int, t: int) -> float:
    """P(draw ``t`` hits the overlap | the first ``t - 1`` draws missed)."""
    _check_sizes(n_r, n_k)
    pool = (n_r - 1) - (t - 1)
    if t < 1 or pool < n_k:
        raise InvalidArgumentError(f"step {t} leaves a pool of {pool} < n_k={n_k}")
    return n_k / pool


@dataclass(frozen=True)
class TimeDistribution:
    """Distribution of the success step ``T`` over ``t = 1 .. n_r - n_k``."""

    n_r: int
    n_k: int
    pmf: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.arange(1, self.pmf.size + 1)

    def mean(self) -> float:
        return float(self.pmf @ self.support)

    def variance(self) -> float:
        t = self.support
        mu = self.mean()
        return float(self.pmf @ (t - mu) ** 2)

    def sf(self, t: int) -> float:
        """P(T > t)."""
        return float(self.pmf[t:].sum())


def time_pmf(n_r: int, n_k: int) -> TimeDistribution:
    """Unconditional pmf of ``T`` assembled from the step hazards."""
    _check_sizes(n_r, n_k)
    last = n_r - n_k
    pool = (n_r - 1) - np.arange(last)
    hazard = n_k / pool
    survive = np.concatenate(([1.0], np.cumprod(1.0 - hazard[:-1])))
    pmf = survive * hazard
    pmf.setflags(write=False)
    return TimeDistribution(n_r, n_k, pmf)


def time_pmf_exact(n_r: int, n_k: int) -> list[Fraction]:
    """Same as :func:`time_pmf` in exact rational arithmetic."""
    _check_sizes(n_r, n_k)
    out = []
    survive = Fraction(1)
    for t in range(1, n_r - n_k + 1):
        h = Fraction(n_k, (n_r - 1) - (t - 1))
        out.append(survive * h)
        survive *= 1 - h
    return out


def expected_explanation_time(n_r: int, n_k: int, exact: bool = False) -> float | Fraction:
    """E(T) = n_r / (n_k + 1)."""
    _check_sizes(n_r, n_k)
    if exact:
        return Fraction(n_r, n_k + 1)
    return n_r / (n_k + 1)


def abandonment_probability(n_r: int, n_k: int, t_stop: int) -> float:
    """P(the first ``t_stop`` draws all miss the overlap)."""
    _check_sizes(n_r, n_k)
    if not 0 <= t_stop <= n_r - n_k:
        raise InvalidArgumentError(f"t_stop must lie in 0..{n_r - n_k}, got {t_stop}")
    p = 1.0
    for j in range(1, t_stop + 1):
        p *= 1.0 - n_k / ((n_r - 1) - (j - 1))
    return p
