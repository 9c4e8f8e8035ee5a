"""One explanation attempt: local search from the target for a shared node.

Step ``t = 0`` reveals the target itself, which is never shared and costs
nothing. Each later step examines one unvisited node adjacent to something
already examined. The attempt ends when a shared node is found, when the
stopping rule says the next step is not worth its cost, or when no
unvisited node is reachable.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .belief import (
    CostFunction,
    OverlapPrior,
    _check_support,
    moments,
    update_after_failure,
    worth_continuing,
)
from .errors import ImpossibleFailureError, InvalidArgumentError
from .graph import KnowledgeGraph


class SearchStrategy(str, enum.Enum):
    UNIFORM = "uniform"
    BFS = "bfs"
    DFS = "dfs"
    RANDOM_NEIGHBOR = "random_neighbor"


class Outcome(str, enum.Enum):
    EXPLAINED = "explained"
    ABANDONED = "abandoned"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class StoppingRule:
    """Stop before step ``t`` unless the expected benefit beats ``cost(t)``."""

    benefit: float
    cost: CostFunction

    def __post_init__(self) -> None:
        if not self.benefit >= 0:
            raise InvalidArgumentError("benefit must be >= 0")


@dataclass(frozen=True)
class EpisodeResult:
    outcome: Outcome
    t: int
    visited: tuple[int, ...]
    explanatory_node: int | None
    path: tuple[int, ...]
    net_payoff: float | None

    @property
    def path_length(self) -> int:
        """Number of edges in the witness path (0 when nothing was found)."""
        return max(len(self.path) - 1, 0)


# ---------------------------------------------------------------------------
# traversal state


class Traversal:
    """Visit order bookkeeping shared by all strategies.

    ``parent`` records the traversal tree; following it from any visited
    node leads back to the target.
    """

    def __init__(self, graph: KnowledgeGraph, rng: random.Random):
        self.graph = graph
        self.rng = rng
        self.visited = [graph.target]
        self.seen = {graph.target}
        self.parent: dict[int, int] = {}

    def next_candidate(self) -> int | None:
        """Select and mark the next node; ``None`` once nothing is reachable."""
        raise NotImplementedError

    def _visit(self, v: int, parent: int) -> int:
        self.visited.append(v)
        self.seen.add(v)
        self.parent[v] = parent
        return v

    def path_to_target(self, v: int) -> tuple[int, ...]:
        out = [v]
        while v != self.graph.target:
            v = self.parent[v]
            out.append(v)
        return tuple(out)


class _Uniform(Traversal):
    # complete graphs only, so every remaining node is one hop from the last one
    def __init__(self, graph, rng):
        super().__init__(graph, rng)
        self._left = [v for v in range(graph.n) if v != graph.target]

    def next_candidate(self):
        left = self._left
        if not left:
            return None
        i = self.rng.randrange(len(left))
        left[i], left[-1] = left[-1], left[i]
        return self._visit(left.pop(), self.visited[-1])


class _BreadthFirst(Traversal):
    """Layer by layer outward from the target, random order within a layer."""

    def __init__(self, graph, rng):
        super().__init__(graph, rng)
        self._discovered = {graph.target}
        self._found_by: dict[int, int] = {}
        self._layer: list[int] = []
        self._pos = 0
        self._next: list[int] = []
        self._discover(graph.target)

    def _discover(self, u: int) -> None:
        for v in self.graph.adjacency[u]:
            if v not in self._discovered:
                self._discovered.add(v)
                self._found_by[v] = u
                self._next.append(v)

    def next_candidate(self):
        if self._pos >= len(self._layer):
            if not self._next:
                return None
            self._layer, self._next, self._pos = self._next, [], 0
        # one Fisher-Yates step per draw: a uniform shuffle, paid for lazily
        layer, i = self._layer, self._pos
        j = self.rng.randrange(i, len(layer))
        layer[i], layer[j] = layer[j], layer[i]
        v = layer[i]
        self._pos += 1
        self._visit(v, self._found_by[v])
        self._discover(v)
        return v


class _DepthFirst(Traversal):
    """Extend from the most recent node that still has unvisited neighbours."""

    def __init__(self, graph, rng):
        super().__init__(graph, rng)
        self._stack = [graph.target]

    def next_candidate(self):
        stack, seen, adj = self._stack, self.seen, self.graph.adjacency
        while stack:
            top = stack[-1]
            options = [v for v in adj[top] if v not in seen]
            if options:
                v = options[self.rng.randrange(len(options))]
                stack.append(v)
                return self._visit(v, top)
            stack.pop()
        return None


class _RandomNeighbor(Traversal):
    """Uniform over every unvisited node adjacent to any visited node."""

    def __init__(self, graph, rng):
        super().__init__(graph, rng)
        self._frontier: list[int] = []
        self._where: dict[int, int] = {}
        self._found_by: dict[int, int] = {}
        self._extend(graph.target)

    def _extend(self, u: int) -> None:
        for v in self.graph.adjacency[u]:
            if v not in self.seen and v not in self._where:
                self._where[v] = len(self._frontier)
                self._frontier.append(v)
                self._found_by[v] = u

    def next_candidate(self):
        fr = self._frontier
        if not fr:
            return None
        i = self.rng.randrange(len(fr))
        v, last = fr[i], fr[-1]
        fr[i] = last
        self._where[last] = i
        fr.pop()
        del self._where[v]
        self._visit(v, self._found_by[v])
        self._extend(v)
        return v


_TRAVERSALS = {
    SearchStrategy.UNIFORM: _Uniform,
    SearchStrategy.BFS: _BreadthFirst,
    SearchStrategy.DFS: _DepthFirst,
    SearchStrategy.RANDOM_NEIGHBOR: _RandomNeighbor,
}


def make_traversal(
    graph: KnowledgeGraph, strategy: SearchStrategy | str, rng: random.Random
) -> Traversal:
    strategy = SearchStrategy(strategy)
    if strategy is SearchStrategy.UNIFORM and not graph.is_complete:
        raise InvalidArgumentError("uniform sampling is only local on a complete graph")
    return _TRAVERSALS[strategy](graph, rng)


def next_candidate(state: Traversal) -> int | None:
    return state.next_candidate()


# ---------------------------------------------------------------------------
# belief along an episode


class BeliefTracker:
    """Expected benefit after ``t - 1`` misses, memoized across episodes.

    The belief ignores topology, so it depends only on how many draws have
    failed. If a miss happens that the belief called impossible, the belief
    is refuted and the expected benefit is 0 from then on.
    """

    def __init__(self, prior: OverlapPrior, n_r: int, benefit: float):
        _check_support(prior, n_r - 1)
        self.n_r = n_r
        self.benefit = benefit
        self._belief = prior
        self._benefits: list[float] = []
        self._refuted = False

    def expected_benefit(self, t: int) -> float:
        while len(self._benefits) < t:
            self._extend()
        return self._benefits[t - 1]

    def _extend(self) -> None:
        t = len(self._benefits) + 1
        pool = self.n_r - t
        if self._refuted or pool < 1:
            self._benefits.append(0.0)
            return
        if t > 1:
            try:
                self._belief = update_after_failure(self._belief, pool + 1)
            except ImpossibleFailureError:
                self._refuted = True
                self._benefits.append(0.0)
                return
        self._benefits.append(self.benefit * moments(self._belief)[0] / pool)


def run_episode(
    graph: KnowledgeGraph,
    prior: OverlapPrior | None,
    strategy: SearchStrategy | str,
    stopping: StoppingRule | None = None,
    seed: int = 0,
    *,
    tracker: BeliefTracker | None = None,
) -> EpisodeResult:
    """Simulate one explanation attempt on ``graph``.

    ``tracker`` lets many episodes with the same prior share the belief
    recursion; it must have been built from ``prior`` and ``stopping.benefit``.
    """
    rng = random.Random(seed)
    trav = make_traversal(graph, strategy, rng)
    if stopping is not None and tracker is None:
        if prior is None:
            raise InvalidArgumentError("a stopping rule needs a prior")
        tracker = BeliefTracker(prior, graph.n, stopping.benefit)
    overlap = graph.overlap

    def finish(outcome: Outcome, t: int, node: int | None = None) -> EpisodeResult:
        path = trav.path_to_target(node) if node is not None else ()
        payoff = None
        if stopping is not None:
            gain = stopping.benefit if outcome is Outcome.EXPLAINED else 0.0
            payoff = gain - stopping.cost.total(t)
        return EpisodeResult(outcome, t, tuple(trav.visited), node, path, payoff)

    t = 0
    while True:
        t += 1
        if t >= graph.n:
            return finish(Outcome.EXHAUSTED, t - 1)
        if stopping is not None:
            if not worth_continuing(tracker.expected_benefit(t), stopping.cost(t)):
                return finish(Outcome.ABANDONED, t - 1)
        v = trav.next_candidate()
        if v is None:
            return finish(Outcome.EXHAUSTED, t - 1)
        if v in overlap:
            return finish(Outcome.EXPLAINED, t, v)
