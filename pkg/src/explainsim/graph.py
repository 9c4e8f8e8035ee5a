"""Explainer knowledge graphs: topology, target node and hidden overlap set.

Graphs are undirected, unweighted and immutable. Nodes are ``0 .. n - 1``.
Generation and overlap placement are separate steps so that the same
topology can be paired with different overlap sets.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from typing import Iterable, Union

import numpy as np

from .errors import InfeasiblePlacementError, InvalidArgumentError


@dataclass(frozen=True)
class KnowledgeGraph:
    """Topology plus the target node and the set of shared (overlap) nodes.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``. The
    structural checks (symmetry, no self-loops) live in :meth:`validate` so
    that swapping the overlap set on a large graph stays cheap.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    target: int
    overlap: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if self.n < 1 or len(self.adjacency) != self.n:
            raise InvalidArgumentError("adjacency must have one entry per node")
        if not 0 <= self.target < self.n:
            raise InvalidArgumentError(f"target {self.target} out of range")
        object.__setattr__(self, "overlap", frozenset(self.overlap))
        if self.target in self.overlap:
            raise InvalidArgumentError("the target node cannot be in the overlap set")
        if any(not 0 <= v < self.n for v in self.overlap):
            raise InvalidArgumentError("overlap node out of range")

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], target: int, overlap: Iterable[int] = ()
    ) -> KnowledgeGraph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgumentError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise InvalidArgumentError(f"self-loop at node {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), target, frozenset(overlap))

    def validate(self) -> None:
        """Check symmetry and the absence of self-loops; raise on violation."""
        adj = [set(a) for a in self.adjacency]
        for u, nb in enumerate(adj):
            if u in nb:
                raise InvalidArgumentError(f"self-loop at node {u}")
            for v in nb:
                if not 0 <= v < self.n or u not in adj[v]:
                    raise InvalidArgumentError(f"edge ({u}, {v}) is not symmetric")

    @property
    def n_k(self) -> int:
        return len(self.overlap)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbour_sets[u]

    @cached_property
    def _neighbour_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def is_complete(self) -> bool:
        return all(len(a) == self.n - 1 for a in self.adjacency)

    @cached_property
    def component_labels(self) -> tuple[int, ...]:
        """Component index per node, numbered in order of lowest member."""
        labels = [-1] * self.n
        current = 0
        for start in range(self.n):
            if labels[start] >= 0:
                continue
            labels[start] = current
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if labels[v] < 0:
                        labels[v] = current
                        queue.append(v)
            current += 1
        return tuple(labels)

    def with_overlap(self, nodes: Iterable[int]) -> KnowledgeGraph:
        return replace(self, overlap=frozenset(nodes))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "target": self.target,
            "overlap": sorted(self.overlap),
            "edges": [list(e) for e in self.edges()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> KnowledgeGraph:
        return cls.from_edges(d["n"], (tuple(e) for e in d["edges"]), d["target"], d["overlap"])

    @classmethod
    def from_json(cls, text: str) -> KnowledgeGraph:
        return cls.from_dict(json.loads(text))


def component_of(graph: KnowledgeGraph, node: int) -> int:
    """Label shared by exactly the nodes connected to ``node``."""
    if not 0 <= node < graph.n:
        raise InvalidArgumentError(f"node {node} out of range")
    return graph.component_labels[node]


def hop_distances(graph: KnowledgeGraph, source: int) -> list[int]:
    """Breadth-first hop count from ``source``; ``-1`` marks unreachable nodes."""
    dist = [-1] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


# ---------------------------------------------------------------------------
# generator specs


@dataclass(frozen=True)
class Complete:
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidArgumentError("complete graph needs n >= 2")


@dataclass(frozen=True)
class ErdosRenyi:
    n: int
    p: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidArgumentError("n must be >= 2")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidArgumentError("edge probability p must lie in [0, 1]")


@dataclass(frozen=True)
class SmallWorld:
    """Watts-Strogatz ring lattice of even degree ``k`` with rewiring ``beta``."""

    n: int
    k: int
    beta: float

    def __post_init__(self) -> None:
        if self.k < 2 or self.k % 2 or self.k >= self.n:
            raise InvalidArgumentError("k must be even, >= 2 and < n")
        if not 0.0 <= self.beta <= 1.0:
            raise InvalidArgumentError("rewire probability beta must lie in [0, 1]")


@dataclass(frozen=True)
class TwoComponent:
    """Disjoint union of two graphs; the target always lies in ``a``."""

    a: GraphSpec
    b: GraphSpec

    @property
    def n(self) -> int:
        return self.a.n + self.b.n


GraphSpec = Union[Complete, ErdosRenyi, SmallWorld, TwoComponent]


@lru_cache(maxsize=16)
def _complete_adjacency(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(v for v in range(n) if v != u) for u in range(n))


def _adjacency_from_sets(nbrs: list[set[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(s)) for s in nbrs)


def _erdos_renyi(spec: ErdosRenyi, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
    n = spec.n
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < spec.p
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in zip(iu[keep].tolist(), ju[keep].tolist()):
        nbrs[u].add(v)
        nbrs[v].add(u)
    return _adjacency_from_sets(nbrs)


def _small_world(spec: SmallWorld, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
    n, half = spec.n, spec.k // 2
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u in range(n):
        for j in range(1, half + 1):
            v = (u + j) % n
            nbrs[u].add(v)
            nbrs[v].add(u)
    if spec.beta > 0:
        for j in range(1, half + 1):
            for u in range(n):
                v = (u + j) % n
                if v not in nbrs[u] or rng.random() >= spec.beta:
                    continue
                if len(nbrs[u]) >= n - 1:
                    continue
                w = int(rng.integers(n))
                while w == u or w in nbrs[u]:
                    w = int(rng.integers(n))
                nbrs[u].discard(v)
                nbrs[v].discard(u)
                nbrs[u].add(w)
                nbrs[w].add(u)
    return _adjacency_from_sets(nbrs)


def generate(spec: GraphSpec, seed: int | np.random.SeedSequence) -> KnowledgeGraph:
    """Build a graph for ``spec`` with a uniformly chosen target and no overlap.

    Deterministic in ``seed``.
    """
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    if isinstance(spec, TwoComponent):
        ss_a, ss_b = ss.spawn(2)
        ga = generate(spec.a, ss_a)
        gb = generate(spec.b, ss_b)
        off = ga.n
        adjacency = ga.adjacency + tuple(tuple(v + off for v in nb) for nb in gb.adjacency)
        return KnowledgeGraph(ga.n + gb.n, adjacency, ga.target)

    rng = np.random.default_rng(ss)
    if isinstance(spec, Complete):
        adjacency = _complete_adjacency(spec.n)
    elif isinstance(spec, ErdosRenyi):
        adjacency = _erdos_renyi(spec, rng)
    elif isinstance(spec, SmallWorld):
        adjacency = _small_world(spec, rng)
    else:
        raise InvalidArgumentError(f"unknown graph spec {spec!r}")
    return KnowledgeGraph(spec.n, adjacency, int(rng.integers(spec.n)))


# ---------------------------------------------------------------------------
# overlap placement


@dataclass(frozen=True)
class UniformRandom:
    pass


@dataclass(frozen=True)
class FarFromTarget:
    """Only nodes reachable from the target in ``min_distance`` hops or more."""

    min_distance: int

    def __post_init__(self) -> None:
        if self.min_distance < 1:
            raise InvalidArgumentError("min_distance must be >= 1")


@dataclass(frozen=True)
class OtherComponent:
    """Only nodes with no path to the target."""


OverlapPlacement = Union[UniformRandom, FarFromTarget, OtherComponent]


def eligible_nodes(graph: KnowledgeGraph, placement: OverlapPlacement) -> list[int]:
    t = graph.target
    if isinstance(placement, UniformRandom):
        return [v for v in range(graph.n) if v != t]
    if isinstance(placement, FarFromTarget):
        dist = hop_distances(graph, t)
        return [v for v in range(graph.n) if dist[v] >= placement.min_distance]
    if isinstance(placement, OtherComponent):
        labels = graph.component_labels
        return [v for v in range(graph.n) if labels[v] != labels[t]]
    raise InvalidArgumentError(f"unknown placement {placement!r}")


def place_overlap(
    graph: KnowledgeGraph,
    n_k: int,
    placement: OverlapPlacement,
    seed: int | np.random.SeedSequence,
) -> KnowledgeGraph:
    """Flag ``n_k`` eligible nodes, drawn uniformly, as the overlap set."""
    if n_k < 1:
        raise InvalidArgumentError("overlap must be >= 1")
    pool = eligible_nodes(graph, placement)
    if len(pool) < n_k:
        raise InfeasiblePlacementError(
            f"{type(placement).__name__} leaves {len(pool)} eligible nodes, need {n_k}"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pool), size=n_k, replace=False)
    return graph.with_overlap(pool[i] for i in chosen.tolist())
