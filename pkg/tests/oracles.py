"""Reference computations that share no code with the package.

Everything here uses exact rational arithmetic or exhaustive enumeration.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction


def exact_bayes_trajectory(weights, n_r, benefit=1, t_max=None):
    """Expected benefit per step, applying Bayes' rule to every overlap size exactly.

    After a miss on a pool of ``pool`` nodes, size ``i`` keeps weight
    ``(pool - i) / pool`` of its mass.
    """
    probs = [Fraction(w) for w in weights]
    total = sum(probs)
    probs = [p / total for p in probs]
    t_max = n_r - 1 if t_max is None else t_max
    out = []
    for t in range(1, t_max + 1):
        pool = n_r - t
        mean = sum(i * p for i, p in enumerate(probs))
        out.append(Fraction(benefit) * mean / pool)
        miss = [p * Fraction(max(pool - i, 0), pool) for i, p in enumerate(probs)]
        z = sum(miss)
        if z == 0:
            break
        probs = [m / z for m in miss]
    return out


def exact_moments(weights):
    probs = [Fraction(w) for w in weights]
    total = sum(probs)
    probs = [p / total for p in probs]
    mean = sum(i * p for i, p in enumerate(probs))
    var = sum(p * (i - mean) ** 2 for i, p in enumerate(probs))
    return mean, var


def enumerate_success_pmf(n_r, n_k):
    """First-hit step over every ordering of the ``n_r - 1`` candidate nodes."""
    nodes = list(range(n_r - 1))
    shared = set(range(n_k))
    hits = Counter()
    total = 0
    for order in itertools.permutations(nodes):
        for t, v in enumerate(order, start=1):
            if v in shared:
                hits[t] += 1
                break
        total += 1
    return [Fraction(hits[t], total) for t in range(1, n_r - n_k + 1)]


def union_find_components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return [find(v) for v in range(n)]
