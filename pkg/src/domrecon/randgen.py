"""Seeded random fixtures for property campaigns and benchmarks.

Everything takes an explicit ``random.Random`` so campaigns replay
bit-for-bit from a single seed.
"""

from __future__ import annotations

import random

from .errors import InputError
from .graph import Graph


def random_connected_graph(rng: random.Random, n_min: int = 2, n_max: int = 24,
                           extra_edge_prob: float = 0.25) -> Graph:
    """Random spanning tree plus a sprinkling of extra edges."""
    if n_min < 1 or n_max < n_min:
        raise InputError("need 1 <= n_min <= n_max")
    n = rng.randint(n_min, n_max)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def random_forest(rng: random.Random, n_min: int = 1, n_max: int = 10,
                  new_tree_prob: float = 0.3) -> Graph:
    """Random forest: each vertex either starts a tree or picks an earlier parent."""
    if n_min < 1 or n_max < n_min:
        raise InputError("need 1 <= n_min <= n_max")
    n = rng.randint(n_min, n_max)
    edges = []
    for v in range(1, n):
        if rng.random() >= new_tree_prob:
            edges.append((rng.randrange(v), v))
    return Graph(n, edges)


def random_dominating_set(rng: random.Random, g: Graph) -> frozenset[int]:
    """A random minimal dominating set: strip the full set in random order."""
    kept = set(range(g.n))
    cover = [1 + g.degree(v) for v in range(g.n)]
    order = list(range(g.n))
    rng.shuffle(order)
    for v in order:
        if all(cover[w] >= 2 for w in g.closed_neighborhood(v)):
            kept.discard(v)
            for w in g.closed_neighborhood(v):
                cover[w] -= 1
    return frozenset(kept)


def random_dominating_pair(rng: random.Random, g: Graph) -> tuple[frozenset[int], frozenset[int]]:
    return random_dominating_set(rng, g), random_dominating_set(rng, g)
