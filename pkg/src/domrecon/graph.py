"""Immutable simple undirected graphs over dense integer vertex ids.

Vertices are the ids ``0..n-1``; external labels (such as torus
coordinates) live in side maps owned by the producers of a graph, never
in the graph itself.  Vertex sets are plain ``frozenset`` objects; their
canonical serialized form is the sorted id list.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

from .errors import InputError


class Graph:
    """A finite simple undirected graph with sorted adjacency lists.

    Instances are immutable after construction and safe to share; every
    query is a pure function of the structure.  Construction validates
    the invariants: ids in range, no self-loops, no duplicate edges.
    """

    __slots__ = ("n", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        self.n = n
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self._adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._masks: tuple[int, ...] | None = None

    # -- structure queries -------------------------------------------------

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._adj[v]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        """The set {v} union N(v)."""
        self._check_vertex(v)
        return frozenset((v, *self._adj[v]))

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (u, v) with u < v, sorted."""
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def is_regular(self, d: int) -> bool:
        return all(len(a) == d for a in self._adj)

    # -- domination --------------------------------------------------------

    def vertex_set(self, ds: Iterable[int]) -> frozenset[int]:
        """Validate ids and return the set as a frozenset."""
        members = frozenset(ds)
        for v in members:
            self._check_vertex(v)
        return members

    def is_dominating(self, ds: Iterable[int]) -> bool:
        """True iff every vertex is in ``ds`` or adjacent to a member."""
        members = self.vertex_set(ds)
        covered = set(members)
        for u in members:
            covered.update(self._adj[u])
        return len(covered) == self.n

    def undominated(self, ds: Iterable[int]) -> frozenset[int]:
        """Vertices whose closed neighborhood misses ``ds``."""
        members = self.vertex_set(ds)
        covered = set(members)
        for u in members:
            covered.update(self._adj[u])
        return frozenset(range(self.n)) - covered

    def closed_masks(self) -> tuple[int, ...]:
        """Closed-neighborhood bitmasks, cached; bit v of mask u means v in N[u]."""
        if self._masks is None:
            self._masks = tuple(
                (1 << v) | sum(1 << u for u in self._adj[v]) for v in range(self.n)
            )
        return self._masks

    # -- distances ---------------------------------------------------------

    def ball_size(self, v: int, r: int) -> int:
        """Number of vertices at distance <= r from v."""
        if r < 0:
            raise InputError(f"radius must be non-negative, got {r}")
        self._check_vertex(v)
        seen = {v}
        frontier = [v]
        for _ in range(r):
            if not frontier:
                break
            nxt = []
            for u in frontier:
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return len(seen)

    def distances_from(self, v: int) -> list[int]:
        """BFS distances from v; unreachable vertices get -1."""
        self._check_vertex(v)
        dist = [-1] * self.n
        dist[v] = 0
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def components(self) -> list[frozenset[int]]:
        """Connected components, ordered by smallest member id."""
        seen = [False] * self.n
        out = []
        for v in range(self.n):
            if seen[v]:
                continue
            comp = [v]
            seen[v] = True
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            out.append(frozenset(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    # -- plumbing ----------------------------------------------------------

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InputError(f"vertex id {v} out of range [0, {self.n})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count()})"


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("cycle needs at least 3 vertices")
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    if n < 1:
        raise InputError("path needs at least 1 vertex")
    return Graph(n, [(v, v + 1) for v in range(n - 1)])
