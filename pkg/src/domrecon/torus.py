"""Toroidal benchmark instances with two interleaved perfect dominating sets.

The graph is the quotient of the integer grid by the lattice spanned by
k*(2,1) and k*(-1,2), which has index 5k^2.  Residue r = (x+3y) mod 5 is
invariant under both generators; the residue-0 and residue-1 classes are
disjoint perfect dominating sets of size k^2 whose members pair up along
horizontal edges.  The k^2 pairs carry an auxiliary graph that this
module builds twice -- once from the closed-neighborhood overlap rule,
once from torus-grid coordinates -- and requires to agree edge for edge.

Every vertex gets a canonical coordinate (s, t, r): s, t index the pair
cell in Z_k x Z_k and r in Z_5 is the offset along the horizontal run.
This fixed labeling replaces border identification; consumers needing a
different embedding must relabel on their side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, InputError, InvariantError
from .graph import Graph

log = logging.getLogger("domrecon.torus")

LEFT_DROP_NUMERATOR = 7  # first-drop threshold is 7k^2/8


class PairType(Enum):
    """Which members of a pair {u_box, u_circ} a given set contains."""

    LEFT = "left"    # only the box member
    RIGHT = "right"  # only the circle member
    ZERO = "zero"    # neither
    TWO = "two"      # both


@dataclass(frozen=True)
class TorusInstance:
    """A built torus instance with its canonical sets and pair graph."""

    k: int
    graph: Graph
    d_box: frozenset[int]
    d_circ: frozenset[int]
    pairs: tuple[tuple[int, int], ...]
    h_graph: Graph
    coord_map: Mapping[int, tuple[int, int, int]]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return self.graph.n

    def labels(self) -> dict[int, str]:
        """Side map of "s,t,r" coordinate labels for serialization."""
        return {v: f"{s},{t},{r}" for v, (s, t, r) in self.coord_map.items()}

    def pair_of_vertex(self, v: int) -> int | None:
        """Pair id owning v as a member, or None for the three fillers."""
        s, t, r = self.coord_map[v]
        return s * self.k + t if r in (0, 1) else None


def build_torus(k: int) -> TorusInstance:
    """Build and exhaustively verify the order-5k^2 torus instance.

    Any k >= 2 defines a valid quotient; k not divisible by 4 is allowed
    but flagged, since the first-drop diagnostics need 7k^2/8 integral.
    At k = 2 the pair graph degenerates to a 4-cycle, so the degree-4
    check is skipped (also flagged).
    """
    if k < 2:
        raise InputError(f"torus side length must be at least 2, got {k}")
    n = 5 * k * k

    def canon(x: int, y: int) -> tuple[int, int, int]:
        r = (x + 3 * y) % 5
        s = ((2 * (x - r) + y) // 5) % k
        t = ((2 * y - (x - r)) // 5) % k
        return s, t, r

    def vid(s: int, t: int, r: int) -> int:
        return (s * k + t) * 5 + r

    edges: set[tuple[int, int]] = set()
    coord_map: dict[int, tuple[int, int, int]] = {}
    for s in range(k):
        for t in range(k):
            for r in range(5):
                v = vid(s, t, r)
                coord_map[v] = (s, t, r)
                x, y = 2 * s - t + r, s + 2 * t
                if canon(x, y) != (s, t, r):
                    raise InvariantError("coordinate canonicalization is not involutive")
                for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    u = vid(*canon(x + dx, y + dy))
                    edges.add((v, u) if v < u else (u, v))
    graph = Graph(n, sorted(edges))

    d_box = frozenset(vid(s, t, 0) for s in range(k) for t in range(k))
    d_circ = frozenset(vid(s, t, 1) for s in range(k) for t in range(k))
    pairs = tuple((vid(s, t, 0), vid(s, t, 1)) for s in range(k) for t in range(k))

    h_rule = _pair_graph_by_rule(graph, pairs, k)
    h_grid = _pair_graph_by_grid(k)
    if set(h_rule.edges()) != set(h_grid.edges()):
        raise InvariantError("pair-graph constructions disagree (rule vs grid)")

    warnings = []
    if k % 4 != 0:
        warnings.append("k is not a multiple of 4; 7k^2/8 drop diagnostics unavailable")
    if k == 2:
        warnings.append("k=2 pair graph is a 4-cycle; degree-4 check skipped")
    inst = TorusInstance(
        k=k, graph=graph, d_box=d_box, d_circ=d_circ, pairs=pairs,
        h_graph=h_grid, coord_map=coord_map, warnings=tuple(warnings),
    )
    _verify_instance(inst)
    for msg in warnings:
        log.info("build_torus(k=%d): %s", k, msg)
    return inst


def _pair_graph_by_rule(graph: Graph, pairs, k: int) -> Graph:
    # Pairs are adjacent when their closed-neighborhood windows intersect.
    owner: dict[int, set[int]] = {}
    for p, (u_box, u_circ) in enumerate(pairs):
        window = graph.closed_neighborhood(u_box) | graph.closed_neighborhood(u_circ)
        for v in window:
            owner.setdefault(v, set()).add(p)
    edges: set[tuple[int, int]] = set()
    for ps in owner.values():
        members = sorted(ps)
        for i, p in enumerate(members):
            for q in members[i + 1:]:
                edges.add((p, q))
    return Graph(k * k, sorted(edges))


def _pair_graph_by_grid(k: int) -> Graph:
    edges: set[tuple[int, int]] = set()
    for s in range(k):
        for t in range(k):
            p = s * k + t
            for q in (((s + 1) % k) * k + t, s * k + (t + 1) % k):
                if p != q:
                    edges.add((p, q) if p < q else (q, p))
    return Graph(k * k, sorted(edges))


def _verify_instance(inst: TorusInstance) -> None:
    g, k = inst.graph, inst.k
    if g.n != 5 * k * k:
        raise InvariantError(f"expected {5*k*k} vertices, built {g.n}")
    if not g.is_regular(4):
        raise InvariantError("torus graph is not 4-regular")
    if not g.is_connected():
        raise InvariantError("torus graph is not connected")
    for d, name in ((inst.d_box, "d_box"), (inst.d_circ, "d_circ")):
        if len(d) != k * k:
            raise InvariantError(f"{name} has size {len(d)}, expected {k*k}")
        if not g.is_dominating(d):
            raise InvariantError(f"{name} is not dominating")
    if inst.d_box & inst.d_circ:
        raise InvariantError("canonical sets are not disjoint")
    for u_box, u_circ in inst.pairs:
        if u_circ not in g.neighbors(u_box):
            raise InvariantError(f"pair ({u_box},{u_circ}) not adjacent")
    if k >= 3 and not inst.h_graph.is_regular(4):
        raise InvariantError("pair graph is not 4-regular")


def from_components(k: int, graph: Graph, d_box: Iterable[int], d_circ: Iterable[int],
                    pairs: Sequence[Sequence[int]],
                    coord_map: Mapping[int, tuple[int, int, int]] | None = None) -> TorusInstance:
    """Rebuild an instance from serialized parts, re-running verification."""
    if coord_map is None:
        coords = {}
        for p, (u_box, u_circ) in enumerate(pairs):
            s, t = divmod(p, k)
            coords[u_box] = (s, t, 0)
            coords[u_circ] = (s, t, 1)
        # fillers recovered from the canonical id layout
        for v in range(graph.n):
            if v not in coords:
                cell, r = divmod(v, 5)
                s, t = divmod(cell, k)
                coords[v] = (s, t, r)
        coord_map = coords
    inst = TorusInstance(
        k=k, graph=graph, d_box=frozenset(d_box), d_circ=frozenset(d_circ),
        pairs=tuple((int(a), int(b)) for a, b in pairs),
        h_graph=_pair_graph_by_grid(k), coord_map=dict(coord_map),
        warnings=(),
    )
    _verify_instance(inst)
    return inst


# -- pair classification and counting ---------------------------------------


def classify_pair(inst: TorusInstance, pair_id: int, d: Iterable[int]) -> PairType:
    """Type of the pair with respect to d: left/right/zero/two."""
    if not (0 <= pair_id < len(inst.pairs)):
        raise InputError(f"pair id {pair_id} out of range [0, {len(inst.pairs)})")
    members = d if isinstance(d, (set, frozenset)) else frozenset(d)
    u_box, u_circ = inst.pairs[pair_id]
    has_box, has_circ = u_box in members, u_circ in members
    if has_box and has_circ:
        return PairType.TWO
    if has_box:
        return PairType.LEFT
    if has_circ:
        return PairType.RIGHT
    return PairType.ZERO


def type_counts(inst: TorusInstance, d: Iterable[int]) -> dict[PairType, int]:
    """Counts of each pair type under d; values sum to k^2."""
    members = frozenset(d)
    counts = {t: 0 for t in PairType}
    for p in range(len(inst.pairs)):
        counts[classify_pair(inst, p, members)] += 1
    return counts


def first_drop_index(inst: TorusInstance, seq) -> tuple[int, dict[PairType, int]] | None:
    """First state index where the left-pair count falls to 7k^2/8.

    The sequence must start at d_box and k must be divisible by 4 so the
    threshold is integral.  Since a single move changes the count by at
    most one, the first state at or below the threshold hits it exactly.
    Returns None when the count never drops that far.
    """
    if inst.k % 4 != 0:
        raise ContractError("first_drop_index requires k divisible by 4")
    if frozenset(seq.start) != inst.d_box:
        raise ContractError("sequence must start at d_box")
    threshold = LEFT_DROP_NUMERATOR * inst.k * inst.k // 8

    member_of: dict[int, tuple[int, int]] = {}
    for p, (u_box, u_circ) in enumerate(inst.pairs):
        member_of[u_box] = (p, 0)
        member_of[u_circ] = (p, 1)

    current = set(seq.start)
    left = sum(
        1 for u_box, u_circ in inst.pairs
        if u_box in current and u_circ not in current
    )
    for j, state in enumerate(_states(seq, current)):
        if j > 0:
            left = _left_after_move(inst, state, seq.moves[j - 1], member_of, left)
        if left <= threshold:
            if left != threshold:
                raise InvariantError("left count skipped the drop threshold")
            return j, type_counts(inst, state)
    return None


def _states(seq, current: set[int]):
    yield frozenset(current)
    for move in seq.moves:
        if move.kind == "add":
            current.add(move.vertex)
        else:
            current.discard(move.vertex)
        yield frozenset(current)


def _left_after_move(inst, state, move, member_of, left: int) -> int:
    # at most one pair changes type per move; adjust its contribution
    info = member_of.get(move.vertex)
    if info is None:
        return left
    p, _ = info
    u_box, u_circ = inst.pairs[p]
    after_left = u_box in state and u_circ not in state
    if move.kind == "add":
        before = {u for u in (u_box, u_circ) if u in state and u != move.vertex}
    else:
        before = {u for u in (u_box, u_circ) if u in state or u == move.vertex}
    before_left = u_box in before and u_circ not in before
    return left + int(after_left) - int(before_left)


# -- boundary sets and inefficiency ------------------------------------------


def boundary_sets(inst: TorusInstance, d: Iterable[int]) -> tuple[
        frozenset[int], frozenset[int], frozenset[int]]:
    """The diagnostic pair-id sets around the left region under d.

    Returns (p_prime_left, p_star, p_star_star): left pairs with no left
    neighbor in the pair graph; the remaining left pairs; and those of
    the latter with a neighbor outside the remainder.
    """
    members = frozenset(d)
    left = frozenset(
        p for p in range(len(inst.pairs))
        if classify_pair(inst, p, members) is PairType.LEFT
    )
    h = inst.h_graph
    p_prime = frozenset(
        p for p in left if all(q not in left for q in h.neighbors(p))
    )
    p_star = left - p_prime
    p_star_star = frozenset(
        p for p in p_star if any(q not in p_star for q in h.neighbors(p))
    )
    return p_prime, p_star, p_star_star


def inefficient_vertices(g: Graph, d: Iterable[int]) -> frozenset[int]:
    """Members of d whose closed neighborhood meets another member's.

    Equivalently: members within distance 2 of another member.  A
    perfect dominating set has none.
    """
    members = sorted(g.vertex_set(d))
    hits: dict[int, set[int]] = {}
    for u in members:
        for w in g.closed_neighborhood(u):
            hits.setdefault(w, set()).add(u)
    out = set()
    for owners in hits.values():
        if len(owners) >= 2:
            out.update(owners)
    return frozenset(out)


def efficiency_lower_bound(g: Graph, d: Iterable[int], spread_set: Iterable[int]) -> int:
    """Certified lower bound ceil((n + |spread|) / 5) on |d| for 4-regular g.

    Each spread vertex witnesses one double-covered vertex in the
    domination double count; pairwise distance >= 3 keeps the witnesses
    distinct.
    """
    if not g.is_regular(4):
        raise ContractError("efficiency bound requires a 4-regular graph")
    members = frozenset(d)
    spread = frozenset(spread_set)
    ineff = inefficient_vertices(g, members)
    if not spread <= ineff:
        raise ContractError("spread set must consist of inefficient vertices of d")
    spread_sorted = sorted(spread)
    for i, u in enumerate(spread_sorted):
        dist = g.distances_from(u)
        for v in spread_sorted[i + 1:]:
            if 0 <= dist[v] < 3:
                raise ContractError(f"spread vertices {u},{v} are at distance {dist[v]} < 3")
    return -(-(g.n + len(spread)) // 5)


def greedy_spread_set(g: Graph, candidates: Iterable[int], min_distance: int = 3) -> frozenset[int]:
    """Ascending-id greedy subset of candidates at pairwise distance >= min_distance."""
    kept: list[int] = []
    for v in sorted(frozenset(candidates)):
        dist = g.distances_from(v)
        if all(not (0 <= dist[u] < min_distance) for u in kept):
            kept.append(v)
    return frozenset(kept)
