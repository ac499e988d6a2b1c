"""Recursive balanced-separator trees with labeled edges and path machinery.

A tree node owns a vertex part (possibly empty); the parts over all
nodes partition the vertex set.  Every non-leaf has exactly two
children, reached by edges labeled 0 and 1, and all leaves sit at the
same depth (empty parts pad shallow branches).  Graph edges only run
within a part or between the parts of an ancestor and a descendant,
which is what the transformation algorithm relies on.

Separator strategies are heuristics with measured (not promised) sizes:
``grid-cut`` cuts coordinate lines of a torus-like labeling, falling
back to ``bfs-level`` when no coordinates are supplied; ``bfs-level``
removes the best-balancing BFS level; ``exact`` enumerates minimum
balanced separators on tiny working sets.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import IO, Iterable, Mapping

from .errors import ContractError, InputError, InvariantError, ParseError, ResourceLimitError
from .graph import Graph

log = logging.getLogger("domrecon.septree")

STRATEGIES = ("grid-cut", "bfs-level", "exact")
EXACT_GUARD = 18


@dataclass(frozen=True)
class GridCoords:
    """Torus-style (s, t) cell coordinates over Z_k x Z_k for grid-cut."""

    k: int
    pos: Mapping[int, tuple[int, int]]


@dataclass(frozen=True)
class BalancedSeparator:
    """Partition (s, a, b) of a working set: no a-b edge, both sides <= 2m/3."""

    s: frozenset[int]
    a: frozenset[int]
    b: frozenset[int]

    @property
    def working_size(self) -> int:
        return len(self.s) + len(self.a) + len(self.b)


def find_separator(g: Graph, working: Iterable[int], strategy: str = "bfs-level",
                   *, coords: GridCoords | None = None) -> BalancedSeparator:
    """Deterministic balanced separator of the induced subgraph on ``working``.

    Side a is the one holding the smallest vertex id; an empty separator
    is returned when disconnected components already balance.
    """
    members = g.vertex_set(working)
    if len(members) < 2:
        raise ContractError("find_separator needs a working set of at least 2 vertices")
    if strategy not in STRATEGIES:
        raise InputError(f"unknown separator strategy {strategy!r}")
    adj = _induced_adjacency(g, members)
    if strategy == "exact":
        sep, sides = _exact_separator(members, adj)
    else:
        if strategy == "grid-cut" and coords is None:
            log.info("grid-cut without coordinates; using bfs-level candidates")
        candidates = _strategy_candidates(members, adj, strategy, coords)
        picked = _pick_candidate(members, adj, candidates)
        if picked is None and strategy == "grid-cut":
            picked = _pick_candidate(members, adj,
                                     _strategy_candidates(members, adj, "bfs-level", None))
        if picked is None:
            picked = (members, (frozenset(), frozenset()))  # last resort: everything
        sep, sides = picked
    a, b = _normalize_sides(*sides)
    result = BalancedSeparator(s=frozenset(sep), a=a, b=b)
    _check_separator(result, len(members), adj)
    return result


def _induced_adjacency(g: Graph, members: frozenset[int]) -> dict[int, list[int]]:
    return {v: [u for u in g.neighbors(v) if u in members] for v in members}


def _components(members: Iterable[int], adj: Mapping[int, list[int]],
                removed: frozenset[int]) -> list[frozenset[int]]:
    alive = set(members) - removed
    out = []
    while alive:
        v = min(alive)
        comp = {v}
        queue = deque([v])
        alive.discard(v)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w in alive:
                    alive.discard(w)
                    comp.add(w)
                    queue.append(w)
        out.append(frozenset(comp))
    return out


def _pack(components: list[frozenset[int]]) -> tuple[frozenset[int], frozenset[int]]:
    """Greedy two-group packing, largest component first."""
    first: set[int] = set()
    second: set[int] = set()
    for comp in sorted(components, key=lambda c: (-len(c), min(c))):
        (first if len(first) <= len(second) else second).update(comp)
    return frozenset(first), frozenset(second)


def _evaluate(members, adj, sep):
    comps = _components(members, adj, sep)
    sides = _pack(comps)
    max_side = max(len(sides[0]), len(sides[1]))
    feasible = 3 * max_side <= 2 * len(members)
    return feasible, (len(sep), max_side, tuple(sorted(sep))), sides


def _pick_candidate(members, adj, candidates):
    """Best feasible candidate by (separator size, max side, lexicographic)."""
    best = None
    for sep in candidates:
        feasible, score, sides = _evaluate(members, adj, sep)
        if feasible and (best is None or score < best[0]):
            best = (score, sep, sides)
    if best is None:
        return None
    return best[1], best[2]


def _strategy_candidates(members, adj, strategy, coords):
    if strategy == "bfs-level":
        return _bfs_level_candidates(members, adj)
    if coords is None:
        return _bfs_level_candidates(members, adj)
    singles, pairs = _grid_candidates(members, coords)
    return singles + pairs


def _bfs_level_candidates(members, adj):
    comps = _components(members, adj, frozenset())
    cands = [frozenset()]
    if not comps:
        return cands
    big = max(comps, key=lambda c: (len(c), -min(c)))
    start = min(big)
    far = _bfs_farthest(start, adj)
    levels = _bfs_levels(far, adj)
    cands.extend(frozenset(level) for level in levels[1:])
    return cands


def _bfs_farthest(start, adj):
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    top = max(dist.values())
    return min(v for v, d in dist.items() if d == top)


def _bfs_levels(root, adj):
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    levels: list[list[int]] = [[] for _ in range(max(dist.values()) + 1)]
    for v, d in dist.items():
        levels[d].append(v)
    return levels


def _grid_candidates(members, coords: GridCoords):
    """Cut lines of constant t (thickness 1) and bands of constant s (thickness 2).

    Edges of the torus quotient change t by at most 1 and s by at most 2,
    so these are the thinnest structurally safe axis cuts.
    """
    k = coords.k
    pos = coords.pos
    missing = [v for v in members if v not in pos]
    if missing:
        raise InputError(f"grid-cut coordinates missing for vertex {missing[0]}")
    by_t: dict[int, set[int]] = {}
    by_s: dict[int, set[int]] = {}
    for v in members:
        s, t = pos[v]
        by_t.setdefault(t % k, set()).add(v)
        by_s.setdefault(s % k, set()).add(v)

    t_lines = {c: frozenset(vs) for c, vs in sorted(by_t.items())}
    s_bands = {}
    for c in range(k):
        band = by_s.get(c, set()) | by_s.get((c + 1) % k, set())
        if band:
            s_bands[c] = frozenset(band)

    singles = [frozenset()] + list(t_lines.values()) + list(s_bands.values())
    pairs = []
    for c1, c2 in combinations(sorted(t_lines), 2):
        pairs.append(t_lines[c1] | t_lines[c2])
    for c1, c2 in combinations(sorted(s_bands), 2):
        if {c1, (c1 + 1) % k} & {c2, (c2 + 1) % k}:
            continue
        pairs.append(s_bands[c1] | s_bands[c2])
    return singles, pairs


def _exact_separator(members, adj):
    """Smallest balanced separator by subset enumeration (size, then lex)."""
    if len(members) > EXACT_GUARD:
        raise ResourceLimitError(
            f"exact separator enumeration guarded to working sets <= {EXACT_GUARD}, "
            f"got {len(members)}")
    universe = sorted(members)
    for size in range(len(universe) + 1):
        for combo in combinations(universe, size):
            sep = frozenset(combo)
            feasible, _, sides = _evaluate(members, adj, sep)
            if feasible:
                return sep, sides
    raise InvariantError("separator enumeration found no candidate")  # unreachable


def _normalize_sides(x: frozenset[int], y: frozenset[int]):
    """Side a is the one containing the smallest id across both sides."""
    if not x and not y:
        return x, y
    if not x:
        return y, x
    if not y:
        return x, y
    return (x, y) if min(x) < min(y) else (y, x)


def _check_separator(sep: BalancedSeparator, m: int, adj) -> None:
    if 3 * max(len(sep.a), len(sep.b)) > 2 * m:
        raise InvariantError("separator sides exceed 2m/3")
    for v in sep.a:
        for w in adj[v]:
            if w in sep.b:
                raise InvariantError(f"edge ({v},{w}) crosses the separator")


def reference_c3(c2: float, alpha: float) -> float:
    """Asymptotic path-weight constant c2/(1-(2/3)^alpha) + 1, for reporting.

    The measured max path weight is the computable stand-in for this
    constant times n^alpha; nothing downstream depends on it.
    """
    if not (0.0 < alpha < 1.0):
        raise ContractError(f"alpha must lie in (0,1), got {alpha}")
    return c2 / (1.0 - (2.0 / 3.0) ** alpha) + 1.0


# -- the tree ----------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    part: frozenset[int]
    children: tuple[int, int] | None  # (label-0 child, label-1 child)


class SeparatorTree:
    """Full binary separator tree; root is node 0, leaves at uniform depth."""

    def __init__(self, nodes: list[TreeNode], alpha: float, leaf_threshold: int):
        if not nodes:
            raise InputError("separator tree needs at least one node")
        self.nodes = list(nodes)
        self.root = 0
        self.alpha = alpha
        self.leaf_threshold = leaf_threshold
        self.parent: list[int] = [-1] * len(nodes)
        self.depth_of: list[int] = [0] * len(nodes)
        for i, node in enumerate(self.nodes):
            if node.children is not None:
                if len(node.children) != 2:
                    raise InputError(f"node {i} must have exactly two children")
                for child in node.children:
                    if not (i < child < len(nodes)):
                        raise InputError(f"node {i} references invalid child {child}")
                    if self.parent[child] != -1:
                        raise InputError(f"node {child} has two parents")
                    self.parent[child] = i
                    self.depth_of[child] = self.depth_of[i] + 1
        if any(self.parent[i] == -1 for i in range(1, len(nodes))):
            raise InputError("tree nodes are not all reachable from the root")
        leaf_depths = {self.depth_of[i] for i, nd in enumerate(self.nodes)
                       if nd.children is None}
        if len(leaf_depths) != 1:
            raise InputError(f"leaves are not at uniform depth: {sorted(leaf_depths)}")
        self.depth = leaf_depths.pop()
        self._subtree_union: list[frozenset[int]] | None = None
        self._weight_below: list[int] | None = None
        seen_parts: set[int] = set()
        total = 0
        for node in self.nodes:
            total += len(node.part)
            seen_parts.update(node.part)
        if len(seen_parts) != total:
            raise InputError("tree parts are not pairwise disjoint")

    # -- caches --------------------------------------------------------

    def subtree_union(self, i: int) -> frozenset[int]:
        if self._subtree_union is None:
            unions: list[frozenset[int] | None] = [None] * len(self.nodes)
            for i_ in self._postorder():
                node = self.nodes[i_]
                if node.children is None:
                    unions[i_] = node.part
                else:
                    c0, c1 = node.children
                    unions[i_] = node.part | unions[c0] | unions[c1]
            self._subtree_union = unions  # type: ignore[assignment]
        return self._subtree_union[i]

    def max_path_weight(self) -> int:
        """Max over root-to-leaf paths of the total part size on the path."""
        if self._weight_below is None:
            weights = [0] * len(self.nodes)
            for i in self._postorder():
                node = self.nodes[i]
                below = 0 if node.children is None else max(
                    weights[node.children[0]], weights[node.children[1]])
                weights[i] = len(node.part) + below
            self._weight_below = weights
        return self._weight_below[self.root]

    def _postorder(self):
        order: list[int] = []
        stack = [self.root]
        while stack:
            i = stack.pop()
            order.append(i)
            node = self.nodes[i]
            if node.children is not None:
                stack.extend(node.children)
        return reversed(order)

    # -- paths ---------------------------------------------------------

    def check_code(self, code: str) -> None:
        if len(code) != self.depth or any(c not in "01" for c in code):
            raise InputError(f"path code {code!r} invalid for tree depth {self.depth}")

    def path_nodes(self, code: str) -> list[int]:
        self.check_code(code)
        out = [self.root]
        for c in code:
            children = self.nodes[out[-1]].children
            if children is None:
                raise InvariantError("path descended past a leaf")
            out.append(children[int(c)])
        return out

    def path_weight(self, code: str) -> int:
        return sum(len(self.nodes[i].part) for i in self.path_nodes(code))

    def path_sets(self, code: str) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        """(on_path, l_side, r_side): parts on the path, and the unions of
        subtrees hanging off it via a 0-labeled edge (l) or 1-labeled (r)."""
        nodes = self.path_nodes(code)
        on_path: set[int] = set()
        l_side: set[int] = set()
        r_side: set[int] = set()
        for step, i in enumerate(nodes):
            on_path.update(self.nodes[i].part)
            if self.nodes[i].children is None:
                continue
            bit = int(code[step])
            off = self.nodes[i].children[1 - bit]
            if bit == 1:  # off-path edge has label 0
                l_side.update(self.subtree_union(off))
            else:
                r_side.update(self.subtree_union(off))
        return frozenset(on_path), frozenset(l_side), frozenset(r_side)

    # -- verification ----------------------------------------------------

    def validate(self, g: Graph) -> None:
        """Exhaustive check of the partition, leaf-size and ancestry properties."""
        part_of: dict[int, int] = {}
        for i, node in enumerate(self.nodes):
            for v in node.part:
                if v in part_of:
                    raise InvariantError(f"vertex {v} appears in two parts")
                part_of[v] = i
        if set(part_of) != set(range(g.n)):
            raise InvariantError("tree parts do not partition the vertex set")
        for i, node in enumerate(self.nodes):
            if node.children is None and len(node.part) > self.leaf_threshold:
                raise InvariantError(
                    f"leaf {i} has {len(node.part)} vertices > threshold {self.leaf_threshold}")
        for u, v in g.edges():
            i, j = part_of[u], part_of[v]
            if i != j and not (self._is_ancestor(i, j) or self._is_ancestor(j, i)):
                raise InvariantError(
                    f"edge ({u},{v}) joins unrelated parts {i} and {j}")

    def _is_ancestor(self, anc: int, node: int) -> bool:
        while node != -1:
            if node == anc:
                return True
            node = self.parent[node]
        return False

    def level_report(self) -> list[tuple[int, int]]:
        """(depth, part size) per non-leaf node; measurement for the c2 bound."""
        return [(self.depth_of[i], len(nd.part))
                for i, nd in enumerate(self.nodes) if nd.children is not None]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "root": self.root,
            "max_path_weight": self.max_path_weight(),
            "nodes": [
                {"part": sorted(nd.part),
                 "children": list(nd.children) if nd.children else None}
                for nd in self.nodes
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SeparatorTree":
        try:
            alpha = float(obj["alpha"])
            nodes = [
                TreeNode(part=frozenset(int(v) for v in nd["part"]),
                         children=tuple(nd["children"]) if nd["children"] else None)
                for nd in obj["nodes"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad tree JSON: {exc}") from exc
        n = sum(len(nd.part) for nd in nodes)
        threshold = math.ceil(n ** alpha) if n else 0
        tree = cls(nodes, alpha, threshold)
        if "max_path_weight" in obj and tree.max_path_weight() != obj["max_path_weight"]:
            raise ParseError("tree JSON max_path_weight does not match its nodes")
        return tree


def save_tree(tree: SeparatorTree, target: str | Path | IO) -> None:
    text = json.dumps(tree.to_json(), indent=2, sort_keys=True) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def load_tree(source: str | Path | IO) -> SeparatorTree:
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, Path)) \
        else source.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno) from exc
    return SeparatorTree.from_json(obj)


def build_tree(g: Graph, alpha: float = 0.5, strategy: str = "bfs-level",
               *, coords: GridCoords | None = None) -> SeparatorTree:
    """Recursively split the graph into a separator tree.

    The node part is the separator of its working set; label-0 and
    label-1 children take the a and b sides.  Leaves hold at most
    ceil(n^alpha) vertices; empty parts pad every branch to a uniform
    depth.
    """
    if not (0.0 < alpha < 1.0):
        raise ContractError(f"alpha must lie in (0,1), got {alpha}")
    if strategy not in STRATEGIES:
        raise InputError(f"unknown separator strategy {strategy!r}")
    threshold = math.ceil(g.n ** alpha) if g.n else 0

    def grow(working: frozenset[int]):
        if len(working) <= threshold:
            return (working, None)
        sep = find_separator(g, working, strategy, coords=coords)
        return (sep.s, (grow(sep.a), grow(sep.b)))

    shape = grow(frozenset(range(g.n)))

    def depth_of(node) -> int:
        part, children = node
        if children is None:
            return 0
        return 1 + max(depth_of(children[0]), depth_of(children[1]))

    target = depth_of(shape)

    def padded(node, levels: int):
        part, children = node
        if children is None and levels == 0:
            return (part, None)
        if children is None:
            children = ((frozenset(), None), (frozenset(), None))
        return (part, (padded(children[0], levels - 1), padded(children[1], levels - 1)))

    shape = padded(shape, target)

    nodes: list[TreeNode] = []

    def flatten(node) -> int:
        part, children = node
        index = len(nodes)
        nodes.append(TreeNode(part=part, children=None))
        if children is not None:
            c0 = flatten(children[0])
            c1 = flatten(children[1])
            nodes[index] = TreeNode(part=part, children=(c0, c1))
        return index

    flatten(shape)
    tree = SeparatorTree(nodes, alpha, threshold)
    tree.validate(g)
    return tree
