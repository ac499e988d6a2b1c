"""Separator-tree-guided transformation between dominating sets.

The walk visits every root-to-leaf path of the tree in lexicographic
order of its 0/1 edge labels.  For each path P there is a canonical
dominating set: the parts on P, plus the target set restricted to the
subtrees hanging off P by a 0-edge, plus the source set restricted to
the 1-side.  The emitted move sequence travels from canonical set to
canonical set, removing the abandoned path tail (keeping target
vertices) and then adding the new tail (skipping source vertices), so
every intermediate stays dominating and the sequence width stays within
4x the maximum path weight of the tree above the larger endpoint --
provided the target is a minimum dominating set.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple

from .domset import DEFAULT_BUDGET, gamma_exact, gamma_lower_bound_regular, \
    greedy_dominating, reduce_to_minimal
from .errors import ContractError, InvariantError, ParseError, ResourceLimitError
from .graph import Graph
from .septree import SeparatorTree

log = logging.getLogger("domrecon.reconfig")

ADD = "add"
REMOVE = "remove"
DEFAULT_MOVE_CAP = 10_000_000


@dataclass(frozen=True)
class Move:
    """A single-vertex change; applying one changes the set size by one."""

    kind: str  # ADD or REMOVE
    vertex: int

    def __post_init__(self):
        if self.kind not in (ADD, REMOVE):
            raise ContractError(f"move kind must be add/remove, got {self.kind!r}")

    def inverted(self) -> "Move":
        return Move(REMOVE if self.kind == ADD else ADD, self.vertex)


class Checkpoint(NamedTuple):
    """State index (moves applied so far) at which a canonical set is reached."""

    index: int
    code: str


@dataclass(frozen=True)
class WidthGuarantee:
    """Certified width bound: width <= bound with w the max path weight."""

    w: int
    bound: int
    d_prime_minimum: bool


@dataclass
class ReconfigSequence:
    """A start set plus ordered single-vertex moves; end/width derived by replay."""

    start: frozenset[int]
    moves: tuple[Move, ...] = ()
    checkpoints: tuple[Checkpoint, ...] = ()
    guarantee: WidthGuarantee | None = None
    end: frozenset[int] = field(init=False)
    width: int = field(init=False)

    def __post_init__(self):
        self.start = frozenset(self.start)
        self.moves = tuple(self.moves)
        self.checkpoints = tuple(self.checkpoints)
        current = set(self.start)
        width = len(current)
        for move in self.moves:
            if move.kind == ADD:
                current.add(move.vertex)
            else:
                current.discard(move.vertex)
            width = max(width, len(current))
        self.end = frozenset(current)
        self.width = width

    def states(self) -> Iterator[frozenset[int]]:
        """Yield all len(moves)+1 states, start first."""
        current = set(self.start)
        yield frozenset(current)
        for move in self.moves:
            if move.kind == ADD:
                current.add(move.vertex)
            else:
                current.discard(move.vertex)
            yield frozenset(current)

    def reversed_(self) -> "ReconfigSequence":
        """The inverse walk from end to start; width is unchanged."""
        total = len(self.moves)
        return ReconfigSequence(
            start=self.end,
            moves=tuple(m.inverted() for m in reversed(self.moves)),
            checkpoints=tuple(Checkpoint(total - c.index, c.code)
                              for c in reversed(self.checkpoints)),
            guarantee=self.guarantee,
        )

    def concatenated(self, other: "ReconfigSequence",
                     guarantee: WidthGuarantee | None = None) -> "ReconfigSequence":
        if self.end != other.start:
            raise ContractError("sequences do not share an endpoint")
        offset = len(self.moves)
        return ReconfigSequence(
            start=self.start,
            moves=self.moves + other.moves,
            checkpoints=self.checkpoints + tuple(
                Checkpoint(c.index + offset, c.code) for c in other.checkpoints),
            guarantee=guarantee,
        )

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "start": sorted(self.start),
            "moves": [{"op": m.kind, "v": m.vertex} for m in self.moves],
            "checkpoints": [{"index": c.index, "code": c.code} for c in self.checkpoints],
            "width": self.width,
            "guarantee": (
                {"W": self.guarantee.w, "bound": self.guarantee.bound,
                 "d_prime_minimum": self.guarantee.d_prime_minimum}
                if self.guarantee is not None else "none"
            ),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReconfigSequence":
        try:
            start = frozenset(int(v) for v in obj["start"])
            moves = tuple(Move(str(m["op"]), int(m["v"])) for m in obj.get("moves", []))
            checkpoints = tuple(
                Checkpoint(int(c["index"]), str(c["code"]))
                for c in obj.get("checkpoints", []))
            raw = obj.get("guarantee", "none")
            guarantee = None if raw in (None, "none") else WidthGuarantee(
                w=int(raw["W"]), bound=int(raw["bound"]),
                d_prime_minimum=bool(raw["d_prime_minimum"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad sequence JSON: {exc}") from exc
        seq = cls(start=start, moves=moves, checkpoints=checkpoints, guarantee=guarantee)
        if "width" in obj and seq.width != int(obj["width"]):
            raise ParseError("sequence JSON width does not match its moves")
        return seq


def save_sequence(seq: ReconfigSequence, target: str | Path | IO) -> None:
    text = json.dumps(seq.to_json(), indent=2, sort_keys=True) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)


def load_sequence(source: str | Path | IO) -> ReconfigSequence:
    text = Path(source).read_text(encoding="utf-8") if isinstance(source, (str, Path)) \
        else source.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno) from exc
    return ReconfigSequence.from_json(obj)


# -- path iteration and canonical sets ---------------------------------------


def lex_path_iter(tree: SeparatorTree) -> Iterator[str]:
    """All 2^depth root-to-leaf path codes in lexicographic order."""
    if tree.depth == 0:
        yield ""
        return
    for i in range(1 << tree.depth):
        yield format(i, f"0{tree.depth}b")


def special_set(g: Graph, tree: SeparatorTree, code: str,
                d: Iterable[int], d_prime: Iterable[int]) -> frozenset[int]:
    """The canonical dominating set of a path: on-path parts, target on
    the 0-side, source on the 1-side.  Domination is asserted."""
    d = g.vertex_set(d)
    d_prime = g.vertex_set(d_prime)
    for name, ds in (("source", d), ("target", d_prime)):
        if not g.is_dominating(ds):
            raise ContractError(f"{name} set is not dominating")
    on_path, l_side, r_side = tree.path_sets(code)
    result = on_path | (l_side & d_prime) | (r_side & d)
    if not g.is_dominating(result):
        raise InvariantError(
            f"canonical set of path {code!r} fails to dominate; tree is malformed")
    return result


# -- the transformation -------------------------------------------------------


class _Coverage:
    """Incremental |N[v] & current| counters with an undominated tally."""

    def __init__(self, g: Graph, members: frozenset[int]):
        self.g = g
        self.count = [0] * g.n
        for u in members:
            self.count[u] += 1
            for w in g.neighbors(u):
                self.count[w] += 1
        self.uncovered = sum(1 for c in self.count if c == 0)

    def add(self, v: int) -> None:
        for w in (v, *self.g.neighbors(v)):
            if self.count[w] == 0:
                self.uncovered -= 1
            self.count[w] += 1

    def remove(self, v: int) -> None:
        for w in (v, *self.g.neighbors(v)):
            self.count[w] -= 1
            if self.count[w] == 0:
                self.uncovered += 1


def transform(g: Graph, d: Iterable[int], d_prime: Iterable[int], tree: SeparatorTree,
              *, d_prime_minimum: bool = False, max_moves: int | None = DEFAULT_MOVE_CAP,
              check_canonical: bool = True) -> ReconfigSequence:
    """Emit a verified move sequence from d to d_prime along the tree walk.

    Every intermediate is checked to dominate as it is produced.  When
    ``d_prime_minimum`` is set (caller-certified), the canonical-set size
    bound and the overall width bound are asserted and recorded in the
    guarantee; otherwise the guarantee is left empty.
    """
    d = g.vertex_set(d)
    d_prime = g.vertex_set(d_prime)
    if not g.is_dominating(d):
        raise ContractError("source set is not dominating")
    if not g.is_dominating(d_prime):
        raise ContractError("target set is not dominating")
    tree.validate(g)

    w = tree.max_path_weight()
    bound = max(len(d), len(d_prime)) + 4 * w
    guarantee = WidthGuarantee(w=w, bound=bound, d_prime_minimum=True) \
        if d_prime_minimum else None
    if d == d_prime:
        return ReconfigSequence(start=d, guarantee=guarantee)
    if max_moves is not None and max_moves < 0:
        raise ContractError("max_moves must be non-negative")

    cov = _Coverage(g, d)
    current = set(d)
    moves: list[Move] = []
    checkpoints: list[Checkpoint] = []

    def apply(kind: str, v: int) -> None:
        if max_moves is not None and len(moves) >= max_moves:
            raise ResourceLimitError(
                f"move cap {max_moves} exceeded; projected at most {2 * g.n + 2 * w} moves",
                projected=2 * g.n + 2 * w)
        if kind == ADD:
            if v in current:
                raise InvariantError(f"adding vertex {v} twice")
            current.add(v)
            cov.add(v)
        else:
            if v not in current:
                raise InvariantError(f"removing absent vertex {v}")
            current.remove(v)
            cov.remove(v)
        if cov.uncovered:
            raise InvariantError(
                f"intermediate after {kind} {v} is not dominating; algorithm bug")
        moves.append(Move(kind, v))

    def checkpoint(code: str) -> None:
        checkpoints.append(Checkpoint(len(moves), code))
        if check_canonical:
            expected = special_set(g, tree, code, d, d_prime)
            if frozenset(current) != expected:
                raise InvariantError(f"state at path {code!r} is not its canonical set")
        if d_prime_minimum and len(current) > len(d) + 2 * w:
            raise InvariantError(
                f"canonical set of {code!r} has {len(current)} vertices, "
                f"exceeding |D| + 2W = {len(d) + 2 * w}")

    codes = lex_path_iter(tree)
    first = next(codes)
    path = tree.path_nodes(first)
    for node in path:
        for v in sorted(tree.nodes[node].part - d):
            apply(ADD, v)
    checkpoint(first)

    prev_code = first
    for code in codes:
        split = _common_prefix(prev_code, code)
        old_tail = tree.path_nodes(prev_code)[split + 1:]
        for node in reversed(old_tail):
            for v in sorted(tree.nodes[node].part - d_prime):
                apply(REMOVE, v)
        new_tail = tree.path_nodes(code)[split + 1:]
        for node in new_tail:
            for v in sorted(tree.nodes[node].part - d):
                apply(ADD, v)
        checkpoint(code)
        prev_code = code

    for node in reversed(tree.path_nodes(prev_code)):
        for v in sorted(tree.nodes[node].part - d_prime):
            apply(REMOVE, v)

    if frozenset(current) != d_prime:
        raise InvariantError("transform did not terminate at the target set")
    seq = ReconfigSequence(start=d, moves=tuple(moves),
                           checkpoints=tuple(checkpoints), guarantee=guarantee)
    if d_prime_minimum and seq.width > bound:
        raise InvariantError(f"width {seq.width} exceeds guaranteed bound {bound}")
    log.debug("transform: %d moves, width %d (bound %s)", len(moves), seq.width,
              bound if d_prime_minimum else "uncertified")
    return seq


def _common_prefix(a: str, b: str) -> int:
    i = 0
    while i < len(a) and a[i] == b[i]:
        i += 1
    return i


def route_via_minimum(g: Graph, d: Iterable[int], d_prime: Iterable[int],
                      tree: SeparatorTree, *, budget: int = DEFAULT_BUDGET,
                      fallback: str = "error",
                      max_moves: int | None = DEFAULT_MOVE_CAP) -> ReconfigSequence:
    """Transform d to d_prime via a minimum dominating set.

    Both halves target a certified minimum set, so the width guarantee of
    ``transform`` applies to the concatenation.  When the exact solver
    budget runs out, ``fallback="greedy"`` substitutes a greedy minimal
    set and drops the guarantee; the default re-raises the resource error
    with that suggestion.
    """
    d = g.vertex_set(d)
    d_prime = g.vertex_set(d_prime)
    for name, ds in (("source", d), ("target", d_prime)):
        if not g.is_dominating(ds):
            raise ContractError(f"{name} set is not dominating")
    if fallback not in ("error", "greedy"):
        raise ContractError(f"fallback must be 'error' or 'greedy', got {fallback!r}")

    degree_lb = gamma_lower_bound_regular(g)
    if len(d_prime) == degree_lb:
        return transform(g, d, d_prime, tree, d_prime_minimum=True, max_moves=max_moves)
    if len(d) == degree_lb:
        return transform(g, d_prime, d, tree, d_prime_minimum=True,
                         max_moves=max_moves).reversed_()

    certified = True
    try:
        size, d_star = gamma_exact(g, max_n=g.n, budget=budget)
    except ResourceLimitError as exc:
        if fallback == "error":
            raise ResourceLimitError(
                f"{exc}; rerun with fallback='greedy' to trade the width "
                f"guarantee for completion", **exc.info) from exc
        d_star = reduce_to_minimal(g, greedy_dominating(g))
        size = len(d_star)
        certified = False
        log.warning("route_via_minimum: greedy fallback via a size-%d minimal set; "
                    "width guarantee dropped", size)

    if certified and len(d_prime) == size:
        return transform(g, d, d_prime, tree, d_prime_minimum=True, max_moves=max_moves)

    first = transform(g, d, d_star, tree, d_prime_minimum=certified, max_moves=max_moves)
    second = transform(g, d_prime, d_star, tree, d_prime_minimum=certified,
                       max_moves=max_moves)
    guarantee = None
    if certified:
        w = tree.max_path_weight()
        guarantee = WidthGuarantee(
            w=w, bound=max(len(d), len(d_prime)) + 4 * w, d_prime_minimum=True)
    seq = first.concatenated(second.reversed_(), guarantee=guarantee)
    if guarantee is not None and seq.width > guarantee.bound:
        raise InvariantError(f"width {seq.width} exceeds guaranteed bound {guarantee.bound}")
    return seq


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    """Replay outcome: validity, measured width, and the first bad state."""

    valid: bool
    width: int
    length: int
    end: frozenset[int]
    first_violation: tuple[int, str] | None = None

    def to_json(self) -> dict:
        obj = {"valid": self.valid, "width": self.width, "length": self.length,
               "end": sorted(self.end)}
        if self.first_violation is not None:
            obj["first_violation"] = {"index": self.first_violation[0],
                                      "reason": self.first_violation[1]}
        return obj


def verify_sequence(g: Graph, seq: ReconfigSequence) -> VerifyReport:
    """Replay a sequence, checking every prefix state dominates.

    Violations are report content, not exceptions: the first offending
    state index is recorded and the replay continues to measure width.
    """
    violation: tuple[int, str] | None = None

    def note(index: int, reason: str) -> None:
        nonlocal violation
        if violation is None:
            violation = (index, reason)

    try:
        members = g.vertex_set(seq.start)
    except Exception as exc:
        note(0, str(exc))
        members = frozenset(v for v in seq.start if 0 <= v < g.n)
    current = set(members)
    if not g.is_dominating(current):
        note(0, "start set is not dominating")
    width = len(current)
    for i, move in enumerate(seq.moves, start=1):
        v = move.vertex
        if not (0 <= v < g.n):
            note(i, f"vertex {v} out of range")
            continue
        if move.kind == ADD:
            if v in current:
                note(i, f"move {i} adds vertex {v} already present")
            current.add(v)
        else:
            if v not in current:
                note(i, f"move {i} removes vertex {v} not present")
            current.discard(v)
        width = max(width, len(current))
        if not g.is_dominating(current):
            note(i, f"state {i} is not dominating")
    return VerifyReport(valid=violation is None, width=width,
                        length=len(seq.moves), end=frozenset(current),
                        first_violation=violation)
