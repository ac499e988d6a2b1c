"""Matplotlib renderings: graphs, separator trees, and width profiles.

All functions write straight to files via the Agg backend; nothing here
opens a display.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .graph import Graph  # noqa: E402
from .reconfig import ReconfigSequence  # noqa: E402
from .septree import SeparatorTree  # noqa: E402


def _positions(g: Graph, labels: Mapping[int, str] | None) -> dict[int, tuple[float, float]]:
    """Lattice positions from "s,t,r" labels when available, else a circle."""
    if labels and len(labels) == g.n:
        try:
            pos = {}
            for v in range(g.n):
                s, t, r = (int(x) for x in labels[v].split(","))
                pos[v] = (2 * s - t + r, s + 2 * t)
            return pos
        except (KeyError, ValueError):
            pass
    return {
        v: (math.cos(2 * math.pi * v / max(g.n, 1)),
            math.sin(2 * math.pi * v / max(g.n, 1)))
        for v in range(g.n)
    }


def draw_graph(g: Graph, out: str | Path, labels: Mapping[int, str] | None = None,
               highlight: Iterable[int] | None = None) -> None:
    pos = _positions(g, labels)
    marked = frozenset(highlight) if highlight else frozenset()
    fig, ax = plt.subplots(figsize=(7, 7))
    span = max((abs(x) + abs(y) for x, y in pos.values()), default=1)
    for u, v in g.edges():
        (x0, y0), (x1, y1) = pos[u], pos[v]
        # suppress wrap-around edges that would streak across the drawing
        if abs(x0 - x1) + abs(y0 - y1) > span / 2:
            continue
        ax.plot([x0, x1], [y0, y1], color="0.7", linewidth=0.8, zorder=1)
    xs = [pos[v][0] for v in range(g.n)]
    ys = [pos[v][1] for v in range(g.n)]
    colors = ["#1f77b4" if v in marked else "white" for v in range(g.n)]
    ax.scatter(xs, ys, s=60, c=colors, edgecolors="black", zorder=2)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def draw_tree(tree: SeparatorTree, out: str | Path) -> None:
    """Binary layout with 0/1 edge labels; nodes annotated with part sizes."""
    xs: dict[int, float] = {}
    next_leaf = [0.0]

    def place(i: int) -> float:
        node = tree.nodes[i]
        if node.children is None:
            xs[i] = next_leaf[0]
            next_leaf[0] += 1.0
        else:
            xs[i] = (place(node.children[0]) + place(node.children[1])) / 2
        return xs[i]

    place(tree.root)
    fig, ax = plt.subplots(figsize=(max(6, next_leaf[0] / 2), max(4, tree.depth + 1)))
    for i, node in enumerate(tree.nodes):
        y = -tree.depth_of[i]
        if node.children is not None:
            for bit, child in enumerate(node.children):
                cy = -tree.depth_of[child]
                ax.plot([xs[i], xs[child]], [y, cy], color="0.6", zorder=1)
                ax.text((xs[i] + xs[child]) / 2, (y + cy) / 2, str(bit),
                        fontsize=8, color="0.3", ha="center")
        label = str(len(node.part)) if len(node.part) != 1 else str(min(node.part))
        ax.scatter([xs[i]], [y], s=240, c="white", edgecolors="black", zorder=2)
        ax.text(xs[i], y, label, ha="center", va="center", fontsize=8, zorder=3)
    ax.axis("off")
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def plot_width_profile(seq: ReconfigSequence, out: str | Path,
                       bound: int | None = None) -> None:
    """Set size per state with the endpoint maximum and any certified bound."""
    sizes = [len(state) for state in seq.states()]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(range(len(sizes)), sizes, linewidth=1.2, label="intermediate size")
    base = max(len(seq.start), len(seq.end))
    ax.axhline(base, color="0.4", linestyle=":", label=f"max endpoint = {base}")
    if bound is not None:
        ax.axhline(bound, color="tab:red", linestyle="--", label=f"bound = {bound}")
    for cp in seq.checkpoints:
        ax.axvline(cp.index, color="0.85", linewidth=0.5, zorder=0)
    ax.set_xlabel("moves applied")
    ax.set_ylabel("dominating-set size")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def plot_width_trend(rows: list[dict], out: str | Path) -> None:
    """Measured width overhead against sqrt(n) across torus instances."""
    xs = [math.sqrt(row["n"]) for row in rows]
    ys = [row["width_minus_max"] for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, marker="o")
    for row, x, y in zip(rows, xs, ys):
        ax.annotate(row["instance"], (x, y), textcoords="offset points",
                    xytext=(4, 4), fontsize=8)
    ax.set_xlabel("sqrt(n)")
    ax.set_ylabel("width - max endpoint")
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
