import io
import math
import random

import pytest

from domrecon import (ContractError, Graph, InputError, ResourceLimitError,
                      build_tree, find_separator, path_graph)
from domrecon.randgen import random_connected_graph
from domrecon.septree import (GridCoords, SeparatorTree, TreeNode, load_tree,
                              reference_c3, save_tree)

from oracles import min_balanced_separator_size


def torus_coords(inst):
    return GridCoords(inst.k, {v: (s, t) for v, (s, t, _) in inst.coord_map.items()})


class TestFindSeparator:
    def test_path_midpoint(self, p9):
        # grid-cut has no coordinates here, so it cuts the best BFS level
        sep = find_separator(p9, range(9), "grid-cut")
        assert sep.s == {4}
        assert {len(sep.a), len(sep.b)} == {4}
        assert sep.a == {0, 1, 2, 3}

    def test_balanced_components_need_no_separator(self):
        g = Graph(6, [(0, 1), (2, 3), (4, 5)])
        sep = find_separator(g, range(6), "bfs-level")
        assert sep.s == frozenset()
        assert {len(sep.a), len(sep.b)} <= {2, 4}

    def test_torus_grid_cut(self, torus4):
        sep = find_separator(torus4.graph, range(80), "grid-cut",
                             coords=torus_coords(torus4))
        assert len(sep.s) <= 2 * 20  # two coordinate lines of 5k vertices
        assert max(len(sep.a), len(sep.b)) * 3 <= 2 * 80

    def test_sides_have_no_crossing_edges(self, torus4):
        sep = find_separator(torus4.graph, range(80), "grid-cut",
                             coords=torus_coords(torus4))
        for u in sep.a:
            assert not (set(torus4.graph.neighbors(u)) & sep.b)

    def test_exact_matches_enumeration_oracle(self):
        rng = random.Random(2)
        for _ in range(10):
            g = random_connected_graph(rng, n_min=4, n_max=9)
            working = frozenset(range(g.n))
            sep = find_separator(g, working, "exact")
            assert len(sep.s) == min_balanced_separator_size(g, working)

    def test_exact_guard(self, torus4):
        with pytest.raises(ResourceLimitError):
            find_separator(torus4.graph, range(80), "exact")

    def test_working_set_too_small(self, c5):
        with pytest.raises(ContractError):
            find_separator(c5, {0}, "bfs-level")

    def test_unknown_strategy(self, c5):
        with pytest.raises(InputError):
            find_separator(c5, range(5), "magic")

    def test_deterministic(self, c5):
        a = find_separator(c5, range(5), "bfs-level")
        b = find_separator(c5, range(5), "bfs-level")
        assert (a.s, a.a, a.b) == (b.s, b.a, b.b)

    def test_side_a_holds_smallest_id(self, p9):
        sep = find_separator(p9, range(9), "bfs-level")
        assert min(sep.a | sep.b) in sep.a


class TestBuildTree:
    def test_single_node_when_small(self):
        g = path_graph(3)
        tree = build_tree(g, 0.9, "bfs-level")  # threshold = ceil(3^0.9) = 3
        assert tree.depth == 0
        assert tree.nodes[0].part == {0, 1, 2}

    def test_p9_leaf_sizes(self, p9):
        tree = build_tree(p9, 0.5, "bfs-level")
        assert tree.depth >= 1
        for node in tree.nodes:
            if node.children is None:
                assert len(node.part) <= 3

    def test_partition_and_ancestry_verified(self, torus8):
        tree = build_tree(torus8.graph, 0.5, "grid-cut", coords=torus_coords(torus8))
        tree.validate(torus8.graph)  # exhaustive scan over all 640 edges
        parts = [node.part for node in tree.nodes]
        assert sum(len(p) for p in parts) == 320

    def test_alpha_range(self, c5):
        with pytest.raises(ContractError):
            build_tree(c5, 1.0)
        with pytest.raises(ContractError):
            build_tree(c5, 0.0)

    def test_uniform_leaf_depth(self, torus4):
        tree = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        depths = {tree.depth_of[i] for i, nd in enumerate(tree.nodes)
                  if nd.children is None}
        assert depths == {tree.depth}

    def test_deterministic_rebuild(self, torus4):
        t1 = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        t2 = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        assert t1.to_json() == t2.to_json()

    def test_seeded_random_graphs(self):
        rng = random.Random(4)
        for _ in range(15):
            g = random_connected_graph(rng, n_min=2, n_max=20)
            tree = build_tree(g, 0.5, "bfs-level")
            tree.validate(g)


class TestPathMachinery:
    def test_single_node_paths(self):
        tree = build_tree(path_graph(2), 0.9, "bfs-level")
        on, l, r = tree.path_sets("")
        assert on == {0, 1} and l == r == frozenset()
        assert tree.max_path_weight() == 2

    def test_all_zero_code_collects_one_labeled_subtrees(self):
        rng = random.Random(15)
        g = random_connected_graph(rng, n_min=15, n_max=15)
        tree = build_tree(g, 0.4, "bfs-level")
        code = "0" * tree.depth
        _, l_side, r_side = tree.path_sets(code)
        assert l_side == frozenset()
        # independently gather the 1-children subtrees off the all-zeros path
        expected = set()
        node = tree.root
        for _ in range(tree.depth):
            c0, c1 = tree.nodes[node].children
            stack = [c1]
            while stack:
                i = stack.pop()
                expected.update(tree.nodes[i].part)
                if tree.nodes[i].children:
                    stack.extend(tree.nodes[i].children)
            node = c0
        assert r_side == expected

    def test_partition_and_no_cross_edges(self, torus4):
        tree = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        g = torus4.graph
        for code in (format(i, f"0{tree.depth}b") for i in range(2 ** tree.depth)):
            on, l, r = tree.path_sets(code)
            assert on | l | r == frozenset(range(g.n))
            assert not (on & l) and not (on & r) and not (l & r)
            for u in l:
                assert not (set(g.neighbors(u)) & r)

    def test_invalid_code(self, torus4):
        tree = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        with pytest.raises(InputError):
            tree.path_sets("0")
        with pytest.raises(InputError):
            tree.path_sets("x" * tree.depth)

    def test_p9_midpoint_weight(self, p9):
        tree = build_tree(p9, 0.5, "bfs-level")
        assert tree.max_path_weight() <= 5  # 1 + 1 + 3 with midpoint cuts

    def test_weight_is_max_over_paths(self, torus4):
        tree = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        weights = [tree.path_weight(format(i, f"0{tree.depth}b"))
                   for i in range(2 ** tree.depth)]
        assert tree.max_path_weight() == max(weights)


def test_depth_nine_path_side_membership():
    # complete depth-9 tree; the subtree hanging off the path at step i is
    # marked with part {i}.  Sides follow the first off-path edge label:
    # an off-subtree joins the l side exactly when the path took bit 1.
    code = "000011011"
    nodes = []

    def make(level, on_path):
        idx = len(nodes)
        nodes.append(TreeNode(frozenset(), None))
        if level < len(code):
            if on_path:
                bit = int(code[level])
                c0 = make(level + 1, bit == 0)
                c1 = make(level + 1, bit == 1)
                off = c1 if bit == 0 else c0
                nodes[off] = TreeNode(frozenset({level}), nodes[off].children)
            else:
                c0 = make(level + 1, False)
                c1 = make(level + 1, False)
            nodes[idx] = TreeNode(nodes[idx].part, (c0, c1))
        return idx

    make(0, True)
    tree = SeparatorTree(nodes, alpha=0.5, leaf_threshold=1)
    on_path, l_side, r_side = tree.path_sets(code)
    assert on_path == frozenset()
    assert l_side == {i for i, bit in enumerate(code) if bit == "1"}
    assert r_side == {i for i, bit in enumerate(code) if bit == "0"}


def test_reference_c3_value():
    assert math.isclose(reference_c3(1.0, 0.5), 6.4495, abs_tol=5e-4)


def test_lexicographic_successor_shape():
    codes = [format(i, "04b") for i in range(16)]
    for prev, nxt in zip(codes, codes[1:]):
        i = next(j for j in range(4) if prev[j] != nxt[j])
        assert prev[i:] == "0" + "1" * (3 - i)
        assert nxt[i:] == "1" + "0" * (3 - i)


class TestSerialization:
    def test_round_trip(self, torus4):
        tree = build_tree(torus4.graph, 0.5, "grid-cut", coords=torus_coords(torus4))
        buf = io.StringIO()
        save_tree(tree, buf)
        buf.seek(0)
        loaded = load_tree(buf)
        assert loaded.to_json() == tree.to_json()
        assert loaded.max_path_weight() == tree.max_path_weight()

    def test_weight_mismatch_rejected(self, p9):
        tree = build_tree(p9, 0.5, "bfs-level")
        obj = tree.to_json()
        obj["max_path_weight"] += 1
        with pytest.raises(Exception):
            SeparatorTree.from_json(obj)

    def test_malformed_nodes_rejected(self):
        with pytest.raises(InputError):
            SeparatorTree([TreeNode(frozenset({0}), (1, 1))], 0.5, 1)
