import random
from itertools import product

import pytest

from rotorsand.catalog import plane_graphs
from rotorsand.multigraph import Multigraph, complete_graph, cycle_graph
from rotorsand.ribbon import RibbonGraph
from rotorsand.moves import (
    TelescopeLabels,
    classify_pair,
    complements_are_trees,
    is_rotatable,
    is_single_step_tree,
    leaf_swap_path,
    matches_telescope,
    precedes,
    simulate_pair,
    source_turn_path,
    telescope,
    verify_telescope_equivalence,
)
from rotorsand.rotor import route_chip
from rotorsand.sandpile import chip
from rotorsand.torsor import TorsorAction


@pytest.fixture
def swap_ribbon():
    """The square with one diagonal carrying the three showcase pairs:
    a=(0,0), b=(2,0), c=(0,2), d=(2,2); tree = top, diagonal, bottom."""
    g = Multigraph(
        ["a", "b", "c", "d"],
        {
            "left": ("a", "c"),
            "right": ("b", "d"),
            "top": ("c", "d"),
            "diag": ("a", "d"),
            "bot": ("a", "b"),
        },
    )
    return RibbonGraph(
        g,
        {
            "a": ("bot", "diag", "left"),
            "b": ("right", "bot"),
            "c": ("top", "left"),
            "d": ("top", "diag", "right"),
        },
    )


SHOWCASE_TREE = frozenset({"top", "diag", "bot"})


def test_precedes_basic(swap_ribbon):
    g = swap_ribbon.graph
    t = SHOWCASE_TREE
    assert precedes(g, t, "c", "a", "d")  # path a -> d -> c
    assert not precedes(g, t, "c", "a", "b")
    assert not precedes(g, t, "c", "a", "a")


def test_precedes_matches_rotor_criterion(swap_ribbon):
    from rotorsand.rotor import tree_to_rotors

    g = swap_ribbon.graph
    for t in g.spanning_trees():
        for root in g.vertices:
            rho = tree_to_rotors(g, t, root)
            for e in t:
                x, y = g.ends(e)
                for a, b in ((x, y), (y, x)):
                    if a == root:
                        continue
                    assert precedes(g, t, root, a, b) == (rho.rotor(a) == e)


def test_showcase_source_turn(swap_ribbon):
    mv = classify_pair(swap_ribbon, SHOWCASE_TREE, "c", "a")
    assert mv.kind == "source-turn"
    assert (mv.removed, mv.added) == ("top", "left")


def test_showcase_single_step_only(swap_ribbon):
    mv = classify_pair(swap_ribbon, SHOWCASE_TREE, "a", "c")
    assert mv.kind == "single-step"
    assert (mv.removed, mv.added) == ("diag", "left")


def test_showcase_reverse_pair(swap_ribbon):
    assert classify_pair(swap_ribbon, SHOWCASE_TREE, "c", "d") is None
    mv = classify_pair(swap_ribbon, SHOWCASE_TREE, "d", "c")
    assert mv.kind == "reverse-single-step"
    assert (mv.removed, mv.added) == ("top", "left")


def test_classification_agrees_with_simulation():
    rng = random.Random(21)
    pool = [rg for rg in plane_graphs(6) if rg.graph.is_two_connected()]
    for rg in rng.sample(pool, min(30, len(pool))):
        g = rg.graph
        for t in g.spanning_trees():
            for c in g.vertices:
                for s in g.vertices:
                    if c == s:
                        continue
                    mv = classify_pair(rg, t, c, s)
                    out, n = simulate_pair(rg, t, c, s)
                    if mv is not None and mv.kind != "reverse-single-step":
                        assert n == 1 and out == mv.result
                    else:
                        assert n != 1


def test_source_turn_pairs_are_single_step():
    for rg in plane_graphs(5, two_connected=True):
        g = rg.graph
        for t in g.spanning_trees():
            for c in g.vertices:
                for s in g.vertices:
                    if c == s:
                        continue
                    mv = classify_pair(rg, t, c, s)
                    if mv is not None and mv.kind == "source-turn":
                        _, n = simulate_pair(rg, t, c, s)
                        assert n == 1


def test_reverse_pair_routes_to_swap(swap_ribbon):
    # acting by the reverse pair's class swaps the two edges directly
    act = TorsorAction(swap_ribbon)
    mv = classify_pair(swap_ribbon, SHOWCASE_TREE, "d", "c")
    got = act.act(chip("d", "c"), SHOWCASE_TREE)
    assert got == mv.result


def test_reverse_pairs_swap_everywhere():
    for rg in plane_graphs(5, two_connected=True):
        act = TorsorAction(rg)
        g = rg.graph
        for t in g.spanning_trees():
            for c in g.vertices:
                for s in g.vertices:
                    if c == s:
                        continue
                    mv = classify_pair(rg, t, c, s)
                    if mv is not None and mv.kind == "reverse-single-step":
                        assert act.act(chip(c, s), t) == mv.result


def test_rotatable_matches_pair_classification():
    for rg in plane_graphs(5, two_connected=True):
        g = rg.graph
        for t in g.spanning_trees():
            for root in g.vertices:
                for c in g.vertices:
                    if c == root:
                        continue
                    ok, removed, added = is_rotatable(rg, t, root, c)
                    if not ok:
                        continue
                    # a rotatable rotor realizes a single-step pair with the
                    # same edges for the sink across the entering edge
                    s = g.other(added, c)
                    mv = classify_pair(rg, t, c, s)
                    assert mv is not None and mv.kind != "reverse-single-step"
                    assert (mv.removed, mv.added) == (removed, added)


def test_rotation_into_parallel_cycle_not_rotatable():
    g = Multigraph(
        ["x", "y", "z"],
        {"p": ("x", "y"), "q": ("x", "y"), "r": ("y", "z"), "t": ("x", "z")},
    )
    rg = RibbonGraph(g, {"x": ("p", "q", "t"), "y": ("q", "p", "r"), "z": ("r", "t")})
    assert rg.is_plane()
    # rotor at x turns from t onto p while y points back along q: the two
    # parallel edges close a directed 2-cycle
    t = frozenset({"q", "t"})
    ok, removed, added = is_rotatable(rg, t, "z", "x")
    assert not ok and removed == "t" and added == "p"


def test_source_turn_path_identity(swap_ribbon):
    t = SHOWCASE_TREE
    assert source_turn_path(swap_ribbon, t, t) == []


def test_source_turn_path_all_pairs(square_ribbon):
    g = square_ribbon.graph
    trees = g.spanning_trees()
    for t1 in trees:
        for t2 in trees:
            seq = source_turn_path(square_ribbon, t1, t2)
            cur = t1
            for mv in seq:
                assert mv.tree == cur
                assert mv.kind == "source-turn"
                cur = mv.result
            assert cur == t2


def test_source_turn_moves_match_routing(square_ribbon):
    g = square_ribbon.graph
    trees = g.spanning_trees()
    for t1 in trees:
        for t2 in trees:
            for mv in source_turn_path(square_ribbon, t1, t2):
                routed, steps = route_chip(square_ribbon, mv.tree, mv.c, mv.s, trace=True)
                assert len(steps) == 1 and routed == mv.result


def test_source_turn_requires_two_connected():
    g = Multigraph(
        ["a", "b", "c"], {"ab": ("a", "b"), "ab2": ("a", "b"), "bc": ("b", "c")}
    )
    rg = RibbonGraph(g, {"a": ("ab", "ab2"), "b": ("ab", "ab2", "bc"), "c": ("bc",)})
    with pytest.raises(ValueError):
        source_turn_path(rg, frozenset({"ab", "bc"}), frozenset({"ab2", "bc"}))


def test_leaf_swap_identity_and_c4():
    g = cycle_graph(4)
    trees = g.spanning_trees()
    assert leaf_swap_path(g, trees[0], trees[0]) == [trees[0]]
    for t1 in trees:
        for t2 in trees:
            path = leaf_swap_path(g, t1, t2)
            assert path[0] == t1 and path[-1] == t2
            for a, b in zip(path, path[1:]):
                gone = a - b
                assert len(gone) == 1 and len(b - a) == 1
                (e,) = gone
                leaf_sides = [v for v in g.ends(e) if sum(1 for x in a if v in g.ends(x)) == 1]
                assert leaf_sides, "removed edge must be a leaf edge"


def test_rotatability_survives_minors():
    # deleting an uninvolved non-tree edge or contracting an uninvolved tree
    # edge preserves rotatability with the same edge pair
    rng = random.Random(31)
    pool = [rg for rg in plane_graphs(6, two_connected=True)]
    for rg in rng.sample(pool, 20):
        g = rg.graph
        t = rng.choice(g.spanning_trees())
        root = rng.choice(g.vertices)
        for c in g.vertices:
            if c == root:
                continue
            ok, removed, added = is_rotatable(rg, t, root, c)
            if not ok:
                continue
            for e in g.edges:
                if e in (removed, added):
                    continue
                if e not in t:
                    sub = rg.delete(e)
                    if not sub.graph.is_two_connected():
                        continue
                    ok2, r2, a2 = is_rotatable(sub, t, root, c)
                    assert ok2 and (r2, a2) == (removed, added)
                elif e in t:
                    vmap = g.contraction_vertex_map(e)
                    if vmap[c] != c or c == vmap[root] or vmap[root] != root:
                        continue
                    sub = rg.contract(e)
                    if not sub.graph.is_two_connected():
                        continue
                    ok2, r2, a2 = is_rotatable(sub, t - {e}, root, c)
                    assert ok2 and (r2, a2) == (removed, added)


# -- telescopes -------------------------------------------------------------


def test_telescope_smallest_is_double_edge():
    rg, labels = telescope(0, [0])
    g = rg.graph
    assert len(g.vertices) == 2 and len(g.edges) == 2
    assert labels.x == labels.s


def test_telescope_drawn_instance_shape():
    rg, labels = telescope(5, [1, 0, 0, 2, 1, 0])
    g = rg.graph
    assert len(g.vertices) == 11
    assert len(g.edges) == 20
    assert rg.is_plane()
    assert rg.next_edge("c", "g") == "f"
    # stage three carries its two rungs between the chain pairs
    assert rg.rotation["z3"] == ("e3", "h3_1", "h3_2", "e4", "he4", "he3")


def test_telescope_hat_edges_share_a_side():
    from rotorsand.ribbon import classify_sides

    rg, lab = telescope(5, [1, 0, 0, 2, 1, 0])
    cyc = [("c", "g")] + [(f"z{i}", f"e{i + 1}") for i in range(5)] + [("z5", "f")]
    sides = classify_sides(rg, cyc)
    hats = {f"he{i}" for i in range(1, 6)}
    assert hats <= sides.left_edges or hats <= sides.right_edges


def test_telescope_edge_count_identity():
    for n in range(0, 3):
        for ks in product(range(3), repeat=n + 1):
            rg, _ = telescope(n, list(ks))
            g = rg.graph
            assert len(g.edges) == 2 * len(g.vertices) - 2


def test_single_step_trees_cross_checked_with_classifier():
    # definition-level oracle: the pair at c steps from g to f, or the
    # f-for-g swap of the tree steps back from g to f
    for n, ks in [(0, [1]), (1, [1, 0]), (1, [0, 1]), (2, [0, 1, 0])]:
        rg, lab = telescope(n, ks)
        g = rg.graph
        for t in g.spanning_trees():
            direct = is_single_step_tree(rg, t, lab)
            mv1 = classify_pair(rg, t, lab.c, lab.s)
            first = (
                mv1 is not None
                and mv1.kind != "reverse-single-step"
                and (mv1.removed, mv1.added) == (lab.g, lab.f)
            )
            second = False
            if lab.f in t and lab.g not in t:
                swapped = t - {lab.f} | {lab.g}
                if g.is_spanning_tree(swapped):
                    mv = classify_pair(rg, swapped, lab.c, lab.s)
                    second = (
                        mv is not None
                        and mv.kind != "reverse-single-step"
                        and (mv.removed, mv.added) == (lab.g, lab.f)
                    )
            assert direct == (first or second), (n, ks, sorted(t))


def test_telescope_complements_are_trees():
    for n in range(0, 3):
        for ks in product(range(3), repeat=n + 1):
            rg, lab = telescope(n, list(ks))
            assert complements_are_trees(rg, lab)
            assert matches_telescope(rg, lab)
            assert verify_telescope_equivalence(rg, lab)


def k4_with_labels():
    k4 = complete_graph(4)
    rot = {
        "v0": ("e0_1", "e0_3", "e0_2"),
        "v1": ("e1_2", "e1_3", "e0_1"),
        "v2": ("e0_2", "e2_3", "e1_2"),
        "v3": ("e2_3", "e0_3", "e1_3"),
    }
    rg = RibbonGraph(k4, rot)
    for t in k4.spanning_trees():
        for c in k4.vertices:
            for s in k4.vertices:
                if c == s:
                    continue
                mv = classify_pair(rg, t, c, s)
                if mv is not None and mv.kind == "source-turn":
                    x = k4.other(mv.removed, c)
                    return rg, TelescopeLabels(c, s, x, mv.added, mv.removed)
    raise AssertionError("no source-turn pair found")


def test_non_telescope_complement_fails():
    rg, lab = k4_with_labels()
    assert rg.is_plane()
    assert not matches_telescope(rg, lab)
    assert not complements_are_trees(rg, lab)
    assert verify_telescope_equivalence(rg, lab)


def test_five_edge_graph_single_step_complement_fails(square_ribbon):
    # an odd edge count can never split into two trees
    mv = None
    g = square_ribbon.graph
    for t in g.spanning_trees():
        got = classify_pair(square_ribbon, t, "c", "s")
        if got is not None and got.kind == "source-turn":
            mv = got
            break
    assert mv is not None
    lab = TelescopeLabels("c", "s", g.other(mv.removed, "c"), mv.added, mv.removed)
    assert not complements_are_trees(square_ribbon, lab)
