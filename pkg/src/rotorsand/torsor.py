"""Sandpile torsor actions on plane ribbon graphs and their verifiers.

The rotor-routing action evaluates a class on a tree by picking a sink,
moving the class representative into the sink monoid and routing chip by
chip.  Three companion actions come from reversing the rotation, negating
the class, or both.  Verifiers below check the torsor axioms, independence
of the sink choice, and compatibility with contraction, deletion and cut
vertices, exhaustively over whatever instances they are handed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sandpile
from .multigraph import Multigraph
from .ribbon import RibbonGraph
from .rotor import route_chip, route_divisor
from .sandpile import Divisor, chip

VARIANTS = ("r", "rbar", "rinv", "rbarinv")


class TorsorAction:
    """A free transitive action of the sandpile group on spanning trees.

    ``variant`` selects among rotor-routing ("r"), its mirror ("rbar",
    rotors turn the other way), its inverse ("rinv", the class is negated),
    and both ("rbarinv").  Evaluations are memoized per (class, tree), with
    classes keyed by canonical reduced form.
    """

    def __init__(self, rg: RibbonGraph, variant: str = "r", require_plane: bool = True):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        if require_plane and not rg.is_plane():
            raise ValueError("sink-independent actions need a plane ribbon graph")
        self.rg = rg
        self.variant = variant
        self._routing_rg = rg.reverse() if variant in ("rbar", "rbarinv") else rg
        self._memo = {}
        self._chip_tables = {}

    @property
    def graph(self) -> Multigraph:
        return self.rg.graph

    def class_key(self, d: Divisor) -> Divisor:
        return sandpile.canonical_class(self.graph, d)

    def act(self, d: Divisor, tree, sink: str | None = None):
        """Apply the class of d to the tree.

        The sink is an evaluation detail; for plane inputs the result does
        not depend on it (which verify_sink_invariance demonstrates).
        """
        g = self.graph
        if d.degree() != 0:
            raise ValueError("torsor actions act by degree-0 classes")
        tree = frozenset(tree)
        if self.variant in ("rinv", "rbarinv"):
            d = -d
        key = (self.class_key(d), tree, sink)
        if key in self._memo:
            return self._memo[key]
        s = sink if sink is not None else g.vertices[0]
        rep = sandpile.move_to_sink(g, self.class_key(d), s)
        out = route_divisor(self._routing_rg, tree, rep, s)
        self._memo[key] = out
        return out

    def chip_table(self, c: str, s: str) -> dict:
        """tree -> routed tree for a single chip c - s on the routing ribbon."""
        key = (c, s)
        if key not in self._chip_tables:
            table = {}
            for t in self.graph.spanning_trees():
                table[t], _ = route_chip(self._routing_rg, t, c, s)
            self._chip_tables[key] = table
        return self._chip_tables[key]

    def table(self, classes=None, trees=None) -> dict:
        """Full action table {class key: {tree: tree}} built from chip tables.

        Single-chip permutations are composed along the decomposition of each
        representative into (v - s) steps, exactly how route_divisor folds.
        """
        g = self.graph
        if classes is None:
            classes = sandpile.enumerate_classes(g)
        if trees is None:
            trees = g.spanning_trees()
        s = g.vertices[0]
        out = {}
        for d in classes:
            dd = -d if self.variant in ("rinv", "rbarinv") else d
            rep = sandpile.move_to_sink(g, self.class_key(dd), s)
            perm = {t: t for t in trees}
            for v in g.vertices:
                if v == s:
                    continue
                tab = None
                for _ in range(rep[v]):
                    if tab is None:
                        tab = self.chip_table(v, s)
                    perm = {t: tab[perm[t]] for t in trees}
            out[self.class_key(d)] = perm
        return out


def variant(action: TorsorAction, tag: str) -> TorsorAction:
    """The same underlying plane graph with another of the four variants."""
    return TorsorAction(action.rg, tag)


@dataclass
class Report:
    """Outcome of one verification sweep."""

    checked: int = 0
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "Report"):
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)


def verify_torsor_axioms(
    rg: RibbonGraph, act=None, pair_limit: int = 200_000, variant: str = "r"
) -> Report:
    """Exhaustively test identity, additivity, freeness and transitivity.

    ``act`` may be any callable (divisor, tree) -> tree, so corrupted actions
    can be fed in; defaults to the chosen routing variant on rg.  Additivity
    is checked on all class pairs when the cube of the group order stays
    under pair_limit, otherwise on all (generator, class) pairs, which
    reaches every sum by induction; the report notes which mode ran.
    """
    g = rg.graph
    action = TorsorAction(rg, variant) if act is None else None
    classes = sandpile.enumerate_classes(g)
    trees = g.spanning_trees()
    if act is None:
        tables = action.table(classes, trees)

        def ev(d, t):
            return tables[action.class_key(d)][t]

    else:
        memo = {}

        def ev(d, t):
            key = (sandpile.canonical_class(g, d), t)
            if key not in memo:
                memo[key] = act(d, t)
            return memo[key]

    rep = Report()
    zero = Divisor({})
    for t in trees:
        rep.checked += 1
        if ev(zero, t) != t:
            rep.violations.append({"axiom": "identity", "tree": sorted(t)})

    for t in trees:
        hit = {}
        for d in classes:
            out = ev(d, t)
            rep.checked += 1
            if out in hit:
                rep.violations.append(
                    {
                        "axiom": "freeness",
                        "tree": sorted(t),
                        "classes": [d.to_dict(), hit[out].to_dict()],
                    }
                )
            hit[out] = d
        if set(hit) != set(trees):
            rep.violations.append({"axiom": "transitivity", "tree": sorted(t)})

    n = len(classes)
    exhaustive_pairs = n * n * len(trees) <= pair_limit
    if not exhaustive_pairs:
        rep.notes.append("additivity on generator pairs only")
    q = g.vertices[0]
    firsts = classes if exhaustive_pairs else [chip(v, q) for v in g.vertices if v != q]
    for d1 in firsts:
        for d2 in classes:
            for t in trees:
                rep.checked += 1
                if ev(d1 + d2, t) != ev(d1, ev(d2, t)):
                    rep.violations.append(
                        {
                            "axiom": "additivity",
                            "classes": [d1.to_dict(), d2.to_dict()],
                            "tree": sorted(t),
                        }
                    )
    return rep


def verify_sink_invariance(rg: RibbonGraph) -> Report:
    """Compare routing outcomes across every sink, class and tree.

    For each sink the class table is built by composing verified single-chip
    routings; the tables must agree entrywise.  Plane inputs must come out
    clean; the two-vertex triple edge with equal rotations must not.
    """
    g = rg.graph
    action = TorsorAction(rg, require_plane=False)
    classes = sandpile.enumerate_classes(g)
    trees = g.spanning_trees()
    rep = Report()
    per_sink = {}
    for s in g.vertices:
        tables = {}
        for d in classes:
            drep = sandpile.move_to_sink(g, d, s)
            perm = {t: t for t in trees}
            for v in g.vertices:
                if v == s:
                    continue
                for _ in range(drep[v]):
                    tab = action.chip_table(v, s)
                    perm = {t: tab[perm[t]] for t in trees}
            tables[d] = perm
        per_sink[s] = tables
    base = g.vertices[0]
    for s in g.vertices[1:]:
        for d in classes:
            for t in trees:
                rep.checked += 1
                if per_sink[base][d][t] != per_sink[s][d][t]:
                    rep.violations.append(
                        {
                            "sinks": [base, s],
                            "class": d.to_dict(),
                            "tree": sorted(t),
                            "outputs": [
                                sorted(per_sink[base][d][t]),
                                sorted(per_sink[s][d][t]),
                            ],
                        }
                    )
    return rep


def verify_consistency(
    rg: RibbonGraph,
    variant_tag: str = "r",
    relax_adjacency: bool = False,
) -> Report:
    """Check the three compatibility conditions on one plane ribbon graph.

    For every edge f, both orientations (c, s) of its endpoints, and every
    spanning tree T with T' the acted tree:

    1. contracting any shared tree edge e (not joining c and s) commutes;
    2. deleting any shared non-edge e commutes;
    3. any edge separated from f by a cut vertex keeps its membership.

    ``relax_adjacency`` additionally acts by [c - s] for non-adjacent pairs,
    the deliberately broken extension used to exhibit a condition-1 failure.
    """
    action = TorsorAction(rg, variant_tag)
    g = rg.graph
    rep = Report()
    trees = g.spanning_trees()
    if relax_adjacency:
        pairs = [(c, s) for c in g.vertices for s in g.vertices if c != s]
    else:
        pairs = []
        for f in g.edges:
            u, w = g.ends(f)
            pairs.append((u, w))
            pairs.append((w, u))
        pairs = sorted(set(pairs))

    minor_actions = {}

    def minor_action(key, build):
        if key not in minor_actions:
            minor_actions[key] = TorsorAction(build(), variant_tag)
        return minor_actions[key]

    cuts = g.cut_vertices()
    separated = {}  # anchor edge -> edges cut off from it
    for f0 in g.edges:
        separated[f0] = frozenset(
            e
            for e in g.edges
            if e != f0 and any(g.separates(x, e, f0) for x in cuts)
        )

    for c, s in pairs:
        d = chip(c, s)
        fs = [f for f in g.edges if set(g.ends(f)) == {c, s}]
        for t in trees:
            t2 = action.act(d, t)
            for e in g.edges:
                if set(g.ends(e)) == {c, s}:
                    continue
                if e in t and e in t2:
                    sub = minor_action(("contract", e), lambda e=e: rg.contract(e))
                    vmap = g.contraction_vertex_map(e)
                    got = sub.act(chip(vmap[c], vmap[s]), t - {e})
                    rep.checked += 1
                    if got != t2 - {e}:
                        rep.violations.append(
                            {
                                "condition": 1,
                                "f": [c, s],
                                "tree": sorted(t),
                                "edge": e,
                                "expected": sorted(t2 - {e}),
                                "actual": sorted(got),
                            }
                        )
            for e in g.edges:
                if e not in t and e not in t2:
                    sub = minor_action(("delete", e), lambda e=e: rg.delete(e))
                    got = sub.act(d, t)
                    rep.checked += 1
                    if got != t2:
                        rep.violations.append(
                            {
                                "condition": 2,
                                "f": [c, s],
                                "tree": sorted(t),
                                "edge": e,
                                "expected": sorted(t2),
                                "actual": sorted(got),
                            }
                        )
            if fs:
                for e in separated[fs[0]]:
                    rep.checked += 1
                    if (e in t) != (e in t2):
                        rep.violations.append(
                            {
                                "condition": 3,
                                "f": [c, s],
                                "tree": sorted(t),
                                "edge": e,
                            }
                        )
    return rep


def action_tables_equal(a: dict, b: dict) -> bool:
    return a == b


def distinct_variant_count(rg: RibbonGraph) -> int:
    """How many of the four companion actions differ as full action tables."""
    classes = sandpile.enumerate_classes(rg.graph)
    trees = rg.graph.spanning_trees()
    tables = []
    for tag in VARIANTS:
        tables.append(TorsorAction(rg, tag).table(classes, trees))
    distinct = []
    for t in tables:
        if not any(action_tables_equal(t, u) for u in distinct):
            distinct.append(t)
    return len(distinct)
