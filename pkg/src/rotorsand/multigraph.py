"""Loopless undirected multigraphs with deterministic identities and minors.

Vertices and edges carry string ids.  Parallel edges are distinct first-class
edges, never multiplicities.  All operations are pure: they return new graphs
and never mutate.
"""

from __future__ import annotations

import json
from itertools import combinations


class Multigraph:
    """An undirected multigraph without loops.

    ``edges`` maps each edge id to its unordered endpoint pair, stored as a
    sorted tuple.  Equality and hashing are by value, so graphs behave as
    immutable data.
    """

    __slots__ = ("_vertices", "_ends", "_edge_ids", "_incident", "_hash")

    def __init__(self, vertices, edges):
        vs = tuple(sorted(vertices))
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate vertex ids")
        ends = {}
        for eid, pair in dict(edges).items():
            u, v = pair
            if u == v:
                raise ValueError(f"loop edge {eid!r} at {u!r} not allowed")
            if u not in vs or v not in vs:
                raise ValueError(f"edge {eid!r} has unknown endpoint")
            ends[eid] = (u, v) if u <= v else (v, u)
        self._vertices = vs
        self._edge_ids = tuple(sorted(ends))
        self._ends = ends
        incident = {v: [] for v in vs}
        for eid in self._edge_ids:
            u, v = ends[eid]
            incident[u].append(eid)
            incident[v].append(eid)
        self._incident = {v: tuple(es) for v, es in incident.items()}
        self._hash = hash((self._vertices, tuple((e, ends[e]) for e in self._edge_ids)))

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[str, ...]:
        return self._edge_ids

    def ends(self, e: str) -> tuple[str, str]:
        try:
            return self._ends[e]
        except KeyError:
            raise KeyError(f"unknown edge id {e!r}") from None

    def other(self, e: str, v: str) -> str:
        u, w = self.ends(e)
        if v == u:
            return w
        if v == w:
            return u
        raise ValueError(f"vertex {v!r} is not an endpoint of {e!r}")

    def incident(self, v: str) -> tuple[str, ...]:
        try:
            return self._incident[v]
        except KeyError:
            raise KeyError(f"unknown vertex id {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def edge_count(self, u: str, v: str) -> int:
        pair = (u, v) if u <= v else (v, u)
        return sum(1 for e in self._incident.get(u, ()) if self._ends[e] == pair)

    def parallel_class(self, e: str) -> tuple[str, ...]:
        """All edges sharing both endpoints with e (including e itself)."""
        pair = self.ends(e)
        return tuple(f for f in self._edge_ids if self._ends[f] == pair)

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self._vertices == other._vertices
            and self._ends == other._ends
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Multigraph({len(self._vertices)} vertices, {len(self._edge_ids)} edges)"

    # -- connectivity ------------------------------------------------------

    def _components(self, skip_vertex=None):
        seen = set()
        comps = []
        for start in self._vertices:
            if start == skip_vertex or start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for e in self._incident[x]:
                    y = self.other(e, x)
                    if y != skip_vertex and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self._components()) <= 1

    def cut_vertices(self) -> frozenset[str]:
        """Vertices whose removal disconnects the remaining graph."""
        if not self.is_connected():
            raise ValueError("graph must be connected")
        cuts = set()
        for v in self._vertices:
            if len(self._vertices) > 2 and len(self._components(skip_vertex=v)) > 1:
                cuts.add(v)
        return frozenset(cuts)

    def is_two_connected(self) -> bool:
        """Connected with no cut vertices (so E_k and the single edge count)."""
        return self.is_connected() and not self.cut_vertices()

    def separates(self, x: str, a: str, b: str) -> bool:
        """Does every path between edges a and b pass through vertex x?

        Decided on components of the graph with x removed: true iff no
        component touches a non-x endpoint of both a and b.
        """
        if x not in self._vertices:
            raise KeyError(f"unknown vertex id {x!r}")
        ea = set(self.ends(a)) - {x}
        eb = set(self.ends(b)) - {x}
        for comp in self._components(skip_vertex=x):
            if comp & ea and comp & eb:
                return False
        return True

    # -- minors ------------------------------------------------------------

    def delete(self, e: str) -> "Multigraph":
        """The graph without edge e.  May be disconnected; caller checks."""
        self.ends(e)
        return Multigraph(self._vertices, {f: p for f, p in self._ends.items() if f != e})

    def contract(self, e: str) -> "Multigraph":
        """Contract e, merging its endpoints into the smaller id.

        Edges parallel to e would become loops and are removed with it.
        """
        x, y = self.ends(e)  # x < y; merged vertex keeps id x
        pair = (x, y)
        new_edges = {}
        for f, (u, v) in self._ends.items():
            if (u, v) == pair:
                continue
            u2 = x if u == y else u
            v2 = x if v == y else v
            new_edges[f] = (u2, v2)
        return Multigraph((v for v in self._vertices if v != y), new_edges)

    def contraction_vertex_map(self, e: str) -> dict[str, str]:
        x, y = self.ends(e)
        return {v: (x if v == y else v) for v in self._vertices}

    # -- spanning trees ------------------------------------------------------

    def spanning_trees(self) -> list[frozenset[str]]:
        """All spanning trees, lexicographic on their sorted edge-id tuples.

        Plain backtracking over edges in id order; exhaustive and
        duplicate-free at the small scales this package targets.
        """
        if not self.is_connected():
            raise ValueError("graph must be connected")
        n = len(self._vertices)
        if n == 1:
            return [frozenset()]
        m = len(self._edge_ids)
        need = n - 1
        vindex = {v: i for i, v in enumerate(self._vertices)}
        epairs = [
            (vindex[self._ends[e][0]], vindex[self._ends[e][1]]) for e in self._edge_ids
        ]
        out = []

        def find(parent, i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def rec(idx, chosen, parent):
            if len(chosen) == need:
                out.append(frozenset(self._edge_ids[i] for i in chosen))
                return
            if m - idx < need - len(chosen):
                return
            u, v = epairs[idx]
            ru, rv = find(parent, u), find(parent, v)
            if ru != rv:
                p2 = list(parent)
                p2[ru] = rv
                chosen.append(idx)
                rec(idx + 1, chosen, p2)
                chosen.pop()
            rec(idx + 1, chosen, parent)

        rec(0, [], list(range(n)))
        return out

    def is_spanning_tree(self, edge_set) -> bool:
        edge_set = frozenset(edge_set)
        n = len(self._vertices)
        if len(edge_set) != n - 1:
            return False
        ix = {v: i for i, v in enumerate(self._vertices)}
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e in edge_set:
            pair = self._ends.get(e)
            if pair is None:
                return False
            a, b = find(ix[pair[0]]), find(ix[pair[1]])
            if a == b:
                return False
            parent[a] = b
        return True

    def tree_path(self, tree, start: str, goal: str) -> list[str]:
        """Edge sequence of the unique tree path from start to goal."""
        tree = frozenset(tree)
        prev = {start: None}
        stack = [start]
        while stack:
            x = stack.pop()
            if x == goal:
                break
            for e in self._incident[x]:
                if e in tree:
                    y = self.other(e, x)
                    if y not in prev:
                        prev[y] = (e, x)
                        stack.append(y)
        if goal not in prev:
            raise ValueError("goal not reached along tree")
        path = []
        x = goal
        while prev[x] is not None:
            e, p = prev[x]
            path.append(e)
            x = p
        path.reverse()
        return path

    # -- serialization -------------------------------------------------------

    def to_obj(self) -> dict:
        return {
            "vertices": list(self._vertices),
            "edges": [
                {"id": e, "ends": list(self._ends[e])} for e in self._edge_ids
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj) -> "Multigraph":
        try:
            return cls(obj["vertices"], {e["id"]: tuple(e["ends"]) for e in obj["edges"]})
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed graph object: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Multigraph":
        return cls.from_obj(json.loads(text))


def complete_graph(n: int) -> Multigraph:
    vs = [f"v{i}" for i in range(n)]
    edges = {}
    for i, j in combinations(range(n), 2):
        edges[f"e{i}_{j}"] = (vs[i], vs[j])
    return Multigraph(vs, edges)


def cycle_graph(k: int) -> Multigraph:
    """C_k; for k <= 2 this is the single or double edge on two vertices."""
    if k < 1:
        raise ValueError("need at least one edge")
    if k == 1:
        return Multigraph(["v0", "v1"], {"e0": ("v0", "v1")})
    if k == 2:
        return Multigraph(["v0", "v1"], {"e0": ("v0", "v1"), "e1": ("v0", "v1")})
    vs = [f"v{i}" for i in range(k)]
    return Multigraph(vs, {f"e{i}": (vs[i], vs[(i + 1) % k]) for i in range(k)})


def banana_graph(k: int) -> Multigraph:
    """E_k: two vertices joined by k parallel edges."""
    if k < 1:
        raise ValueError("need at least one edge")
    return Multigraph(["x", "y"], {f"e{i}": ("x", "y") for i in range(k)})
