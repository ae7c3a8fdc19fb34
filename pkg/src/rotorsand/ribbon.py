"""Ribbon graphs: a multigraph plus a counterclockwise edge order at each vertex.

The rotation at a vertex is stored as a tuple of incident edge ids,
canonicalized so the smallest id comes first; two structures are equal iff
the cyclic orders agree.  Faces, genus, minors, reversal, isomorphism and the
left/right classification of embedded directed cycles all live here.

A dart is a pair ``(edge, vertex)`` read as "arrival at vertex along edge";
face tracing leaves along the next edge counterclockwise.  The traced walk
keeps its face on the right, so the face to the left of a traversal is the
one holding the traversal's tail dart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

from .errors import InvariantViolation
from .multigraph import Multigraph


def canonical_rotation(seq) -> tuple[str, ...]:
    """Rotate a cyclic sequence so its smallest element comes first."""
    seq = tuple(seq)
    if not seq:
        return seq
    k = seq.index(min(seq))
    return seq[k:] + seq[:k]


@dataclass(frozen=True)
class RibbonIsomorphism:
    """A pair of bijections witnessing isomorphism of two ribbon graphs."""

    vertex_map: dict
    edge_map: dict

    def __hash__(self):
        return hash(
            (tuple(sorted(self.vertex_map.items())), tuple(sorted(self.edge_map.items())))
        )


@dataclass(frozen=True)
class SideClassification:
    left_edges: frozenset
    right_edges: frozenset
    left_vertices: frozenset
    right_vertices: frozenset


class RibbonGraph:
    """A connected multigraph with a rotation system."""

    __slots__ = ("graph", "rotation", "_hash", "_next", "_faces")

    def __init__(self, graph: Multigraph, rotation):
        rot = {}
        for v in graph.vertices:
            try:
                seq = tuple(rotation[v])
            except KeyError:
                raise ValueError(f"rotation missing vertex {v!r}") from None
            if sorted(seq) != sorted(graph.incident(v)):
                raise ValueError(f"rotation at {v!r} is not a cyclic order of its edges")
            rot[v] = canonical_rotation(seq)
        if len(rot) != len(graph.vertices):
            raise ValueError("rotation has extra vertices")
        self.graph = graph
        self.rotation = rot
        self._hash = hash((graph, tuple(sorted(rot.items()))))
        nxt = {}
        for v, seq in rot.items():
            for i, e in enumerate(seq):
                nxt[(v, e)] = seq[(i + 1) % len(seq)]
        self._next = nxt
        self._faces = None

    def __eq__(self, other):
        return (
            isinstance(other, RibbonGraph)
            and self.graph == other.graph
            and self.rotation == other.rotation
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        g = self.graph
        return f"RibbonGraph({len(g.vertices)} vertices, {len(g.edges)} edges, genus {self.euler_genus()})"

    def next_edge(self, x: str, e: str) -> str:
        """The edge after e in the counterclockwise order at x."""
        try:
            return self._next[(x, e)]
        except KeyError:
            raise ValueError(f"edge {e!r} is not incident to {x!r}") from None

    def prev_edge(self, x: str, e: str) -> str:
        seq = self.rotation[x]
        i = seq.index(e)
        return seq[i - 1]

    # -- faces and genus -----------------------------------------------------

    def darts(self):
        return [(e, v) for e in self.graph.edges for v in self.graph.ends(e)]

    def face_next(self, dart):
        """Next arrival dart along the face to the left of the walk."""
        e, w = dart
        f = self.next_edge(w, e)
        return (f, self.graph.other(f, w))

    def faces(self) -> list[tuple]:
        """Face boundary walks as tuples of darts; every dart appears once."""
        if self._faces is not None:
            return self._faces
        if not self.graph.is_connected():
            raise ValueError("faces need a connected graph")
        remaining = set(self.darts())
        out = []
        while remaining:
            start = min(remaining)
            walk = [start]
            remaining.discard(start)
            d = self.face_next(start)
            while d != start:
                walk.append(d)
                remaining.discard(d)
                d = self.face_next(d)
            out.append(tuple(walk))
        out.sort()
        self._faces = out
        return out

    def euler_genus(self) -> int:
        g = self.graph
        if not g.edges:
            # the edgeless sphere keeps one face that no dart orbit records
            if len(g.vertices) != 1:
                raise ValueError("genus needs a connected graph")
            return 0
        two_g = 2 - len(g.vertices) + len(g.edges) - len(self.faces())
        if two_g < 0 or two_g % 2:
            raise InvariantViolation(f"impossible Euler count {two_g}")
        return two_g // 2

    def is_plane(self) -> bool:
        return self.euler_genus() == 0

    # -- derived structures ----------------------------------------------------

    def reverse(self) -> "RibbonGraph":
        """Reverse the cyclic order around every vertex (mirror embedding)."""
        return RibbonGraph(
            self.graph, {v: tuple(reversed(seq)) for v, seq in self.rotation.items()}
        )

    def delete(self, e: str) -> "RibbonGraph":
        g2 = self.graph.delete(e)
        rot = {v: tuple(x for x in seq if x != e) for v, seq in self.rotation.items()}
        return RibbonGraph(g2, rot)

    def contract(self, e: str) -> "RibbonGraph":
        """Contract e; parallels of e leave the structure as deleted loops.

        With parallels gone, write the order at x as (e, e_1..e_p) and at y
        as (e, ee_1..ee_l); the merged vertex gets (e_1..e_p, ee_1..ee_l).
        """
        x, y = self.graph.ends(e)
        parallels = set(self.graph.parallel_class(e))
        g2 = self.graph.contract(e)

        def tail(v):
            seq = [f for f in self.rotation[v] if f not in parallels or f == e]
            k = seq.index(e)
            seq = seq[k:] + seq[:k]
            return seq[1:]

        merged = tuple(tail(x) + tail(y))
        rot = {}
        for v in g2.vertices:
            if v == x:
                rot[v] = merged
            else:
                rot[v] = tuple(f for f in self.rotation[v] if f not in parallels)
        return RibbonGraph(g2, rot)

    # -- isomorphism ---------------------------------------------------------

    def isomorphisms(self, other: "RibbonGraph"):
        """Yield every ribbon isomorphism onto other (dart-anchored search)."""
        ga, gb = self.graph, other.graph
        if len(ga.vertices) != len(gb.vertices) or len(ga.edges) != len(gb.edges):
            return
        if not ga.edges:
            for vperm in permutations(gb.vertices):
                yield RibbonIsomorphism(dict(zip(ga.vertices, vperm)), {})
            return
        e0 = ga.edges[0]
        v0 = ga.ends(e0)[0]
        seen = set()
        for eb in gb.edges:
            for vb in gb.ends(eb):
                iso = self._match_from(other, (v0, e0), (vb, eb))
                if iso is not None and iso not in seen:
                    seen.add(iso)
                    yield iso

    def _match_from(self, other, anchor_a, anchor_b):
        ga, gb = self.graph, other.graph
        vmap = {anchor_a[0]: anchor_b[0]}
        emap = {anchor_a[1]: anchor_b[1]}
        stack = [anchor_a]
        done = set()
        while stack:
            v, e = stack.pop()
            if (v, e) in done:
                continue
            done.add((v, e))
            if len(self.rotation[v]) != len(other.rotation[vmap[v]]):
                return None
            # walk the rotation at v in lockstep
            ea, eb = e, emap[e]
            for _ in range(len(self.rotation[v])):
                na, nb = self.next_edge(v, ea), other.next_edge(vmap[v], eb)
                if na in emap:
                    if emap[na] != nb:
                        return None
                else:
                    emap[na] = nb
                wa, wb = ga.other(na, v), gb.other(nb, vmap[v])
                if wa in vmap:
                    if vmap[wa] != wb:
                        return None
                else:
                    vmap[wa] = wb
                stack.append((wa, na))
                ea, eb = na, nb
        if len(vmap) != len(ga.vertices) or len(emap) != len(ga.edges):
            return None
        if len(set(vmap.values())) != len(vmap) or len(set(emap.values())) != len(emap):
            return None
        iso = RibbonIsomorphism(vmap, emap)
        return iso if is_ribbon_isomorphism(self, other, iso) else None

    def find_isomorphism(self, other: "RibbonGraph"):
        """Some ribbon isomorphism onto other, or None."""
        return next(self.isomorphisms(other), None)

    def canonical_form(self) -> tuple:
        """A ribbon-isomorphism invariant that separates non-isomorphic maps.

        Minimum over anchor darts of a breadth-first relabeling of the
        (rotation, edge-involution) permutation pair.
        """
        g = self.graph
        edge_ix = {e: i for i, e in enumerate(g.edges)}
        nd = 2 * len(g.edges)
        sigma = [0] * nd
        alpha = [0] * nd

        def dart_id(e, v):
            lo, hi = g.ends(e)
            return 2 * edge_ix[e] + (0 if v == lo else 1)

        for e in g.edges:
            lo, hi = g.ends(e)
            alpha[dart_id(e, lo)] = dart_id(e, hi)
            alpha[dart_id(e, hi)] = dart_id(e, lo)
        for v, seq in self.rotation.items():
            for i, e in enumerate(seq):
                sigma[dart_id(e, v)] = dart_id(seq[(i + 1) % len(seq)], v)
        if nd == 0:
            return (len(g.vertices),)
        best = None
        for start in range(nd):
            labels = {start: 0}
            order = [start]
            for d in order:
                for nb in (sigma[d], alpha[d]):
                    if nb not in labels:
                        labels[nb] = len(labels)
                        order.append(nb)
            enc = tuple(x for d in order for x in (labels[sigma[d]], labels[alpha[d]]))
            if best is None or enc < best:
                best = enc
        return (len(g.vertices),) + best

    # -- serialization ---------------------------------------------------------

    def to_obj(self) -> dict:
        obj = self.graph.to_obj()
        obj["rotation"] = {v: list(seq) for v, seq in self.rotation.items()}
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj) -> "RibbonGraph":
        g = Multigraph.from_obj(obj)
        if "rotation" not in obj:
            raise ValueError("ribbon graph object needs a 'rotation' field")
        return cls(g, obj["rotation"])

    @classmethod
    def from_json(cls, text: str) -> "RibbonGraph":
        return cls.from_obj(json.loads(text))


def is_ribbon_isomorphism(a: RibbonGraph, b: RibbonGraph, iso: RibbonIsomorphism) -> bool:
    """Check the defining identities of a ribbon isomorphism edge by edge."""
    vmap, emap = iso.vertex_map, iso.edge_map
    ga, gb = a.graph, b.graph
    if sorted(vmap) != list(ga.vertices) or sorted(vmap.values()) != list(gb.vertices):
        return False
    if sorted(emap) != list(ga.edges) or sorted(emap.values()) != list(gb.edges):
        return False
    for e in ga.edges:
        x, y = ga.ends(e)
        if set(gb.ends(emap[e])) != {vmap[x], vmap[y]}:
            return False
        for v in (x, y):
            if emap[a.next_edge(v, e)] != b.next_edge(vmap[v], emap[e]):
                return False
    return True


def is_automorphism(rg: RibbonGraph, iso: RibbonIsomorphism) -> bool:
    return is_ribbon_isomorphism(rg, rg, iso)


def classify_sides(rg: RibbonGraph, cycle) -> SideClassification:
    """Split everything off an embedded directed cycle into left and right.

    ``cycle`` is a list of rotors (vertex, edge) forming a simple directed
    closed walk; the walk of two parallel edges is accepted, with the two
    sides read off the faces.  Left is the side a counterclockwise walk
    encloses: the face holding the tail dart of each cycle edge.
    """
    if not rg.is_plane():
        raise ValueError("side classification needs a plane ribbon graph")
    g = rg.graph
    cyc = list(cycle)
    if not cyc:
        raise ValueError("empty cycle")
    tails = [v for v, _ in cyc]
    if len(set(tails)) != len(tails):
        raise ValueError("cycle revisits a vertex")
    for i, (v, e) in enumerate(cyc):
        w = g.other(e, v)
        nv = cyc[(i + 1) % len(cyc)][0]
        if w != nv:
            raise ValueError("rotors do not chain into a directed cycle")
    cyc_edges = {e for _, e in cyc}
    if len(cyc_edges) != len(cyc):
        raise ValueError("cycle repeats an edge")

    faces = rg.faces()
    face_of = {}
    for i, walk in enumerate(faces):
        for d in walk:
            face_of[d] = i

    parent = list(range(len(faces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e in g.edges:
        if e not in cyc_edges:
            u, w = g.ends(e)
            a, b = find(face_of[(e, u)]), find(face_of[(e, w)])
            parent[a] = b

    # face tracing leaves along the next edge counterclockwise, which puts
    # the tail dart of a traversal on the face to its left
    left_roots = {find(face_of[(e, v)]) for v, e in cyc}
    right_roots = {find(face_of[(e, g.other(e, v))]) for v, e in cyc}
    if len(left_roots) != 1 or len(right_roots) != 1:
        raise InvariantViolation("cycle sides did not merge into two regions")
    left_root, right_root = left_roots.pop(), right_roots.pop()
    if left_root == right_root:
        raise InvariantViolation("left and right regions coincide")

    left_edges, right_edges = set(), set()
    for e in g.edges:
        if e in cyc_edges:
            continue
        u, _ = g.ends(e)
        root = find(face_of[(e, u)])
        (left_edges if root == left_root else right_edges).add(e)
    cyc_vertices = set(tails)
    left_vertices, right_vertices = set(), set()
    for v in g.vertices:
        if v in cyc_vertices:
            continue
        e = g.incident(v)[0]
        root = find(face_of[(e, v)])
        (left_vertices if root == left_root else right_vertices).add(v)
    return SideClassification(
        frozenset(left_edges),
        frozenset(right_edges),
        frozenset(left_vertices),
        frozenset(right_vertices),
    )
