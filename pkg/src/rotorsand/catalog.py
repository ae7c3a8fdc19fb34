"""Exhaustive generation of small connected multigraphs and ribbon structures.

Graphs are produced up to graph isomorphism by edge augmentation with
canonical-form deduplication; ribbon structures are produced up to ribbon
isomorphism.  Two symmetry normalizations keep the raw rotation product
tame: edges of a parallel class, and pendant edges to interchangeable leaf
twins, may be forced to appear in increasing id order at one designated
endpoint, because permuting them extends to a graph automorphism.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from .multigraph import Multigraph
from .ribbon import RibbonGraph


def _relabel_sorted(pairs):
    """Canonical Multigraph from endpoint index pairs: v0.., e0.. labels."""
    pairs = sorted(tuple(sorted(p)) for p in pairs)
    verts = sorted({x for p in pairs for x in p})
    vmap = {x: f"v{i}" for i, x in enumerate(verts)}
    return Multigraph(
        vmap.values(), {f"e{i}": (vmap[a], vmap[b]) for i, (a, b) in enumerate(pairs)}
    )


def graph_canonical_key(g: Multigraph):
    """Minimum edge-multiset encoding over degree-refined vertex bijections."""
    vs = g.vertices
    colors = {v: (g.degree(v),) for v in vs}
    for _ in range(len(vs)):
        nxt = {}
        for v in vs:
            around = sorted(colors[g.other(e, v)] for e in g.incident(v))
            nxt[v] = (colors[v], tuple(around))
        if len(set(nxt.values())) == len(set(colors.values())):
            colors = nxt
            break
        colors = nxt
    classes = {}
    for v in vs:
        classes.setdefault(colors[v], []).append(v)
    blocks = [classes[c] for c in sorted(classes)]
    best = None
    for perm_combo in product(*[permutations(b) for b in blocks]):
        ix = {}
        pos = 0
        for block, perm in zip(blocks, perm_combo):
            for v in perm:
                ix[v] = pos
                pos += 1
        enc = sorted(tuple(sorted((ix[a], ix[b]))) for a, b in (g.ends(e) for e in g.edges))
        enc = tuple(enc)
        if best is None or enc < best:
            best = enc
    return (len(vs), best)


def connected_multigraphs(max_edges: int, min_edges: int = 1) -> tuple[Multigraph, ...]:
    """All connected loopless multigraphs with min..max edges, up to isomorphism.

    Augmentation search: every (m+1)-edge connected multigraph arises from an
    m-edge one by adding an edge between existing vertices or hanging a new
    leaf, so level-by-level growth with canonical deduplication is exhaustive.
    """
    return tuple(
        g for m in range(min_edges, max_edges + 1) for g in _multigraph_level(m)
    )


@lru_cache(maxsize=None)
def _multigraph_level(m: int) -> tuple[Multigraph, ...]:
    if m < 1:
        return ()
    if m == 1:
        return (_relabel_sorted([(0, 1)]),)
    nxt = {}
    for g in _multigraph_level(m - 1):
        n = len(g.vertices)
        pairs = [
            tuple(sorted((g.vertices.index(a), g.vertices.index(b))))
            for a, b in (g.ends(e) for e in g.edges)
        ]
        for i in range(n):
            for j in range(i + 1, n):
                cand = _relabel_sorted(pairs + [(i, j)])
                nxt.setdefault(graph_canonical_key(cand), cand)
            cand = _relabel_sorted(pairs + [(i, n)])
            nxt.setdefault(graph_canonical_key(cand), cand)
    return tuple(nxt[k] for k in sorted(nxt))


def _parallel_classes(g: Multigraph):
    by_pair = {}
    for e in g.edges:
        by_pair.setdefault(g.ends(e), []).append(e)
    return [(pair, es) for pair, es in by_pair.items() if len(es) >= 2]


def _leaf_twin_classes(g: Multigraph):
    """Pendant edges hanging interchangeable degree-1 twins off one center."""
    by_center = {}
    for v in g.vertices:
        if g.degree(v) == 1:
            e = g.incident(v)[0]
            center = g.other(e, v)
            if g.degree(center) > 1 or center > v:
                by_center.setdefault(center, []).append(e)
    return [(c, sorted(es)) for c, es in by_center.items() if len(es) >= 2]


def _is_increasing_subsequence(seq, members):
    sub = [e for e in seq if e in members]
    return sub == sorted(sub)


@lru_cache(maxsize=4096)
def rotation_systems(g: Multigraph, plane_only: bool = False) -> tuple[RibbonGraph, ...]:
    """All ribbon structures on g up to ribbon isomorphism, deterministic order.

    Anchored cyclic orders per vertex, symmetry-normalized per the module
    docstring, then deduplicated by the dart canonical form.
    """
    constraints = {v: [] for v in g.vertices}
    for (u, w), es in _parallel_classes(g):
        constraints[u].append(frozenset(es))
    for center, es in _leaf_twin_classes(g):
        constraints[center].append(frozenset(es))

    per_vertex = []
    for v in g.vertices:
        inc = sorted(g.incident(v))
        if not inc:
            raise ValueError("isolated vertex has no rotation")
        head, rest = inc[0], inc[1:]
        orders = []
        for perm in permutations(rest):
            seq = (head,) + perm
            if all(_is_increasing_subsequence(seq, cl) for cl in constraints[v]):
                orders.append(seq)
        per_vertex.append(orders)

    found = {}
    for combo in product(*per_vertex):
        rg = RibbonGraph(g, dict(zip(g.vertices, combo)))
        if plane_only and not rg.is_plane():
            continue
        found.setdefault(rg.canonical_form(), rg)
    return tuple(found[k] for k in sorted(found))


def ribbon_graphs(max_edges: int, min_edges: int = 1, plane_only: bool = False):
    """Every ribbon graph in the size range, up to ribbon isomorphism."""
    out = []
    for g in connected_multigraphs(max_edges, min_edges):
        out.extend(rotation_systems(g, plane_only=plane_only))
    return out


def plane_graphs(max_edges: int, min_edges: int = 1, two_connected: bool = False):
    """Every plane ribbon graph in the size range, up to ribbon isomorphism."""
    out = []
    for g in connected_multigraphs(max_edges, min_edges):
        if two_connected and not g.is_two_connected():
            continue
        out.extend(rotation_systems(g, plane_only=True))
    return out
