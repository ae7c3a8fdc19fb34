"""Divisors, chip-firing, canonical class representatives, group structure.

A divisor is an integer chip vector on the vertices; degree-zero divisors
modulo the integer image of the Laplacian form the sandpile group.  Classes
are keyed by their unique reduced representative relative to a sink, found
by the burning-and-firing loop.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InvariantViolation
from .intlinalg import ColumnLattice, det, smith_diagonal
from .multigraph import Multigraph


class Divisor:
    """An immutable vertex -> int chip map; missing vertices hold 0 chips."""

    __slots__ = ("_chips", "_hash")

    def __init__(self, chips=None):
        items = tuple(sorted((v, int(n)) for v, n in dict(chips or {}).items() if n != 0))
        self._chips = items
        self._hash = hash(items)

    def __getitem__(self, v) -> int:
        for w, n in self._chips:
            if w == v:
                return n
        return 0

    def items(self):
        return self._chips

    def support(self):
        return tuple(v for v, _ in self._chips)

    def degree(self) -> int:
        return sum(n for _, n in self._chips)

    def to_dict(self) -> dict:
        return dict(self._chips)

    def __add__(self, other):
        out = dict(self._chips)
        for v, n in other.items():
            out[v] = out.get(v, 0) + n
        return Divisor(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Divisor({v: -n for v, n in self._chips})

    def __mul__(self, k: int):
        return Divisor({v: k * n for v, n in self._chips})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._chips == other._chips

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{v}: {n}" for v, n in self._chips)
        return "Divisor({" + body + "})"


def chip(c, s=None) -> Divisor:
    """The divisor c - s (or just c when no sink is given)."""
    if s is None:
        return Divisor({c: 1})
    if c == s:
        return Divisor({})
    return Divisor({c: 1, s: -1})


@dataclass(frozen=True)
class GroupStructure:
    invariant_factors: tuple[int, ...]  # each > 1, d1 | d2 | ...
    order: int


def laplacian(g: Multigraph) -> list[list[int]]:
    """Laplacian matrix in the order of g.vertices."""
    vs = g.vertices
    ix = {v: i for i, v in enumerate(vs)}
    m = [[0] * len(vs) for _ in vs]
    for v in vs:
        m[ix[v]][ix[v]] = g.degree(v)
    for e in g.edges:
        u, w = g.ends(e)
        m[ix[u]][ix[w]] -= 1
        m[ix[w]][ix[u]] -= 1
    return m


def reduced_laplacian(g: Multigraph, q=None) -> list[list[int]]:
    vs = g.vertices
    if q is None:
        q = vs[0]
    keep = [i for i, v in enumerate(vs) if v != q]
    full = laplacian(g)
    return [[full[i][j] for j in keep] for i in keep]


def fire(g: Multigraph, d: Divisor, v: str) -> Divisor:
    """Fire v: it loses deg(v) chips, each neighbor gains one per shared edge."""
    out = d.to_dict()
    out[v] = out.get(v, 0) - g.degree(v)
    for e in g.incident(v):
        w = g.other(e, v)
        out[w] = out.get(w, 0) + 1
    return Divisor(out)


def fire_set(g: Multigraph, d: Divisor, vs) -> Divisor:
    """Fire every vertex of vs once (only boundary edges move chips)."""
    vs = set(vs)
    out = d.to_dict()
    for v in vs:
        for e in g.incident(v):
            w = g.other(e, v)
            if w not in vs:
                out[v] = out.get(v, 0) - 1
                out[w] = out.get(w, 0) + 1
    return Divisor(out)


def stabilize(g: Multigraph, d: Divisor, s: str, step_limit: int | None = None) -> Divisor:
    """Fire non-sink vertices holding at least their degree until none do.

    The fixed point is independent of the firing order; the step limit only
    guards against bugs, since termination is guaranteed for inputs that are
    nonnegative off the sink with bounded total chips.
    """
    if s not in g.vertices:
        raise KeyError(f"unknown vertex id {s!r}")
    cur = {v: d[v] for v in g.vertices}
    if any(cur[v] < 0 for v in g.vertices if v != s):
        raise ValueError("stabilize needs a divisor nonnegative off the sink")
    if step_limit is None:
        total = sum(n for n in cur.values() if n > 0) + 1
        step_limit = 4 * len(g.vertices) ** 2 * len(g.edges) * total + 64
    steps = 0
    active = [v for v in g.vertices if v != s and cur[v] >= g.degree(v)]
    while active:
        v = active.pop()
        deg = g.degree(v)
        if cur[v] < deg:
            continue
        cur[v] -= deg
        for e in g.incident(v):
            w = g.other(e, v)
            cur[w] += 1
            if w != s and cur[w] >= g.degree(w):
                active.append(w)
        if v != s and cur[v] >= deg:
            active.append(v)
        steps += 1
        if steps > step_limit:
            raise InvariantViolation("stabilization exceeded its step bound")
    return Divisor(cur)


@lru_cache(maxsize=16384)
def _sink_boost(g: Multigraph, s: str) -> Divisor:
    """A degree-0 divisor equivalent to zero and strictly positive off s.

    Stabilizing the configuration with deg(v) chips on each non-sink vertex
    leaves a positive deficit everywhere off s.  Cached per (graph, sink);
    both are immutable values.
    """
    if not g.is_connected():
        raise ValueError("graph must be connected")
    delta = Divisor(
        {
            v: (g.degree(v) if v != s else -sum(g.degree(w) for w in g.vertices if w != s))
            for v in g.vertices
        }
    )
    boost = delta - stabilize(g, delta, s)
    if any(boost[v] <= 0 for v in g.vertices if v != s):
        raise InvariantViolation("stabilization deficit not positive off sink")
    return boost


def move_to_sink(g: Multigraph, d: Divisor, s: str) -> Divisor:
    """An equivalent divisor with all debt on s (nonnegative elsewhere)."""
    if d.degree() != 0:
        raise ValueError("move_to_sink expects a degree-0 divisor")
    m = max((-d[v] for v in g.vertices if v != s), default=0)
    if m <= 0:
        return d
    out = d + m * _sink_boost(g, s)
    assert all(out[v] >= 0 for v in g.vertices if v != s)
    return out


def reduce(g: Multigraph, d: Divisor, q: str) -> Divisor:
    """The unique q-reduced divisor equivalent to d (any degree).

    First lift all non-q vertices out of debt, then repeatedly burn outward
    from q and fire whatever survives; once the fire consumes the whole
    graph, no nonempty set off q can fire without going negative.
    """
    m = max((-d[v] for v in g.vertices if v != q), default=0)
    cur = d + m * _sink_boost(g, q) if m > 0 else d
    spread = sum(abs(n) for _, n in cur.items()) + 1
    guard_limit = 64 + 16 * len(g.vertices) * len(g.edges) * spread
    guard = 0
    while True:
        unburnt = _unburnt_set(g, cur, q)
        if not unburnt:
            return cur
        cur = fire_set(g, cur, unburnt)
        guard += 1
        if guard > guard_limit:
            raise InvariantViolation("burning loop exceeded its step bound")


def _unburnt_set(g: Multigraph, d: Divisor, q: str):
    burnt = {q}
    frontier = True
    while frontier:
        frontier = False
        for v in g.vertices:
            if v in burnt:
                continue
            k = sum(1 for e in g.incident(v) if g.other(e, v) in burnt)
            if d[v] < k:
                burnt.add(v)
                frontier = True
    return [v for v in g.vertices if v not in burnt]


def is_reduced(g: Multigraph, d: Divisor, q: str) -> bool:
    if any(d[v] < 0 for v in g.vertices if v != q):
        return False
    return not _unburnt_set(g, d, q)


def canonical_class(g: Multigraph, d: Divisor) -> Divisor:
    """Class key: the reduced form relative to the smallest vertex id."""
    return reduce(g, d, g.vertices[0])


def same_class(g: Multigraph, d1: Divisor, d2: Divisor) -> bool:
    if d1.degree() != d2.degree():
        return False
    if d1.degree() != 0:
        return canonical_class(g, d1 - Divisor({g.vertices[0]: d1.degree()})) == canonical_class(
            g, d2 - Divisor({g.vertices[0]: d2.degree()})
        )
    return canonical_class(g, d1) == canonical_class(g, d2)


def laplacian_image_contains(g: Multigraph, d: Divisor) -> bool:
    """Membership of d in the integer span of the Laplacian columns.

    Independent of the burning machinery; used to cross-check same_class.
    """
    vs = g.vertices
    lap = laplacian(g)
    cols = [[lap[i][j] for i in range(len(vs))] for j in range(len(vs))]
    lattice = ColumnLattice(len(vs), cols)
    return lattice.contains([d[v] for v in vs])


def group_structure(g: Multigraph) -> GroupStructure:
    """Invariant factors of the sandpile group from the reduced Laplacian."""
    if not g.is_connected():
        raise ValueError("graph must be connected")
    if len(g.vertices) == 1:
        return GroupStructure((), 1)
    diag = smith_diagonal(reduced_laplacian(g))
    if any(x == 0 for x in diag):
        raise InvariantViolation("reduced Laplacian is singular on a connected graph")
    order = 1
    for x in diag:
        order *= x
    return GroupStructure(tuple(x for x in diag if x > 1), order)


def tree_count(g: Multigraph) -> int:
    """Number of spanning trees via the reduced Laplacian determinant."""
    if len(g.vertices) == 1:
        return 1
    return abs(det(reduced_laplacian(g)))


def enumerate_classes(g: Multigraph) -> list[Divisor]:
    """Canonical representatives of every sandpile class, in a fixed order.

    Breadth-first closure under adding the generators [v - q]; the size must
    match the determinant count, which is asserted.
    """
    q = g.vertices[0]
    zero = canonical_class(g, Divisor({}))
    seen = {zero}
    frontier = [zero]
    order = [zero]
    gens = [chip(v, q) for v in g.vertices if v != q]
    while frontier:
        nxt = []
        for d in frontier:
            for gen in gens:
                c = canonical_class(g, d + gen)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    order.append(c)
        frontier = nxt
    if len(order) != group_structure(g).order:
        raise InvariantViolation("class enumeration disagrees with the group order")
    return order
