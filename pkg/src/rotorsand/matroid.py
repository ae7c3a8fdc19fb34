"""Regular oriented matroids, acyclic signatures, and the BBY torsor.

A regular matroid is carried by a totally unimodular integer matrix whose
columns are labeled by the ground set.  Signed circuits are the minimal
support kernel vectors scaled to -1/0/+1, signed cocircuits the same in the
row space; bases are the maximal independent column sets.  The sandpile
group is Z^E modulo the direct sum of the circuit and cocircuit lattices,
with canonical coset representatives from a Hermite basis.

The BBY action tags each basis with the 0/1 vector of fundamental-circuit
and fundamental-cocircuit signs picked by a pair of acyclic signatures, and
acts by translation on the classes of those vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InvariantViolation
from .intlinalg import ColumnLattice, det, rank
from .lp import separating_functional
from .multigraph import Multigraph


def _is_totally_unimodular(matrix) -> bool:
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if any(abs(x) > 1 for row in matrix for x in row):
        return False
    for k in range(2, min(rows, cols) + 1):
        for ris in combinations(range(rows), k):
            for cis in combinations(range(cols), k):
                sub = [[matrix[i][j] for j in cis] for i in ris]
                if det(sub) not in (-1, 0, 1):
                    return False
    return True


class RegularMatroid:
    """A TU-represented oriented matroid over a labeled ground set."""

    def __init__(self, labels, matrix, check_unimodular: bool = True):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate ground set labels")
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        if any(len(row) != len(self.labels) for row in self.matrix):
            raise ValueError("matrix width must match the ground set")
        if check_unimodular and not _is_totally_unimodular(self.matrix):
            raise ValueError("representation matrix is not totally unimodular")
        self.rank = rank(self.matrix) if self.matrix else 0
        self._bases = None
        self._circuits = None
        self._cocircuits = None
        self._lattice = None
        self._index = {e: i for i, e in enumerate(self.labels)}

    @property
    def size(self) -> int:
        return len(self.labels)

    def column(self, e):
        j = self._index[e]
        return [row[j] for row in self.matrix]

    def _subrank(self, subset) -> int:
        js = [self._index[e] for e in subset]
        if not js:
            return 0
        return rank([[row[j] for j in js] for row in self.matrix])

    def bases(self) -> tuple[frozenset, ...]:
        if self._bases is None:
            out = []
            for combo in combinations(self.labels, self.rank):
                if self._subrank(combo) == self.rank:
                    out.append(frozenset(combo))
            self._bases = tuple(out)
        return self._bases

    def is_loop(self, e) -> bool:
        return all(x == 0 for x in self.column(e))

    def is_coloop(self, e) -> bool:
        return all(e in b for b in self.bases())

    # -- signed circuits and cocircuits ------------------------------------

    def circuits(self) -> tuple[tuple[int, ...], ...]:
        """One signed vector per circuit, sign chosen so the minimal-label
        nonzero entry is positive; the antipode is its negation."""
        if self._circuits is None:
            self._circuits = tuple(sorted(self._minimal_kernel_vectors()))
        return self._circuits

    def cocircuits(self) -> tuple[tuple[int, ...], ...]:
        if self._cocircuits is None:
            self._cocircuits = tuple(sorted(self._minimal_rowspace_vectors()))
        return self._cocircuits

    def _minimal_kernel_vectors(self):
        out = []
        for size in range(1, self.rank + 2):
            for combo in combinations(self.labels, size):
                if self._subrank(combo) != size - 1:
                    continue
                if any(self._subrank(sub) < len(sub) for sub in combinations(combo, size - 1)):
                    continue
                out.append(self._kernel_vector(combo))
        return out

    def _kernel_vector(self, support):
        js = [self._index[e] for e in support]
        cols = [[Fraction(row[j]) for row in self.matrix] for j in js]
        coeffs = [Fraction(1)]
        rest = _solve_exact(
            [[cols[i][r] for i in range(1, len(cols))] for r in range(len(self.matrix))],
            [-cols[0][r] for r in range(len(self.matrix))],
        )
        if rest is None:
            raise InvariantViolation("circuit support without a kernel vector")
        coeffs += rest
        vec = [Fraction(0)] * self.size
        for j, c in zip(js, coeffs):
            vec[j] = c
        return self._normalize_signs(vec, support)

    def _minimal_rowspace_vectors(self):
        # S is a cocircuit iff its complement is a hyperplane: removing S
        # drops the rank by one and S has no redundant element.
        out = []
        full = self.rank
        ground = set(self.labels)
        for size in range(1, self.size - full + 2):
            for combo in combinations(self.labels, size):
                rest = sorted(ground - set(combo))
                if self._subrank(rest) != full - 1:
                    continue
                if any(self._subrank(rest + [e]) != full for e in combo):
                    continue
                vec = self._rowspace_vector(combo)
                if vec is None:
                    raise InvariantViolation("hyperplane without a cocircuit vector")
                out.append(vec)
        return out

    def _rowspace_vector(self, support):
        """A row-space vector supported exactly on support, or None."""
        zero_js = [self._index[e] for e in self.labels if e not in support]
        nrows = len(self.matrix)
        # find y with y^T A zero outside the support
        system = [[Fraction(self.matrix[i][j]) for i in range(nrows)] for j in zero_js]
        ys = _nullspace(system, nrows)
        for y in ys:
            vec = [
                sum(y[i] * self.matrix[i][j] for i in range(nrows))
                for j in range(self.size)
            ]
            if all(vec[self._index[e]] != 0 for e in support):
                return self._normalize_signs(vec, support)
        return None

    def _normalize_signs(self, vec, support):
        nz = [x for x in vec if x != 0]
        scale = min(abs(x) for x in nz)
        vec = [x / scale for x in vec]
        if any(x.denominator != 1 or abs(x) > 1 for x in vec):
            raise InvariantViolation("signed vector not in -1/0/+1 after scaling")
        lead = next(x for x in vec if x != 0)
        if lead < 0:
            vec = [-x for x in vec]
        got = {self.labels[j] for j, x in enumerate(vec) if x != 0}
        if got != set(support):
            raise InvariantViolation("signed vector support mismatch")
        return tuple(int(x) for x in vec)

    # -- the sandpile group -------------------------------------------------

    def lattice(self) -> ColumnLattice:
        """Circuit lattice plus cocircuit lattice inside Z^E."""
        if self._lattice is None:
            cols = [list(v) for v in self.circuits()] + [
                list(v) for v in self.cocircuits()
            ]
            lat = ColumnLattice(self.size, cols)
            if lat.lattice_rank != self.size:
                raise InvariantViolation("circuit + cocircuit lattice is not full rank")
            self._lattice = lat
        return self._lattice

    def class_of(self, vector) -> tuple[int, ...]:
        """Canonical coset representative of an integer vector mod the lattice."""
        if len(vector) != self.size:
            raise ValueError("vector length must match the ground set")
        return self.lattice().reduce([int(x) for x in vector])

    def group_order(self) -> int:
        return self.lattice().index_in_ambient()

    def to_obj(self) -> dict:
        return {"labels": list(self.labels), "matrix": [list(r) for r in self.matrix]}

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True)

    @classmethod
    def from_obj(cls, obj) -> "RegularMatroid":
        if "graph" in obj:
            g = Multigraph.from_obj(obj["graph"])
            orientation = {e: tuple(p) for e, p in obj.get("orientation", {}).items()}
            if not orientation:
                orientation = default_orientation(g)
            return from_graph(g, orientation)
        return cls(obj["labels"], obj["matrix"])


def _solve_exact(rows, rhs):
    """Solve rows . x = rhs exactly; None if inconsistent; minimal vars."""
    n = len(rows[0]) if rows and rows[0] else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][-1] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][-1]
    return x


def _nullspace(rows, n):
    """Basis of {y in Q^n : rows . y = 0} where each row has length n."""
    aug = [[Fraction(x) for x in row] for row in rows]
    piv_cols = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv_cols]
    basis = []
    for fc in free:
        y = [Fraction(0)] * n
        y[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            y[pc] = -aug[i][fc]
        basis.append(y)
    return basis


def default_orientation(g: Multigraph) -> dict:
    return {e: g.ends(e) for e in g.edges}


def from_graph(g: Multigraph, orientation=None) -> RegularMatroid:
    """The cycle matroid of a connected graph via its signed incidence matrix."""
    if not g.is_connected():
        raise ValueError("graph must be connected")
    if orientation is None:
        orientation = default_orientation(g)
    vs = g.vertices
    vi = {v: i for i, v in enumerate(vs)}
    matrix = [[0] * len(g.edges) for _ in vs]
    for j, e in enumerate(g.edges):
        tail, head = orientation[e]
        if {tail, head} != set(g.ends(e)):
            raise ValueError(f"orientation of {e!r} does not match its endpoints")
        matrix[vi[tail]][j] -= 1
        matrix[vi[head]][j] += 1
    return RegularMatroid(g.edges, matrix, check_unimodular=False)


# -- signatures -----------------------------------------------------------


@dataclass(frozen=True)
class SignaturePair:
    """A chosen orientation for every circuit and every cocircuit."""

    circuits: tuple[tuple[int, ...], ...]
    cocircuits: tuple[tuple[int, ...], ...]

    def flipped(self, which: str) -> "SignaturePair":
        if which == "circuits":
            return SignaturePair(tuple(_neg(v) for v in self.circuits), self.cocircuits)
        if which == "cocircuits":
            return SignaturePair(self.circuits, tuple(_neg(v) for v in self.cocircuits))
        raise ValueError("which must be 'circuits' or 'cocircuits'")

    def to_obj(self) -> dict:
        return {
            "circuits": [list(v) for v in self.circuits],
            "cocircuits": [list(v) for v in self.cocircuits],
        }


def _neg(v):
    return tuple(-x for x in v)


def default_signatures(m: RegularMatroid) -> SignaturePair:
    """Minimal-label-positive rule: always an acyclic pair."""
    return SignaturePair(m.circuits(), m.cocircuits())


def check_acyclic(vectors) -> bool:
    """No nonnegative, nonzero combination of the vectors sums to zero."""
    ok, _cert = separating_functional([list(v) for v in vectors])
    return ok


def check_acyclic_pair(pair: SignaturePair) -> bool:
    return check_acyclic(pair.circuits) and check_acyclic(pair.cocircuits)


# -- the BBY action ---------------------------------------------------------


def fundamental_circuit(m: RegularMatroid, basis: frozenset, e) -> tuple[int, ...]:
    """The circuit inside basis + e, as the signature-free signed vector."""
    support = set(basis) | {e}
    for v in m.circuits():
        if {m.labels[j] for j, x in enumerate(v) if x != 0} <= support:
            return v
    raise InvariantViolation("no circuit inside basis plus element")


def fundamental_cocircuit(m: RegularMatroid, basis: frozenset, e) -> tuple[int, ...]:
    support = (set(m.labels) - set(basis)) | {e}
    for v in m.cocircuits():
        if {m.labels[j] for j, x in enumerate(v) if x != 0} <= support:
            return v
    raise InvariantViolation("no cocircuit inside complement plus element")


def _oriented(pair_vectors, base_vector):
    """The signature's choice between base_vector and its negation."""
    if base_vector in pair_vectors:
        return base_vector
    neg = _neg(base_vector)
    if neg in pair_vectors:
        return neg
    raise InvariantViolation("signature misses a circuit or cocircuit")


def bby_vector(m: RegularMatroid, pair: SignaturePair, basis: frozenset) -> tuple[int, ...]:
    """0/1 tag of a basis: fundamental signs under the chosen signatures."""
    if basis not in m.bases():
        raise ValueError("not a basis")
    out = []
    for j, e in enumerate(m.labels):
        if e in basis:
            chosen = _oriented(pair.cocircuits, fundamental_cocircuit(m, basis, e))
        else:
            chosen = _oriented(pair.circuits, fundamental_circuit(m, basis, e))
        out.append(1 if chosen[j] > 0 else 0)
    return tuple(out)


def bby_table(m: RegularMatroid, pair: SignaturePair) -> dict:
    """class representative -> basis; a bijection by the torsor theorem."""
    table = {}
    for b in m.bases():
        key = m.class_of(bby_vector(m, pair, b))
        if key in table:
            raise InvariantViolation("two bases share a class")
        table[key] = b
    if len(table) != m.group_order():
        raise InvariantViolation("basis tags do not exhaust the group")
    return table


def bby_act(m: RegularMatroid, pair: SignaturePair, vector, basis: frozenset) -> frozenset:
    """Translate the basis tag by the vector and return the tagged basis."""
    table = bby_table(m, pair)
    shifted = [a + b for a, b in zip(bby_vector(m, pair, basis), vector)]
    key = m.class_of(shifted)
    if key not in table:
        raise InvariantViolation("translated class has no basis")
    return table[key]


BBY_VARIANTS = ("bby", "bby_flip_circuits", "bby_flip_both", "bby_flip_cocircuits")


def variant_pair(pair: SignaturePair, tag: str) -> SignaturePair:
    if tag == "bby":
        return pair
    if tag == "bby_flip_circuits":
        return pair.flipped("circuits")
    if tag == "bby_flip_cocircuits":
        return pair.flipped("cocircuits")
    if tag == "bby_flip_both":
        return pair.flipped("circuits").flipped("cocircuits")
    raise ValueError(f"unknown variant {tag!r}")


# -- minors -------------------------------------------------------------------


def minor(m: RegularMatroid, pair: SignaturePair, e, op: str):
    """Delete or contract e, with the induced signatures on the minor.

    Deletion keeps circuits avoiding e and restricts cocircuit choices to
    the minimal surviving supports; contraction is dual.  The induced pair
    of an acyclic pair stays acyclic, which callers may re-check.
    """
    if op not in ("delete", "contract"):
        raise ValueError("op must be 'delete' or 'contract'")
    if e not in m.labels:
        raise KeyError(f"unknown ground element {e!r}")
    j = m._index[e]
    if op == "delete":
        if m.is_coloop(e):
            raise ValueError("cannot delete a coloop")
        matrix = [row[:j] + row[j + 1 :] for row in m.matrix]
    else:
        if m.is_loop(e):
            raise ValueError("cannot contract a loop")
        rows = [list(row) for row in m.matrix]
        pivot = next(i for i in range(len(rows)) if rows[i][j] != 0)
        pr = rows[pivot]
        sign = pr[j]
        for i in range(len(rows)):
            if i != pivot and rows[i][j] != 0:
                f = rows[i][j] * sign  # pr[j] is +-1 by unimodularity
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rows.pop(pivot)
        matrix = [row[:j] + row[j + 1 :] for row in rows]
    labels = m.labels[:j] + m.labels[j + 1 :]
    sub = RegularMatroid(labels, matrix, check_unimodular=False)
    induced = SignaturePair(
        _induced_signature(m, pair.circuits, e, sub.circuits(), keep=(op == "delete")),
        _induced_signature(m, pair.cocircuits, e, sub.cocircuits(), keep=(op == "contract")),
    )
    return sub, induced


def _induced_signature(m, chosen, e, minor_family, keep: bool):
    """Restrict chosen signed vectors to the minor's ground set.

    keep=True: survivors are exactly the chosen vectors avoiding e.
    keep=False: drop the e coordinate and keep choices whose support is
    minimal, i.e. still in the minor's family.  Every minor circuit or
    cocircuit must be reached with an unambiguous sign.
    """
    j = m._index[e]
    targets = {_support(v) for v in minor_family}
    out = {}
    for v in chosen:
        if keep and v[j] != 0:
            continue
        w = v[:j] + v[j + 1 :]
        if all(x == 0 for x in w):
            continue
        if _support(w) not in targets:
            continue
        prev = out.get(_support(w))
        if prev is not None and prev != w:
            raise InvariantViolation("conflicting induced signs on a minor")
        out[_support(w)] = w
    if set(out) != targets:
        raise InvariantViolation("induced signature misses part of the minor")
    return tuple(sorted(out.values()))


def _support(v):
    return tuple(j for j, x in enumerate(v) if x != 0)


# -- consistency harness ---------------------------------------------------


def verify_matroid_consistency(
    m: RegularMatroid,
    pair: SignaturePair,
    variant_tag: str = "bby",
    extra_condition=None,
) -> dict:
    """Check minor compatibility of the BBY action over one matroid.

    For every generator class [f] and basis B with B' the acted basis:
    contracting any shared e (not f) must commute, and so must deleting any
    e outside B, B' and f.  Findings are reported, never raised; an optional
    extra_condition(m, pair, f, B, B') hook may add third-party checks.
    """
    sig = variant_pair(pair, variant_tag)
    report = {"checked": 0, "violations": [], "variant": variant_tag}
    minors = {}

    def make_act(mm, sg):
        table = bby_table(mm, sg)
        tags = {b: bby_vector(mm, sg, b) for b in mm.bases()}

        def act(vec, b):
            return table[mm.class_of([a + x for a, x in zip(tags[b], vec)])]

        return act

    act_top = make_act(m, sig)

    def get_minor(e, op):
        if (e, op) not in minors:
            sub, ind = minor(m, sig, e, op)
            minors[(e, op)] = (sub, make_act(sub, ind))
        return minors[(e, op)]

    for f in m.labels:
        unit = [int(lbl == f) for lbl in m.labels]
        for b in m.bases():
            b2 = act_top(unit, b)
            for e in m.labels:
                if e == f:
                    continue
                if e in b and e in b2:
                    sub, act_sub = get_minor(e, "contract")
                    got = act_sub([int(lbl == f) for lbl in sub.labels], b - {e})
                    report["checked"] += 1
                    if got != b2 - {e}:
                        report["violations"].append(
                            {
                                "condition": 1,
                                "f": f,
                                "basis": sorted(b),
                                "element": e,
                                "expected": sorted(b2 - {e}),
                                "actual": sorted(got),
                            }
                        )
                elif e not in b and e not in b2:
                    sub, act_sub = get_minor(e, "delete")
                    got = act_sub([int(lbl == f) for lbl in sub.labels], b)
                    report["checked"] += 1
                    if got != b2:
                        report["violations"].append(
                            {
                                "condition": 2,
                                "f": f,
                                "basis": sorted(b),
                                "element": e,
                                "expected": sorted(b2),
                                "actual": sorted(got),
                            }
                        )
            if extra_condition is not None:
                finding = extra_condition(m, sig, f, b, b2)
                if finding:
                    report["violations"].append({"condition": "extra", "detail": finding})
    return report


def conjecture_search(max_graph_edges: int, include_r10: bool = False) -> dict:
    """Sweep small matroids through the consistency harness of every variant.

    Graphic matroids come from all connected multigraphs within the edge
    bound, with default signatures; the ten-element non-graphic matroid
    joins when asked.  Any violation would be a counterexample to the
    consistency conjectures and is preserved verbatim; the caller decides
    what to make of it.
    """
    from .catalog import connected_multigraphs

    report = {"instances": 0, "checked": 0, "findings": []}
    for g in connected_multigraphs(max_graph_edges):
        m = from_graph(g)
        pair = default_signatures(m)
        for tag in BBY_VARIANTS:
            rep = verify_matroid_consistency(m, pair, tag)
            report["instances"] += 1
            report["checked"] += rep["checked"]
            for v in rep["violations"]:
                report["findings"].append(
                    {"matroid": m.to_obj(), "variant": tag, "detail": v}
                )
    if include_r10:
        m = r10()
        rep = verify_matroid_consistency(m, default_signatures(m))
        report["instances"] += 1
        report["checked"] += rep["checked"]
        for v in rep["violations"]:
            report["findings"].append({"matroid": "r10", "variant": "bby", "detail": v})
    return report


def r10() -> RegularMatroid:
    """The classical ten-element regular matroid that is not graphic."""
    ident = [[int(i == j) for j in range(5)] for i in range(5)]
    circ = [
        [-1, 1, 0, 0, 1],
        [1, -1, 1, 0, 0],
        [0, 1, -1, 1, 0],
        [0, 0, 1, -1, 1],
        [1, 0, 0, 1, -1],
    ]
    matrix = [ident[i] + circ[i] for i in range(5)]
    return RegularMatroid([f"e{i}" for i in range(1, 11)], matrix)
