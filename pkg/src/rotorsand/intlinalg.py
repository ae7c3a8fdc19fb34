"""Exact integer linear algebra: determinants, Smith form, Hermite lattice bases.

Everything runs over Python ints, so there is no overflow and no floating
point anywhere.  Matrices are sequences of equal-length integer rows.
"""

from __future__ import annotations

from fractions import Fraction


def det(matrix) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(matrix) -> int:
    """Rank over the rationals."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    r = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def smith_diagonal(matrix) -> list[int]:
    """Diagonal d1 | d2 | ... of the Smith normal form (nonnegative).

    Classic elementary-operation reduction; returns one entry per rank,
    padded with zeros up to min(rows, cols).
    """
    m = [list(row) for row in matrix]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot in the remaining block
        pos = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(m[i][j])
                if v != 0 and (best is None or v < best):
                    best, pos = v, (i, j)
        if pos is None:
            break
        i, j = pos
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        # clear row and column t, restarting whenever a remainder appears
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    for j in range(t, nc):
                        m[i][j] -= q * m[t][j]
                    if m[i][t] != 0:
                        m[t], m[i] = m[i], m[t]
                        dirty = True
            for j in range(t + 1, nc):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    for i in range(t, nr):
                        m[i][j] -= q * m[i][t]
                    if m[t][j] != 0:
                        for i in range(t, nr):
                            m[i][t], m[i][j] = m[i][j], m[i][t]
                        dirty = True
            if not dirty:
                break
        # enforce divisibility of everything below by the pivot
        p = m[t][t]
        fixed = True
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % p != 0:
                    for jj in range(t, nc):
                        m[t][jj] += m[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        diag.append(abs(p))
        t += 1
    diag += [0] * (min(nr, nc) - len(diag))
    return diag


class ColumnLattice:
    """The sublattice of Z^n spanned by a set of integer column vectors.

    Stored as a column-style Hermite basis: pivots on strictly increasing
    rows, positive, with entries to their right reduced into [0, pivot).
    Supports exact membership tests and a canonical coset representative.
    """

    def __init__(self, dim: int, columns):
        self.dim = dim
        cols = [list(c) for c in columns]
        for c in cols:
            if len(c) != dim:
                raise ValueError("column of wrong dimension")
        self.basis, self.pivot_rows = _hermite_columns(dim, cols)

    @property
    def lattice_rank(self) -> int:
        return len(self.basis)

    def index_in_ambient(self) -> int:
        """Index [Z^n : L]; requires the lattice to have full rank."""
        if self.lattice_rank != self.dim:
            raise ValueError("lattice is not full rank")
        out = 1
        for k, r in enumerate(self.pivot_rows):
            out *= self.basis[k][r]
        return out

    def _eliminate(self, vector):
        v = list(vector)
        coeffs = []
        for k, r in enumerate(self.pivot_rows):
            p = self.basis[k][r]
            q = v[r] // p
            coeffs.append(q)
            if q != 0:
                col = self.basis[k]
                for i in range(self.dim):
                    v[i] -= q * col[i]
        return v, coeffs

    def contains(self, vector) -> bool:
        v, _ = self._eliminate(vector)
        return all(x == 0 for x in v)

    def reduce(self, vector) -> tuple[int, ...]:
        """Canonical representative of vector + L (unique per coset).

        For a full-rank lattice this lands in the fundamental box of the
        Hermite basis, so two vectors reduce equally iff they are congruent.
        """
        if self.lattice_rank != self.dim:
            raise ValueError("canonical reduction needs a full-rank lattice")
        v, _ = self._eliminate(vector)
        return tuple(v)


def _hermite_columns(dim, cols):
    """Column HNF of the given columns; returns (basis columns, pivot rows).

    Only elementary column operations are used, so the spanned lattice never
    changes.  After extracting the pivot for row r, every remaining working
    column is zero at r, which makes the basis triangular on pivot rows.
    """
    work = [list(c) for c in cols if any(x != 0 for x in c)]
    basis = []
    pivot_rows = []
    for r in range(dim):
        while True:
            live = [i for i, c in enumerate(work) if c[r] != 0]
            if len(live) <= 1:
                break
            p = min(live, key=lambda i: abs(work[i][r]))
            pc = work[p]
            for i in live:
                if i == p:
                    continue
                q = work[i][r] // pc[r]
                work[i] = [a - q * b for a, b in zip(work[i], pc)]
        live = [i for i, c in enumerate(work) if c[r] != 0]
        if not live:
            continue
        col = work.pop(live[0])
        if col[r] < 0:
            col = [-x for x in col]
        # keep earlier pivots reduced against the new one
        for k in range(len(basis)):
            q = basis[k][r] // col[r]
            if q != 0:
                basis[k] = [a - q * b for a, b in zip(basis[k], col)]
        basis.append(col)
        pivot_rows.append(r)
        work = [c for c in work if any(x != 0 for x in c)]
    return basis, pivot_rows
