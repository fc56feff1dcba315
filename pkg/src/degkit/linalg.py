"""Exact linear algebra over Q: row reduction, spans, linear solves.

Vectors are lists/tuples of Fractions.  Everything here is dimension-small
(truncated algebras, coefficient collections), so plain Gaussian elimination
is the right tool.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form.

    Returns (echelon_rows, pivot_columns); zero rows are dropped.
    """
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    echelon = []
    pivots = []
    col = 0
    work = rows
    while work and col < ncols:
        pivot_row = None
        for r in work:
            if r[col]:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        inv = Fraction(1) / pivot_row[col]
        pivot_row = [c * inv for c in pivot_row]
        for r in work:
            f = r[col]
            if f:
                for j in range(col, ncols):
                    r[j] -= f * pivot_row[j]
        for r in echelon:
            f = r[col]
            if f:
                for j in range(col, ncols):
                    r[j] -= f * pivot_row[j]
        echelon.append(pivot_row)
        pivots.append(col)
        work = [r for r in work if any(r)]
        col += 1
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [echelon[i] for i in order], [pivots[i] for i in order]


class Subspace:
    """Subspace of Q^n stored as a reduced row echelon basis."""

    def __init__(self, vectors, dim):
        self.ambient = dim
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != dim:
                raise ValueError("ambient dimension mismatch")
        self.rows, self.pivots = rref(vecs)

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec):
        """Canonical representative of vec modulo this subspace."""
        v = list(map(Fraction, vec))
        for row, p in zip(self.rows, self.pivots):
            f = v[p]
            if f:
                for j in range(p, self.ambient):
                    v[j] -= f * row[j]
        return v

    def contains(self, vec):
        return not any(self.reduce(vec))

    def contains_all(self, vectors):
        return all(self.contains(v) for v in vectors)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ambient, tuple(tuple(r) for r in self.rows)))

    def sum(self, other):
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        return Subspace(self.rows + other.rows, self.ambient)


def solve_linear(matrix_rows, rhs):
    """Solve A x = b exactly over Q.

    matrix_rows: list of equation coefficient rows, rhs: list of Fractions.
    Returns (particular_solution, nullspace_basis) or (None, index) where
    index is the position of the first inconsistent equation row in the
    reduced system (used to surface certificates).
    """
    if not matrix_rows:
        return [], []
    ncols = len(matrix_rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix_rows, rhs)]
    echelon, pivots = rref(aug)
    for i, (row, p) in enumerate(zip(echelon, pivots)):
        if p == ncols:
            return None, i
    solution = [Fraction(0)] * ncols
    for row, p in zip(echelon, pivots):
        solution[p] = row[ncols]
    free_cols = [j for j in range(ncols) if j not in pivots]
    null_basis = []
    for f in free_cols:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(echelon, pivots):
            v[p] = -row[f]
        null_basis.append(v)
    return solution, null_basis
