"""Small exact linear algebra over the rationals.

Matrices are lists of rows of :class:`~fractions.Fraction`.  Everything here is
dense and meant for the tiny systems (dimension below a hundred) that come up
in the representation data.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class SingularMatrixError(ArithmeticError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def unit(n: int, i: int, j: int, c=1) -> Matrix:
    """``c * E_{ij}`` with 1-based indices."""
    out = zeros(n)
    out[i - 1][j - 1] = Fraction(c)
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def bracket(a: Matrix, b: Matrix) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def flatten(a: Matrix) -> list[Fraction]:
    return [x for row in a for x in row]


def lin_comb(coeffs: Sequence, mats: Sequence[Matrix]) -> Matrix:
    n = len(mats[0])
    out = zeros(n, len(mats[0][0]))
    for c, m in zip(coeffs, mats):
        if c:
            out = add(out, scale(c, m))
    return out


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (Gauss-Jordan, exact)."""
    m = as_matrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}``."""
    if not rows:
        return []
    red, pivots = rref(rows)
    ncols = len(red[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(x)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(as_matrix(a), identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in red]


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Solve the square system ``a x = b``."""
    inv = inverse(a)
    return [sum((x * Fraction(y) for x, y in zip(row, b)), Fraction(0)) for row in inv]


def independent_columns(cols: Sequence[Sequence]) -> tuple[list[int], Matrix]:
    """For column vectors ``cols`` spanning a space of dimension ``len(cols)``,
    pick row indices on which they are independent.

    Returns ``(rows, inv)`` where ``inv`` inverts the square submatrix, so the
    coordinates of ``v`` in the span are ``inv @ v[rows]``.
    """
    # pivots of the transpose = coordinates that separate the vectors
    _, pivots = rref(cols)
    if len(pivots) != len(cols):
        raise SingularMatrixError("vectors are linearly dependent")
    sub_m = [[col[r] for col in cols] for r in pivots]
    return pivots, inverse(sub_m)


class IncrementalBasis:
    """Grow a linearly independent set one vector at a time."""

    def __init__(self, width: int):
        self.width = width
        self._rows: list[list[Fraction]] = []
        self._pivots: list[int] = []

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence) -> list[Fraction]:
        v = [Fraction(x) for x in v]
        for row, p in zip(self._rows, self._pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def add(self, v: Sequence) -> bool:
        """Add ``v`` if independent; report whether it was added."""
        r = self.reduce(v)
        p = next((i for i, x in enumerate(r) if x != 0), None)
        if p is None:
            return False
        inv = 1 / r[p]
        r = [x * inv for x in r]
        # keep earlier rows reduced against the new pivot
        for i, row in enumerate(self._rows):
            if row[p] != 0:
                f = row[p]
                self._rows[i] = [x - f * y for x, y in zip(row, r)]
        self._rows.append(r)
        self._pivots.append(p)
        return True
