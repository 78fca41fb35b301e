"""Tiny exact linear algebra over Fraction, for the small matrices used here.

Matrices are tuples of row tuples.  Everything is Gauss-Jordan with exact
pivoting; sizes never exceed ~10x10 in this package.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = tuple[tuple[Fraction, ...], ...]


def mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Matrix, v) -> tuple[Fraction, ...]:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in a)


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    work = [list(row) + list(ident_row) for row, ident_row in zip(a, identity(n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def solve(columns: list[tuple[Fraction, ...]], target: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Solve sum_j c_j * columns[j] = target; the columns must be independent."""
    m, n = len(target), len(columns)
    work = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    row = 0
    pivots: list[int] = []
    for col in range(n):
        pivot = next((r for r in range(row, m) if work[r][col] != 0), None)
        if pivot is None:
            raise ValueError("columns are linearly dependent")
        work[row], work[pivot] = work[pivot], work[row]
        p = work[row][col]
        work[row] = [x / p for x in work[row]]
        for r in range(m):
            if r != row and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[row])]
        pivots.append(row)
        row += 1
    for r in range(row, m):
        if work[r][n] != 0:
            raise ValueError("no exact solution")
    return tuple(work[pivots[j]][n] for j in range(n))


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion via exact leading principal minors."""
    n = len(a)
    for k in range(1, n + 1):
        if _det([row[:k] for row in a[:k]]) <= 0:
            return False
    return True


def _det(rows) -> Fraction:
    work = [list(map(Fraction, r)) for r in rows]
    n = len(work)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        for r in range(col + 1, n):
            if work[r][col] != 0:
                factor = work[r][col] * inv
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return det
