# app/linalg/elimination.py

from app.core.exceptions import DimensionMismatch, RankDeficientError
from app.helpers.rational import primitive_integer_vector, to_fraction
from typing import List, Optional, Sequence, Tuple
from app.linalg.matrix import RationalMatrix
from fractions import Fraction
from math import lcm


# ============================================================
# ✅ FRACTION-FREE ECHELON FORM
# ============================================================
def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Scale every row by the lcm of its denominators."""
    scaled = []
    for row in rows:
        scale = lcm(*(Fraction(a).denominator for a in row)) if row else 1
        scaled.append([Fraction(a) * scale for a in row])
    return scaled


def echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Bareiss row echelon form.

    Returns the nonzero echelon rows and their pivot columns. Entries stay
    integral because each update divides by the previous pivot exactly.
    """
    a = _integer_rows(rows)
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots: List[int] = []
    previous = Fraction(1)
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pivot = a[r][c]
        for i in range(r + 1, n_rows):
            factor = a[i][c]
            a[i] = [(pivot * a[i][j] - factor * a[r][j]) / previous for j in range(n_cols)]
        previous = pivot
        pivots.append(c)
        r += 1
    return a[:r], pivots


def reduced_echelon(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (unit pivots, zeros above and below)."""
    ech, pivots = echelon(rows)
    for k in range(len(ech) - 1, -1, -1):
        c = pivots[k]
        ech[k] = [v / ech[k][c] for v in ech[k]]
        for i in range(k):
            factor = ech[i][c]
            if factor != 0:
                ech[i] = [a - factor * b for a, b in zip(ech[i], ech[k])]
    return ech, pivots


# ============================================================
# ✅ RANK, KERNEL, SOLVE
# ============================================================
def rank(matrix: RationalMatrix) -> int:
    return len(echelon(matrix.rows)[1])


def kernel_basis(matrix: RationalMatrix) -> List[Tuple[Fraction, ...]]:
    """
    Basis of the right null space.

    Each vector is a primitive integer vector with first nonzero entry
    positive, one per free column in increasing order.
    """
    n = matrix.n_cols
    rref, pivots = reduced_echelon(matrix.rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(rref, pivots):
            v[c] = -row[f]
        basis.append(tuple(primitive_integer_vector(v)))
    return basis


def solve(matrix: RationalMatrix, rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of Ax = b for full-column-rank A, or None if b is not in Im A."""
    if len(rhs) != matrix.n_rows:
        raise DimensionMismatch(f"right-hand side of length {len(rhs)} against {matrix.n_rows} rows")
    if rank(matrix) != matrix.n_cols:
        raise RankDeficientError("solve needs a matrix of full column rank")
    n = matrix.n_cols
    augmented = [list(row) + [to_fraction(b)] for row, b in zip(matrix.rows, rhs)]
    rref, pivots = reduced_echelon(augmented)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(rref, pivots):
        x[c] = row[n]
    return x


def inverse(matrix: RationalMatrix) -> RationalMatrix:
    n = matrix.n_rows
    if matrix.n_cols != n:
        raise DimensionMismatch(f"cannot invert a {matrix.shape} matrix")
    augmented = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix.rows)]
    rref, pivots = reduced_echelon(augmented)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise RankDeficientError("matrix is singular")
    return RationalMatrix((row[n:] for row in rref), n)


def left_inverse(matrix: RationalMatrix) -> RationalMatrix:
    """(AᵀA)⁻¹Aᵀ, the exact left inverse of a full-column-rank matrix."""
    if rank(matrix) != matrix.n_cols:
        raise RankDeficientError("left inverse needs a matrix of full column rank")
    return inverse(matrix.T @ matrix) @ matrix.T


def in_image(matrix: RationalMatrix, vector: Sequence[Fraction]) -> bool:
    """Whether vector lies in the column span (any rank)."""
    augmented = RationalMatrix([list(row) + [to_fraction(b)] for row, b in zip(matrix.rows, vector)])
    return rank(augmented) == rank(matrix)
