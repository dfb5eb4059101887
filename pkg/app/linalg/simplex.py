# app/linalg/simplex.py

from app.helpers.rational import dot, primitive_integer_vector, to_fraction
from typing import List, Literal, Optional, Sequence, Tuple
from app.core.exceptions import DimensionMismatch
from app.linalg.matrix import RationalMatrix
from dataclasses import dataclass
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

LPStatus = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    x: Optional[Tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


# ============================================================
# ✅ TABLEAU OPERATIONS
# ============================================================
def _pivot(tableau: List[List[Fraction]], row: int, col: int) -> None:
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    for i, other in enumerate(tableau):
        if i != row and other[col] != 0:
            factor = other[col]
            tableau[i] = [a - factor * b for a, b in zip(other, tableau[row])]


def _iterate(
    tableau: List[List[Fraction]],
    basis: List[int],
    costs: Sequence[Fraction],
    n_vars: int,
) -> Literal["optimal", "unbounded"]:
    """Primal simplex with Bland's rule; the last tableau column is the rhs."""
    iterations = 0
    while True:
        in_basis = set(basis)
        entering = None
        for j in range(n_vars):
            if j in in_basis:
                continue
            reduced = costs[j] - sum((costs[b] * row[j] for b, row in zip(basis, tableau)), Fraction(0))
            if reduced < 0:
                entering = j
                break
        if entering is None:
            logger.debug("simplex optimal after %d pivots", iterations)
            return "optimal"

        leaving = None
        best: Optional[Tuple[Fraction, int]] = None
        for i, row in enumerate(tableau):
            if row[entering] > 0:
                key = (row[-1] / row[entering], basis[i])
                if best is None or key < best:
                    best, leaving = key, i
        if leaving is None:
            return "unbounded"

        _pivot(tableau, leaving, entering)
        basis[leaving] = entering
        iterations += 1


# ============================================================
# ✅ TWO-PHASE EXACT SIMPLEX
# ============================================================
def minimize(
    costs: Sequence[Fraction],
    a_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
) -> LPResult:
    """
    Minimize cᵀx subject to A x = b, x ≥ 0, in exact arithmetic.

    Phase one drives artificial variables to zero; redundant equality rows
    are dropped before phase two.
    """
    n = len(costs)
    m = len(a_eq)
    if len(b_eq) != m or any(len(row) != n for row in a_eq):
        raise DimensionMismatch("inconsistent LP dimensions")
    c = [to_fraction(v) for v in costs]

    tableau: List[List[Fraction]] = []
    for i, (row, rhs) in enumerate(zip(a_eq, b_eq)):
        row = [to_fraction(v) for v in row]
        rhs = to_fraction(rhs)
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        tableau.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [n + i for i in range(m)]

    phase_one = [Fraction(0)] * n + [Fraction(1)] * m
    _iterate(tableau, basis, phase_one, n + m)
    infeasibility = sum((row[-1] for row, b in zip(tableau, basis) if b >= n), Fraction(0))
    if infeasibility > 0:
        logger.debug("LP infeasible (phase one residual %s)", infeasibility)
        return LPResult(status="infeasible")

    # pivot remaining zero-level artificials out, or drop their rows
    keep = []
    for i in range(len(tableau)):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tableau, i, col)
            basis[i] = col
        keep.append(i)
    tableau = [tableau[i][:n] + [tableau[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    if _iterate(tableau, basis, c, n) == "unbounded":
        return LPResult(status="unbounded")

    x = [Fraction(0)] * n
    for row, b in zip(tableau, basis):
        x[b] = row[-1]
    return LPResult(status="optimal", x=tuple(x), value=dot(c, x))


# ============================================================
# ✅ NONNEGATIVE KERNEL CERTIFICATE
# ============================================================
def nonneg_kernel_certificate(matrix: RationalMatrix, support: Sequence[int]) -> Optional[Tuple[Fraction, ...]]:
    """
    A vector u ≥ 0, u ≠ 0, vanishing off `support`, with Aᵀu = 0.

    Solved as: maximize Σ u_i over the support subject to Aᵀu = 0 and
    0 ≤ u_i ≤ 1. The optimum is positive exactly when such u exists.
    Returns None when it provably does not.
    """
    support = sorted(set(support))
    if not support:
        raise DimensionMismatch("certificate support must be nonempty")
    if any(i < 0 or i >= matrix.n_rows for i in support):
        raise DimensionMismatch("support index out of range")
    k = len(support)

    # variables: u_s for s in support, then slacks t_s with u_s + t_s = 1
    a_eq: List[List[Fraction]] = []
    b_eq: List[Fraction] = []
    for j in range(matrix.n_cols):
        a_eq.append([matrix[s, j] for s in support] + [Fraction(0)] * k)
        b_eq.append(Fraction(0))
    for idx in range(k):
        a_eq.append([Fraction(int(t == idx)) for t in range(k)] + [Fraction(int(t == idx)) for t in range(k)])
        b_eq.append(Fraction(1))
    costs = [Fraction(-1)] * k + [Fraction(0)] * k

    result = minimize(costs, a_eq, b_eq)
    if not result.is_optimal or result.value >= 0:
        return None

    u = [Fraction(0)] * matrix.n_rows
    for s, value in zip(support, result.x[:k]):
        u[s] = value
    return tuple(primitive_integer_vector(u))
