# app/factorization/services.py

from app.factorization.schemas import Factorization, FactorizationAttempt, IndexClass
from app.core.exceptions import DimensionMismatch, FactorizationError
from app.linalg.elimination import kernel_basis
from typing import Dict, List, Optional, Tuple
from app.linalg.matrix import RationalMatrix
from app.helpers.rational import sign
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

REASON_KERNEL_DIMENSION = "ker(Θᵀ) not one-dimensional"
REASON_ZERO_COORDINATE = "spanning vector of ker(Θᵀ) has a zero coordinate"
REASON_COLUMN_SIGNS = "column sign condition fails on SΘ"

VIOLATION_PRODUCT = "product mismatch"
VIOLATION_LAMBDA_ROW = "lambda row without exactly one nonzero entry"
VIOLATION_LAMBDA_COLUMN = "lambda zero column"
VIOLATION_THETA_ROW = "theta zero row"
VIOLATION_THETA_COLUMN = "theta column sign condition"
VIOLATION_KERNEL = "ker(Θᵀ) not one-dimensional"
VIOLATION_Y_KERNEL = "y_theta not in ker(Θᵀ)"
VIOLATION_Y_POSITIVE = "y_theta not positive"


# ============================================================
# ✅ COLLINEAR ROW PARTITION
# ============================================================
def _first_nonzero(row) -> int:
    return next(j for j, a in enumerate(row) if a != 0)


def _direction(row) -> Tuple[Fraction, ...]:
    """Row scaled so its first nonzero entry is 1; equal for collinear rows."""
    pivot = row[_first_nonzero(row)]
    return tuple(a / pivot for a in row)


def collinear_row_partition(gamma: RationalMatrix) -> List[IndexClass]:
    """Maximal classes of pairwise collinear rows, ordered by smallest member."""
    classes: Dict[Tuple[Fraction, ...], List[int]] = {}
    for i, row in enumerate(gamma.rows):
        if all(a == 0 for a in row):
            raise FactorizationError(f"row {i} of the stoichiometric matrix is zero")
        classes.setdefault(_direction(row), []).append(i)
    return [tuple(members) for members in classes.values()]


# ============================================================
# ✅ FACTORIZE
# ============================================================
def _column_signs_ok(theta: RationalMatrix) -> bool:
    for column in theta.columns():
        if sum(1 for a in column if a > 0) > 1 or sum(1 for a in column if a < 0) > 1:
            return False
    return True


def _has_nonpositive_column(lam: RationalMatrix) -> bool:
    return any(all(a <= 0 for a in column) for column in lam.columns())


def attempt_factorization(gamma: RationalMatrix) -> FactorizationAttempt:
    """
    Build Γ = ΛΘ from the maximal collinear row partition and check A3.

    Λ gets one column per class; a row's entry is its factor against the
    class representative (lowest row, scaled to first nonzero +1), and the
    representatives are the rows of Θ. The kernel of Θᵀ must be spanned by
    a vector without zero coordinates; its signs give S, and (ΛS)(SΘ) is
    then checked for the column sign condition.
    """
    if gamma.n_rows == 0 or gamma.n_cols == 0 or gamma.is_zero():
        raise FactorizationError("the stoichiometric matrix is empty or zero")
    partition = collinear_row_partition(gamma)
    r = len(partition)

    representatives = [_direction(gamma.row(members[0])) for members in partition]
    lam_rows = [[Fraction(0)] * r for _ in range(gamma.n_rows)]
    for k, members in enumerate(partition):
        f = _first_nonzero(representatives[k])
        for i in members:
            lam_rows[i][k] = gamma[i, f]
    lam = RationalMatrix(lam_rows, r)
    theta = RationalMatrix(representatives, gamma.n_cols)

    kernel = kernel_basis(theta.T)
    logger.debug("partition %s, dim ker(Θᵀ) = %d", partition, len(kernel))
    if len(kernel) != 1:
        return FactorizationAttempt(
            row_partition=partition, reason=REASON_KERNEL_DIMENSION, kernel_dimension=len(kernel)
        )
    y = kernel[0]
    if any(v == 0 for v in y):
        return FactorizationAttempt(row_partition=partition, reason=REASON_ZERO_COORDINATE, kernel_dimension=1)

    signs = [sign(v) for v in y]
    y_positive = tuple(s * v for s, v in zip(signs, y))
    lam = lam.map_columns(signs)
    theta = theta.map_rows(signs)
    if not _column_signs_ok(theta):
        return FactorizationAttempt(row_partition=partition, reason=REASON_COLUMN_SIGNS, kernel_dimension=1)

    # (−ΛS)(−SΘ) is the other valid orientation; prefer the one without a
    # nonpositive Λ column
    if _has_nonpositive_column(lam) and not _has_nonpositive_column(-lam):
        lam, theta, signs = -lam, -theta, [-s for s in signs]

    factorization = Factorization(
        lambda_=lam,
        theta=theta,
        sign_flip=tuple(Fraction(s) for s in signs),
        y_theta=y_positive,
        row_partition=tuple(partition),
    )
    return FactorizationAttempt(row_partition=partition, factorization=factorization, kernel_dimension=1)


def factorize(gamma: RationalMatrix) -> Optional[Factorization]:
    return attempt_factorization(gamma).factorization


# ============================================================
# ✅ VERIFY
# ============================================================
def verify_factorization(gamma: RationalMatrix, f: Factorization) -> List[str]:
    """Named A3 clauses that `f` violates for `gamma` (empty when valid)."""
    lam, theta = f.lambda_, f.theta
    if lam.n_rows != gamma.n_rows or theta.n_cols != gamma.n_cols or lam.n_cols != theta.n_rows:
        raise DimensionMismatch(
            f"Λ {lam.shape} and Θ {theta.shape} do not factor a {gamma.shape} matrix"
        )
    if len(f.y_theta) != theta.n_rows:
        raise DimensionMismatch("y_theta length differs from the number of Θ rows")

    violations = []
    if lam @ theta != gamma:
        violations.append(VIOLATION_PRODUCT)
    if any(sum(1 for a in row if a != 0) != 1 for row in lam.rows):
        violations.append(VIOLATION_LAMBDA_ROW)
    if any(all(a == 0 for a in column) for column in lam.columns()):
        violations.append(VIOLATION_LAMBDA_COLUMN)
    if any(all(a == 0 for a in row) for row in theta.rows):
        violations.append(VIOLATION_THETA_ROW)
    if not _column_signs_ok(theta):
        violations.append(VIOLATION_THETA_COLUMN)
    if len(kernel_basis(theta.T)) != 1:
        violations.append(VIOLATION_KERNEL)
    if any(v != 0 for v in theta.T.apply(f.y_theta)):
        violations.append(VIOLATION_Y_KERNEL)
    if any(v <= 0 for v in f.y_theta):
        violations.append(VIOLATION_Y_POSITIVE)
    return violations


# ============================================================
# ✅ CANONICAL FORM
# ============================================================
def canonical_pair(lam: RationalMatrix, theta: RationalMatrix) -> Tuple[RationalMatrix, RationalMatrix]:
    """
    Normalize a factor pair up to positive column scaling and column order.

    Each Λ column is scaled so its first nonzero entry has absolute value 1
    (Θ rows inversely), then columns are sorted by first nonzero row.
    """
    scales = []
    for column in lam.columns():
        first = next(abs(a) for a in column if a != 0)
        scales.append(1 / first)
    lam = lam.map_columns(scales)
    theta = theta.map_rows([1 / s for s in scales])
    order = sorted(range(lam.n_cols), key=lambda k: _first_nonzero(lam.column(k)))
    return lam.submatrix(range(lam.n_rows), order), theta.submatrix(order)


def canonical_form(f: Factorization) -> Tuple[RationalMatrix, RationalMatrix]:
    return canonical_pair(f.lambda_, f.theta)
