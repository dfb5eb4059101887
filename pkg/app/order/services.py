# app/order/services.py

from app.core.exceptions import DimensionMismatch, InvariantViolation, OrderError
from app.helpers.rational import dot, fraction_vector, to_fraction
from app.linalg.elimination import kernel_basis, left_inverse, solve
from app.factorization.schemas import Factorization
from app.order.schemas import ConeOrder, Integral
from typing import Any, List, Optional, Sequence
from app.linalg.matrix import RationalMatrix
from app.linalg.simplex import minimize
from app.core.config import settings
from fractions import Fraction
import numpy as np
import logging

logger = logging.getLogger(__name__)

Point = List[Fraction]


# ============================================================
# ✅ CONE AND PULLBACK
# ============================================================
def cone_order(f: Factorization) -> ConeOrder:
    return ConeOrder(lambda_=f.lambda_, left_inverse=left_inverse(f.lambda_))


def _difference(x: Sequence[Any], c: Sequence[Any], n: int) -> Point:
    if len(x) != n or len(c) != n:
        raise DimensionMismatch(f"points must have length {n}")
    return [to_fraction(a) - to_fraction(b) for a, b in zip(x, c)]


def cone_coordinates(order: ConeOrder, v: Sequence[Any]) -> Optional[Point]:
    """t with Λt = v, or None when v ∉ Im Λ."""
    if len(v) != order.n:
        raise DimensionMismatch(f"vector must have length {order.n}")
    return solve(order.lambda_, fraction_vector(v))


def cone_contains(order: ConeOrder, v: Sequence[Any]) -> bool:
    t = cone_coordinates(order, v)
    return t is not None and all(a >= 0 for a in t)


def precedes(order: ConeOrder, x: Sequence[Any], y: Sequence[Any]) -> bool:
    """x ⪯ y"""
    return cone_contains(order, _difference(y, x, order.n))


def same_class(order: ConeOrder, x: Sequence[Any], y: Sequence[Any]) -> bool:
    return cone_coordinates(order, _difference(x, y, order.n)) is not None


def pullback(order: ConeOrder, c: Sequence[Any], w: Sequence[Any]) -> Point:
    """Coordinates of w − c along the columns of Λ."""
    t = cone_coordinates(order, _difference(w, c, order.n))
    if t is None:
        raise OrderError("point is not in the Λ-class of the base point")
    return t


def push_forward(order: ConeOrder, c: Sequence[Any], t: Sequence[Fraction]) -> Point:
    return [to_fraction(a) + b for a, b in zip(c, order.lambda_.apply(t))]


# ============================================================
# ✅ LATTICE OPERATIONS
# ============================================================
def meet(order: ConeOrder, c: Sequence[Any], x: Sequence[Any], y: Sequence[Any]) -> Point:
    """Greatest lower bound of x and y within the Λ-class of c."""
    tx, ty = pullback(order, c, x), pullback(order, c, y)
    return push_forward(order, c, [min(a, b) for a, b in zip(tx, ty)])


def join(order: ConeOrder, c: Sequence[Any], x: Sequence[Any], y: Sequence[Any]) -> Point:
    """Least upper bound of x and y within the Λ-class of c."""
    tx, ty = pullback(order, c, x), pullback(order, c, y)
    return push_forward(order, c, [max(a, b) for a, b in zip(tx, ty)])


# ============================================================
# ✅ INCREASING INTEGRAL
# ============================================================
def integral(f: Factorization) -> Integral:
    """
    p_i = y_θ(k) / Λ_ik on the lowest row i of each class k, zero elsewhere.
    """
    lam = f.lambda_
    p = [Fraction(0)] * lam.n_rows
    for k, members in enumerate(f.row_partition):
        i = members[0]
        p[i] = f.y_theta[k] / lam[i, k]
    return Integral(y_theta=f.y_theta, p_theta=tuple(p))


def H(h: Integral, x: Sequence[Any]) -> Fraction:
    if len(x) != len(h.p_theta):
        raise DimensionMismatch(f"point must have length {len(h.p_theta)}")
    return dot(h.p_theta, fraction_vector(x))


def H_float(h: Integral, x: np.ndarray) -> float:
    return float(np.dot(np.array([float(p) for p in h.p_theta]), x))


# ============================================================
# ✅ CONDITION A5
# ============================================================
def check_A5(lam: RationalMatrix) -> bool:
    """K(Λ) ∩ ℝⁿ≤0 = {0}; for one-nonzero-per-row Λ, no column is ≤ 0."""
    return not any(all(a <= 0 for a in column) for column in lam.columns())


# ============================================================
# ✅ CLASS SAMPLING AND INFIMUM
# ============================================================
def random_class_points(
    order: ConeOrder,
    c: Sequence[Any],
    count: int,
    rng: np.random.Generator,
    spread: Optional[Fraction] = None,
    max_attempts: int = 10_000,
) -> List[Point]:
    """
    Exact points of (c + Im Λ) ∩ ℝⁿ≥0, by rejection sampling of
    c + Λt with t on a grid of step spread/64 in [−spread, spread]ʳ.
    """
    c = fraction_vector(c)
    if spread is None:
        spread = max([Fraction(1)] + [abs(a) for a in c])
    points: List[Point] = []
    for _ in range(max_attempts):
        if len(points) >= count:
            break
        t = [Fraction(int(k), 64) * spread for k in rng.integers(-64, 65, size=order.r)]
        x = push_forward(order, c, t)
        if all(a >= 0 for a in x):
            points.append(x)
    return points


def class_constraints(order: ConeOrder) -> RationalMatrix:
    """Rows spanning ker Λᵀ; x ∼Λ c ⟺ Nx = Nc."""
    basis = kernel_basis(order.lambda_.T)
    return RationalMatrix(basis, order.n)


def class_infimum(
    order: ConeOrder,
    h: Integral,
    c: Sequence[Any],
    rng: Optional[np.random.Generator] = None,
    samples: Optional[int] = None,
) -> Point:
    """
    Least element of (c + Im Λ) ∩ ℝⁿ≥0.

    Found as the minimizer of H over the class (H is strictly increasing
    along the order), then checked against c and sampled class points.
    """
    c = fraction_vector(c)
    if len(c) != order.n:
        raise DimensionMismatch(f"point must have length {order.n}")
    if any(a < 0 for a in c):
        raise OrderError("class infimum needs a nonnegative base point")

    constraints = class_constraints(order)
    result = minimize(h.p_theta, constraints.rows, constraints.apply(c))
    if result.status == "unbounded":
        raise InvariantViolation("H is unbounded below on a Λ-class; A5 cannot hold")
    if not result.is_optimal:
        raise InvariantViolation("the Λ-class of a nonnegative point is empty")
    z = list(result.x)

    rng = rng or np.random.default_rng(settings.DEFAULT_SEED)
    samples = settings.INFIMUM_SAMPLES if samples is None else samples
    for s in [c] + random_class_points(order, c, samples, rng):
        if not precedes(order, z, s):
            raise InvariantViolation(f"H-minimizer is not below class point {s}")
    logger.debug("class infimum %s (H = %s)", z, result.value)
    return z
