# app/kinetics/services.py

from app.kinetics.schemas import IntegrationOptions, RateFunction, SimulationDiagnostics, Trajectory
from app.core.exceptions import DimensionMismatch, NetworkValidationError, OrderError
from app.kinetics.rates import compiled, vector_field
from app.linalg.elimination import left_inverse
from app.factorization.schemas import Factorization
from app.kinetics.integrator import integrate_rates
from typing import List, Optional, Sequence, Tuple
from app.order.schemas import ConeOrder, Integral
from concurrent.futures import ThreadPoolExecutor
from app.reactions.schemas import Network
from app.linalg.matrix import RationalMatrix
from app.order.services import H_float
from app.core.config import settings
from fractions import Fraction
import networkx as nx
import numpy as np
import logging
import csv
import io

logger = logging.getLogger(__name__)

NEWTON_ITERATIONS = 50
NEWTON_TOLERANCE = 1e-13


# ============================================================
# ✅ TRAJECTORIES
# ============================================================
def integrate(
    net: Network, rf: RateFunction, x0: Sequence[float], t_end: float, opts: Optional[IntegrationOptions] = None
) -> Trajectory:
    if rf.network != net:
        raise NetworkValidationError("rate function was built for a different network")
    return integrate_rates(rf, x0, t_end, opts)


def random_interior_point(n: int, rng: np.random.Generator, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    return rng.uniform(low, high, size=n)


def ordered_partner(order: ConeOrder, x0: Sequence[float], t: Sequence[float]) -> np.ndarray:
    """x0 + Λt, which lies above x0 whenever t ≥ 0."""
    if len(t) != order.r:
        raise DimensionMismatch(f"cone coordinates must have length {order.r}")
    return np.asarray(x0, dtype=float) + order.lambda_.to_numpy() @ np.asarray(t, dtype=float)


# ============================================================
# ✅ ORDER PRESERVATION
# ============================================================
def order_gap(order: ConeOrder, x: Sequence[float], y: Sequence[float]) -> Optional[List[float]]:
    """
    Pullback coordinates t of y − x (snapped to exact rationals), or None
    when y − x is off Im Λ by more than the integration slack.
    """
    d = [Fraction(float(b)) - Fraction(float(a)) for a, b in zip(x, y)]
    t = order.left_inverse.apply(d)
    residual = max((abs(a - b) for a, b in zip(order.lambda_.apply(t), d)), default=Fraction(0))
    scale = 1.0 + max((abs(float(a)) for a in list(x) + list(y)), default=0.0)
    if float(residual) > settings.ORDER_SLACK * scale:
        return None
    return [float(a) for a in t]


def ordered_with_slack(order: ConeOrder, x: Sequence[float], y: Sequence[float]) -> bool:
    t = order_gap(order, x, y)
    return t is not None and all(a >= -settings.ORDER_SLACK for a in t)


def strictly_ordered(order: ConeOrder, x: Sequence[float], y: Sequence[float], threshold: float = 1e-10) -> bool:
    """y − x in the relative interior of K(Λ): every pullback coordinate above threshold."""
    t = order_gap(order, x, y)
    return t is not None and all(a > threshold for a in t)


def check_order_preservation(
    order: ConeOrder,
    traj_x: Trajectory,
    traj_y: Trajectory,
    strict_from: Optional[float] = None,
    threshold: float = 1e-10,
) -> bool:
    """
    x(t) ⪯ y(t) at every shared sample time, up to the pullback slack. With
    `strict_from`, samples at or after that time must be strictly ordered.
    """
    if len(traj_x.times) != len(traj_y.times) or any(
        abs(a - b) > 1e-12 * max(1.0, abs(a)) for a, b in zip(traj_x.times, traj_y.times)
    ):
        raise DimensionMismatch("trajectories do not share a time grid")
    if not ordered_with_slack(order, traj_x.states[0], traj_y.states[0]):
        raise OrderError("initial states are not ordered")
    for time, x, y in zip(traj_x.times, traj_x.states, traj_y.states):
        if not ordered_with_slack(order, x, y):
            logger.debug("order lost at t=%g", time)
            return False
        if strict_from is not None and time >= strict_from and not strictly_ordered(order, x, y, threshold):
            logger.debug("order not strict at t=%g", time)
            return False
    return True


def equilibria_ordered(order: ConeOrder, e_low: Sequence[float], e_high: Sequence[float], threshold: float = 1e-10) -> bool:
    """e_high − e_low in the relative interior of K(Λ)."""
    return strictly_ordered(order, e_low, e_high, threshold)


# ============================================================
# ✅ QUASIPOSITIVITY
# ============================================================
def pullback_matrix(f: Factorization, dv: np.ndarray) -> np.ndarray:
    """M = ΘDvΛ; JΛ = ΛM, so J is K(Λ)-quasipositive exactly when M is Metzler."""
    theta, lam = f.theta.to_numpy(), f.lambda_.to_numpy()
    if dv.shape != (theta.shape[1], lam.shape[0]):
        raise DimensionMismatch(f"Dv must be {theta.shape[1]} × {lam.shape[0]}")
    return theta @ dv @ lam


def _rational_dv(f: Factorization, dv: np.ndarray) -> RationalMatrix:
    """Dv in rationals, its float entries taken at face value."""
    dv = np.asarray(dv, dtype=float)
    if dv.shape != (f.theta.n_cols, f.lambda_.n_rows):
        raise DimensionMismatch(f"Dv must be {f.theta.n_cols} × {f.lambda_.n_rows}")
    return RationalMatrix([[Fraction(float(a)) for a in row] for row in dv], f.lambda_.n_rows)


def exact_pullback_matrix(f: Factorization, dv: np.ndarray) -> RationalMatrix:
    return f.theta @ _rational_dv(f, dv) @ f.lambda_


def pullback_metzler_check(f: Factorization, dv: np.ndarray) -> Tuple[bool, bool]:
    """(is_quasipositive, is_irreducible), judged on exact signs of M."""
    m = exact_pullback_matrix(f, dv)
    r = m.n_rows
    quasipositive = all(m[k, l] >= 0 for k in range(r) for l in range(r) if k != l)
    if r == 1:
        return quasipositive, True

    graph = nx.DiGraph()
    graph.add_nodes_from(range(r))
    graph.add_edges_from((k, l) for k in range(r) for l in range(r) if k != l and m[k, l] > 0)
    return quasipositive, nx.is_strongly_connected(graph)


def extremal_mapping_oracle(f: Factorization, dv: np.ndarray) -> bool:
    """
    (J + αI)Λ_k ∈ K(Λ) for every extremal ray Λ_k, with α large enough to
    dominate the diagonal. Runs in exact arithmetic on the float entries of Dv.
    """
    lam = f.lambda_
    jac = lam @ f.theta @ _rational_dv(f, dv)
    left = left_inverse(lam)

    images = [jac.apply(lam.column(k)) for k in range(lam.n_cols)]
    alpha = 1 + max(abs(left.apply(image)[k]) for k, image in enumerate(images))
    for k, image in enumerate(images):
        shifted = [a + alpha * b for a, b in zip(image, lam.column(k))]
        if any(t < 0 for t in left.apply(shifted)):
            return False
    return True


# ============================================================
# ✅ EQUILIBRIA
# ============================================================
def _stoichiometric_basis(gamma: np.ndarray) -> np.ndarray:
    u, s, _ = np.linalg.svd(gamma, full_matrices=False)
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
    return u[:, :rank]


def newton_polish(rf: RateFunction, x: np.ndarray) -> np.ndarray:
    """Damped Newton on Γv = 0 within x + Im Γ, staying in the orthant."""
    model = compiled(rf)
    basis = _stoichiometric_basis(model.gamma)
    if basis.shape[1] == 0:
        return x

    def residual(point: np.ndarray) -> np.ndarray:
        return basis.T @ model.field(point)

    current = residual(x)
    for _ in range(NEWTON_ITERATIONS):
        norm = float(np.linalg.norm(current))
        if norm < NEWTON_TOLERANCE:
            break
        jac = basis.T @ model.jacobian(x) @ basis
        step, *_ = np.linalg.lstsq(jac, -current, rcond=None)
        damping = 1.0
        while damping > 1e-6:
            candidate = x + damping * (basis @ step)
            if np.all(candidate >= 0):
                value = residual(candidate)
                if np.linalg.norm(value) < norm:
                    x, current = candidate, value
                    break
            damping *= 0.5
        else:
            logger.debug("Newton polish stalled at residual %g", norm)
            break
    return x


def find_equilibrium(
    net: Network, rf: RateFunction, x0: Sequence[float], t_end: float = 200.0, opts: Optional[IntegrationOptions] = None
) -> np.ndarray:
    opts = opts or IntegrationOptions(samples=2)
    trajectory = integrate(net, rf, x0, t_end, opts)
    return newton_polish(rf, np.asarray(trajectory.final_state, dtype=float))


def class_starts(gamma: np.ndarray, c: Sequence[float], starts: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Interior points c + Γu of the stoichiometry class of c ≫ 0."""
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise DimensionMismatch("multistart needs an interior base point")
    m = gamma.shape[1]
    bound = 0.9 * float(np.min(c)) / (m * max(float(np.max(np.abs(gamma))), 1.0))
    return [c + gamma @ rng.uniform(-bound, bound, size=m) for _ in range(starts)]


def multistart_equilibria(
    net: Network,
    rf: RateFunction,
    c: Sequence[float],
    starts: int,
    t_end: float,
    rng: np.random.Generator,
) -> List[np.ndarray]:
    points = class_starts(compiled(rf).gamma, c, starts, rng)
    with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
        return list(pool.map(lambda x: find_equilibrium(net, rf, x, t_end), points))


def max_pairwise_distance(points: Sequence[np.ndarray]) -> float:
    return max((float(np.max(np.abs(a - b))) for i, a in enumerate(points) for b in points[i + 1 :]), default=0.0)


def conservation_residual(rf: RateFunction, h: Integral, x: Sequence[float]) -> float:
    """H(Γv(x)), zero for every rate function."""
    return H_float(h, vector_field(rf, x))


# ============================================================
# ✅ EXPORT
# ============================================================
def trajectory_to_csv(traj: Trajectory, species_names: Sequence[str], integral: Optional[Integral] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["time", *species_names] + (["H"] if integral is not None else []))
    for time, state in zip(traj.times, traj.states):
        row = [repr(float(time))] + [repr(float(a)) for a in state]
        if integral is not None:
            row.append(repr(float(H_float(integral, np.asarray(state)))))
        writer.writerow(row)
    return buffer.getvalue()


def diagnostics(
    traj: Trajectory,
    rf: RateFunction,
    t_end: float,
    seed: Optional[int] = None,
    order_preserved: Optional[bool] = None,
) -> SimulationDiagnostics:
    h_values = [d.h_value for d in traj.diagnostics if d.h_value is not None]
    return SimulationDiagnostics(
        kinetics=rf.reactions[0].kind,
        seed=seed,
        t_end=t_end,
        accepted_steps=traj.accepted_steps,
        rejected_steps=traj.rejected_steps,
        clamped=traj.clamped,
        h_initial=h_values[0] if h_values else None,
        h_max_drift=max(abs(h - h_values[0]) for h in h_values) if h_values else None,
        min_coordinate=min(d.min_coordinate for d in traj.diagnostics),
        order_preserved=order_preserved,
        steps=list(traj.diagnostics),
    )
