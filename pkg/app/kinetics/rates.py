# app/kinetics/rates.py

from app.kinetics.schemas import RateFunction, ReactionKinetics
from app.reactions.services import stoichiometric_matrix
from app.core.exceptions import NetworkValidationError
from typing import List, Optional, Sequence, Tuple
from app.reactions.schemas import Network
from app.core.config import settings
from pydantic import ValidationError
import numpy as np


# ============================================================
# ✅ CONSTRUCTORS
# ============================================================
def _build(net: Network, reactions: List[ReactionKinetics]) -> RateFunction:
    try:
        return RateFunction(network=net, reactions=tuple(reactions))
    except ValidationError as exc:
        raise NetworkValidationError(f"invalid kinetics: {exc.errors()[0]['msg']}") from exc


def make_mass_action(
    net: Network, forward: Sequence[float], reverse: Optional[Sequence[Optional[float]]] = None
) -> RateFunction:
    """
    Mass action: exponents are the stoichiometric coefficients.
    `reverse[j]` is used only for reversible reactions.
    """
    if len(forward) != net.n_reactions:
        raise NetworkValidationError("one forward rate constant per reaction is required")
    reverse = list(reverse) if reverse is not None else [None] * net.n_reactions
    if len(reverse) != net.n_reactions:
        raise NetworkValidationError("reverse rate constants must be indexed like the reactions")
    entries = []
    for j, reaction in enumerate(net.reactions):
        if forward[j] <= 0 or (reaction.reversible and (reverse[j] is None or reverse[j] <= 0)):
            raise NetworkValidationError(f"reaction {j + 1}: rate constants must be positive")
        entries.append(
            ReactionKinetics(
                kind="mass-action",
                forward=forward[j],
                reverse=reverse[j] if reaction.reversible else None,
                left_exponents={i: float(k) for i, k in reaction.left.items()},
                right_exponents={i: float(k) for i, k in reaction.right.items()},
            )
        )
    return _build(net, entries)


def make_uniform_mass_action(net: Network, constant: float = 1.0) -> RateFunction:
    return make_mass_action(net, [constant] * net.n_reactions, [constant] * net.n_reactions)


def make_power_law(net: Network, seed: int) -> RateFunction:
    """Power-law kinetics with exponents and rate constants drawn from `seed`."""
    rng = np.random.default_rng(seed)
    lo, hi = settings.POWER_LAW_EXPONENT_MIN, settings.POWER_LAW_EXPONENT_MAX
    k_lo, k_hi = settings.RATE_CONSTANT_MIN, settings.RATE_CONSTANT_MAX
    entries = []
    for reaction in net.reactions:
        left = {i: float(rng.uniform(lo, hi)) for i in reaction.left}
        right = {i: float(rng.uniform(lo, hi)) for i in reaction.right}
        forward = float(rng.uniform(k_lo, k_hi))
        reverse = float(rng.uniform(k_lo, k_hi)) if reaction.reversible else None
        entries.append(
            ReactionKinetics(
                kind="power-law", forward=forward, reverse=reverse, left_exponents=left, right_exponents=right
            )
        )
    return _build(net, entries)


def make_random_mass_action(net: Network, seed: int) -> RateFunction:
    rng = np.random.default_rng(seed)
    k_lo, k_hi = settings.RATE_CONSTANT_MIN, settings.RATE_CONSTANT_MAX
    forward = [float(rng.uniform(k_lo, k_hi)) for _ in net.reactions]
    reverse = [float(rng.uniform(k_lo, k_hi)) for _ in net.reactions]
    return make_mass_action(net, forward, reverse)


def negated(rf: RateFunction) -> RateFunction:
    """The same rates with v replaced by −v; only for negative controls."""
    flipped = rf.model_copy(update={"negated": not rf.negated})
    # model_copy carries private state over; the cached arrays hold the old sign
    flipped._compiled = None
    return flipped


# ============================================================
# ✅ EVALUATION
# ============================================================
class CompiledRates:
    """Dense arrays for fast evaluation of v, Dv and Γv."""

    def __init__(self, rf: RateFunction):
        net = rf.network
        n, m = net.n_species, net.n_reactions
        self.n, self.m = n, m
        self.gamma = stoichiometric_matrix(net).to_numpy()
        self.left = np.zeros((m, n))
        self.right = np.zeros((m, n))
        self.forward = np.zeros(m)
        self.reverse = np.zeros(m)
        for j, kinetics in enumerate(rf.reactions):
            for i, a in kinetics.left_exponents.items():
                self.left[j, i] = a
            for i, b in kinetics.right_exponents.items():
                self.right[j, i] = b
            self.forward[j] = kinetics.forward
            self.reverse[j] = kinetics.reverse or 0.0
        self.sign = -1.0 if rf.negated else 1.0

    def rates(self, x: np.ndarray) -> np.ndarray:
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        forward = self.forward * np.prod(x ** self.left, axis=1)
        backward = self.reverse * np.prod(x ** self.right, axis=1)
        return self.sign * (forward - backward)

    @staticmethod
    def _monomial_gradient(x: np.ndarray, exponents: np.ndarray) -> np.ndarray:
        """∂/∂x_i of ∏_l x_l^e_l, one row per reaction."""
        m, n = exponents.shape
        grad = np.zeros((m, n))
        for j in range(m):
            for i in np.nonzero(exponents[j])[0]:
                e = exponents[j].copy()
                coefficient = e[i]
                e[i] -= 1.0
                grad[j, i] = coefficient * np.prod(x ** e)
        return grad

    def rate_jacobian(self, x: np.ndarray) -> np.ndarray:
        """Dv, an m × n matrix."""
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        forward = self.forward[:, None] * self._monomial_gradient(x, self.left)
        backward = self.reverse[:, None] * self._monomial_gradient(x, self.right)
        return self.sign * (forward - backward)

    def field(self, x: np.ndarray) -> np.ndarray:
        return self.gamma @ self.rates(x)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return self.gamma @ self.rate_jacobian(x)


def compiled(rf: RateFunction) -> CompiledRates:
    if rf._compiled is None:
        rf._compiled = CompiledRates(rf)
    return rf._compiled


def rates(rf: RateFunction, x: Sequence[float]) -> np.ndarray:
    return compiled(rf).rates(np.asarray(x, dtype=float))


def vector_field(rf: RateFunction, x: Sequence[float]) -> np.ndarray:
    return compiled(rf).field(np.asarray(x, dtype=float))


def jacobian(rf: RateFunction, x: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """(Dv(x), ΓDv(x)) from analytic derivatives."""
    model = compiled(rf)
    dv = model.rate_jacobian(np.asarray(x, dtype=float))
    return dv, model.gamma @ dv


# ============================================================
# ✅ KINETIC ASSUMPTIONS
# ============================================================
def _sample_points(n: int, rng: np.random.Generator, samples: int) -> List[np.ndarray]:
    """Interior points, then points on each coordinate hyperplane."""
    points = [rng.uniform(0.05, 3.0, size=n) for _ in range(samples)]
    for i in range(n):
        for _ in range(max(1, samples // max(n, 1))):
            x = rng.uniform(0.05, 3.0, size=n)
            x[i] = 0.0
            points.append(x)
    return points


def validate_kinetics(rf: RateFunction, rng: np.random.Generator, samples: int = 100) -> List[str]:
    """
    Check the sign and boundary clauses every admissible rate function
    satisfies at sampled orthant points; returns readable violations.
    """
    net = rf.network
    model = compiled(rf)
    violations: List[str] = []

    def report(clause: str, j: int, x: np.ndarray) -> None:
        if len(violations) < 50:
            violations.append(f"{clause}: reaction {j + 1} at x={np.array2string(x, precision=3)}")

    for x in _sample_points(net.n_species, rng, samples):
        v = model.rates(x)
        dv = model.rate_jacobian(x)
        for j, reaction in enumerate(net.reactions):
            for i in range(net.n_species):
                g = model.gamma[i, j]
                if g == 0 and dv[j, i] != 0:
                    report("K1 (zero pattern)", j, x)
                elif g * dv[j, i] > 0:
                    report("K1 (sign)", j, x)

            left_zero = any(x[i] == 0 for i in reaction.left)
            right_zero = any(x[i] == 0 for i in reaction.right)
            if not reaction.reversible:
                if v[j] < 0 or (v[j] == 0) != left_zero:
                    report("K2(i)", j, x)
                if not left_zero and any(dv[j, i] <= 0 for i in reaction.left):
                    report("K2(ii)", j, x)
                continue

            if (left_zero and v[j] > 0) or (right_zero and v[j] < 0):
                report("K3(i)", j, x)
            if left_zero and (v[j] < 0) != (not right_zero):
                report("K3(ii)", j, x)
            if right_zero and (v[j] > 0) != (not left_zero):
                report("K3(ii)", j, x)
            if not left_zero and any(dv[j, i] <= 0 for i in reaction.left):
                report("K3(iii)", j, x)
            if not right_zero and any(dv[j, i] >= 0 for i in reaction.right):
                report("K3(iii)", j, x)
    return violations
