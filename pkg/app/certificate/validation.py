# app/certificate/validation.py

from app.kinetics.services import (
    check_order_preservation,
    extremal_mapping_oracle,
    pullback_metzler_check,
    conservation_residual,
    multistart_equilibria,
    max_pairwise_distance,
    random_interior_point,
    ordered_partner,
    integrate,
)
from app.kinetics.rates import jacobian, make_power_law, make_random_mass_action, rates, validate_kinetics
from app.certificate.schemas import Certificate, ValidationCheck, ValidationReport
from app.kinetics.schemas import IntegrationOptions, KineticsKind, RateFunction
from app.order.services import cone_order
from app.core.config import settings
from app.core.exceptions import IntegrationError, NetworkValidationError
from app.reactions.schemas import Network
from typing import Callable, List, Optional
import numpy as np
import logging

logger = logging.getLogger(__name__)

KINETIC_SAMPLES = 50
METZLER_SAMPLES = 100
ORDER_PAIRS = 3
ORDER_T_END = 20.0
CONSERVATION_T_END = 50.0
MULTISTART_STARTS = 8
MULTISTART_T_END = 200.0
CONVERGENCE_DISTANCE = 1e-5
H_DRIFT_BUDGET = 1e-7


def build_rate_function(net: Network, kinetics: KineticsKind, seed: int) -> RateFunction:
    if kinetics == "power-law":
        return make_power_law(net, seed)
    return make_random_mass_action(net, seed)


def _orthant_points(n: int, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    """Interior points, every fourth one pushed onto a coordinate hyperplane."""
    points = []
    for k in range(count):
        x = random_interior_point(n, rng, 0.1, 3.0)
        if k % 4 == 3:
            x[rng.integers(n)] = 0.0
        points.append(x)
    return points


# ============================================================
# ✅ INDIVIDUAL CHECKS
# ============================================================
def check_kinetics(rf: RateFunction, rng: np.random.Generator) -> ValidationCheck:
    violations = validate_kinetics(rf, rng, KINETIC_SAMPLES)
    return ValidationCheck(
        name="kinetic sign and boundary conditions",
        passed=not violations,
        detail="; ".join(violations[:3]),
        contradicts="A1",
    )


def check_conservation(cert: Certificate, rf: RateFunction, rng: np.random.Generator) -> List[ValidationCheck]:
    net, h = cert.network, cert.integral
    worst = 0.0
    for _ in range(20):
        x = random_interior_point(net.n_species, rng)
        scale = 1.0 + float(np.max(np.abs(rates(rf, x))))
        worst = max(worst, abs(conservation_residual(rf, h, x)) / scale)
    pointwise = ValidationCheck(
        name="H is a first integral (pointwise)",
        passed=worst <= 1e-12,
        detail=f"max |H(Γv(x))| = {worst:.3e}",
        contradicts="A3",
    )

    x0 = random_interior_point(net.n_species, rng)
    trajectory = integrate(net, rf, x0, CONSERVATION_T_END, IntegrationOptions(integral=h))
    values = [d.h_value for d in trajectory.diagnostics]
    drift = max(abs(v - values[0]) for v in values)
    along = ValidationCheck(
        name="H is conserved along a trajectory",
        passed=drift <= H_DRIFT_BUDGET * (1.0 + abs(values[0])),
        detail=f"drift {drift:.3e} over t = {CONSERVATION_T_END:g}",
        contradicts="A3",
    )
    return [pointwise, along]


def check_quasipositivity(cert: Certificate, rf: RateFunction, rng: np.random.Generator) -> List[ValidationCheck]:
    net, f = cert.network, cert.factorization
    metzler_failures = irreducible_failures = disagreements = 0
    for x in _orthant_points(net.n_species, rng, METZLER_SAMPLES):
        dv, _ = jacobian(rf, x)
        quasipositive, irreducible = pullback_metzler_check(f, dv)
        metzler_failures += not quasipositive
        disagreements += quasipositive != extremal_mapping_oracle(f, dv)
        if np.all(x > 0):
            irreducible_failures += not irreducible
    checks = [
        ValidationCheck(
            name="ΘDvΛ is Metzler",
            passed=metzler_failures == 0,
            detail=f"{metzler_failures} of {METZLER_SAMPLES} points fail",
            contradicts="A3",
        ),
        ValidationCheck(
            name="Metzler test agrees with the extremal-ray oracle",
            passed=disagreements == 0,
            detail=f"{disagreements} disagreements",
            contradicts="A3",
        ),
    ]
    if cert.passed("A4"):
        checks.append(
            ValidationCheck(
                name="ΘDvΛ is irreducible in the interior",
                passed=irreducible_failures == 0,
                detail=f"{irreducible_failures} interior points fail",
                contradicts="A4",
            )
        )
    return checks


def check_order(cert: Certificate, rf: RateFunction, rng: np.random.Generator) -> ValidationCheck:
    net = cert.network
    order = cone_order(cert.factorization)
    opts = IntegrationOptions(samples=51)
    broken = 0
    for _ in range(ORDER_PAIRS):
        x0 = random_interior_point(net.n_species, rng)
        y0 = ordered_partner(order, x0, rng.uniform(0.0, 0.2, size=order.r))
        lower = integrate(net, rf, x0, ORDER_T_END, opts)
        upper = integrate(net, rf, y0, ORDER_T_END, opts)
        broken += not check_order_preservation(order, lower, upper)
    return ValidationCheck(
        name="cone order is preserved",
        passed=broken == 0,
        detail=f"{broken} of {ORDER_PAIRS} ordered pairs lose their order",
        contradicts="A3",
    )


def check_convergence(cert: Certificate, rf: RateFunction, rng: np.random.Generator) -> ValidationCheck:
    net = cert.network
    c = random_interior_point(net.n_species, rng)
    equilibria = multistart_equilibria(net, rf, c, MULTISTART_STARTS, MULTISTART_T_END, rng)
    distance = max_pairwise_distance(equilibria)
    return ValidationCheck(
        name="starts on one stoichiometry class share a limit",
        passed=distance < CONVERGENCE_DISTANCE,
        detail=f"max pairwise distance {distance:.3e}",
        contradicts="global",
    )


# ============================================================
# ✅ SUITE
# ============================================================
def _guarded(name: str, contradicts: str, run: Callable[[], List[ValidationCheck]]) -> List[ValidationCheck]:
    """An integration breakdown fails the check instead of aborting the suite."""
    try:
        return run()
    except IntegrationError as exc:
        logger.warning("%s: integration failed: %s", name, exc.detail)
        return [ValidationCheck(name=name, passed=False, detail=f"integration failed: {exc.detail}", contradicts=contradicts)]


def run_validation(
    net: Network, cert: Certificate, kinetics: KineticsKind = "mass-action", seed: Optional[int] = None
) -> ValidationReport:
    """
    Empirical checks of the certified claims under one admissible kinetics.
    The verdict is never changed; a failed check is reported as a
    contradiction of the claim it tests.
    """
    if cert.network != net:
        raise NetworkValidationError("the certificate was issued for a different network")
    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    rf = build_rate_function(net, kinetics, seed)
    report = ValidationReport(kinetics=kinetics, seed=seed, verdict=cert.verdict)

    report.checks.append(check_kinetics(rf, rng))
    if cert.factorization is not None and cert.integral is not None:
        report.checks += _guarded("H is conserved", "A3", lambda: check_conservation(cert, rf, rng))
        report.checks += check_quasipositivity(cert, rf, rng)
        report.checks += _guarded("cone order is preserved", "A3", lambda: [check_order(cert, rf, rng)])
    if cert.verdict == "global":
        report.checks += _guarded(
            "starts on one stoichiometry class share a limit", "global", lambda: [check_convergence(cert, rf, rng)]
        )

    for check in report.checks:
        logger.info("%s: %s %s", check.name, "ok" if check.passed else "FAILED", check.detail)
    return report
