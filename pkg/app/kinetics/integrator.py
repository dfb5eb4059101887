# app/kinetics/integrator.py

from app.kinetics.schemas import IntegrationOptions, RateFunction, StepDiagnostics, Trajectory
from app.core.exceptions import DimensionMismatch, IntegrationError
from typing import Callable, List, Optional, Sequence, Tuple
from app.kinetics.rates import CompiledRates, compiled
from app.order.services import H_float
import numpy as np
import logging

logger = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
UNDERFLOW = 1e-14


# ============================================================
# ✅ RUNGE-KUTTA-FEHLBERG STEP
# ============================================================
def rkf45_step(f: Field, y0: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    One Fehlberg 4(5) step of an autonomous system.

    Returns the fifth-order update and the componentwise magnitude of the
    difference to the embedded fourth-order one.
    """
    k1 = f(y0)
    k2 = f(y0 + 0.25 * h * k1)
    k3 = f(y0 + 3.0 * h * k1 / 32.0 + 9.0 * h * k2 / 32.0)
    k4 = f(y0 + 1932.0 * h * k1 / 2197.0 - 7200.0 * h * k2 / 2197.0 + 7296.0 * h * k3 / 2197.0)
    k5 = f(y0 + 439.0 * h * k1 / 216.0 - 8.0 * h * k2 + 3680.0 * h * k3 / 513.0 - 845.0 * h * k4 / 4104.0)
    k6 = f(
        y0
        - 8.0 * h * k1 / 27.0
        + 2.0 * h * k2
        - 3544.0 * h * k3 / 2565.0
        + 1859.0 * h * k4 / 4104.0
        - 11.0 * h * k5 / 40.0
    )
    y1 = y0 + 16.0 * h * k1 / 135.0 + 6656.0 * h * k3 / 12825.0 + 28561.0 * h * k4 / 56430.0 - 9.0 * h * k5 / 50.0 + 2.0 * h * k6 / 55.0
    err = np.abs(h * k1 / 360.0 - 128.0 * h * k3 / 4275.0 - 2197.0 * h * k4 / 75240.0 + h * k5 / 50.0 + 2.0 * h * k6 / 55.0)
    return y1, err


def error_norm(err: np.ndarray, y0: np.ndarray, y1: np.ndarray, rtol: float, atol: float) -> float:
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.max(err / scale)) if err.size else 0.0


def step_factor(err_norm: float) -> float:
    if err_norm == 0.0:
        return MAX_FACTOR
    return min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err_norm ** -0.2))


# ============================================================
# ✅ NONNEGATIVITY GUARD
# ============================================================
def guard_nonnegative(model: CompiledRates, y1: np.ndarray, clamp: float) -> Optional[Tuple[np.ndarray, int]]:
    """
    None when the step must be rejected. Coordinates under the clamp
    threshold go to 0 where the flow on that face is tangent or inward.
    """
    if np.any(y1 < -clamp):
        return None
    low = np.nonzero((y1 < clamp) & (y1 != 0.0))[0]
    if low.size == 0:
        return y1, 0

    face = y1.copy()
    face[low] = 0.0
    flow = model.field(face)
    y = y1.copy()
    clamped = 0
    for i in low:
        if flow[i] >= 0.0:
            y[i] = 0.0
            clamped += 1
        elif y1[i] < 0.0:
            logger.warning("refused clamp of coordinate %d: flow points out of the orthant", i)
            return None
    return y, clamped


# ============================================================
# ✅ ADAPTIVE DRIVER
# ============================================================
def sample_times(t_end: float, opts: IntegrationOptions) -> List[float]:
    if opts.t_eval is None:
        return [float(t) for t in np.linspace(0.0, t_end, opts.samples)]
    times = [float(t) for t in opts.t_eval]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise DimensionMismatch("t_eval must be strictly increasing")
    if times[0] < 0.0 or times[-1] > t_end:
        raise DimensionMismatch("t_eval must lie in [0, t_end]")
    return times if times[0] == 0.0 else [0.0] + times


def initial_step(f: Field, y0: np.ndarray, span: float) -> float:
    d0 = float(np.max(np.abs(y0))) if y0.size else 0.0
    d1 = float(np.max(np.abs(f(y0)))) if y0.size else 0.0
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(h, span)


def integrate_rates(
    rf: RateFunction, x0: Sequence[float], t_end: float, opts: Optional[IntegrationOptions] = None
) -> Trajectory:
    """Adaptive RKF45 on ẋ = Γv(x) with samples at the requested times."""
    opts = opts or IntegrationOptions()
    model = compiled(rf)
    y = np.asarray(x0, dtype=float)
    if y.shape != (model.n,):
        raise DimensionMismatch(f"initial state must have length {model.n}")
    if np.any(y < 0):
        raise DimensionMismatch("initial state must be nonnegative")
    if t_end <= 0:
        raise DimensionMismatch("t_end must be positive")

    f = model.field
    samples = sample_times(t_end, opts)
    h = opts.initial_step or initial_step(f, y, samples[-1] / max(len(samples) - 1, 1))
    h_used = h

    def record(t: float, state: np.ndarray, step: float) -> StepDiagnostics:
        return StepDiagnostics(
            time=t,
            h_value=H_float(opts.integral, state) if opts.integral is not None else None,
            min_coordinate=float(np.min(state)) if state.size else 0.0,
            step_size=step,
        )

    t = 0.0
    times, states, diagnostics = [0.0], [tuple(y.tolist())], [record(0.0, y, 0.0)]
    index = 1
    accepted = rejected = clamped = 0

    while index < len(samples):
        if accepted + rejected >= opts.max_steps:
            raise IntegrationError(f"exceeded {opts.max_steps} steps", time=t, state=y.tolist())
        target = samples[index]
        h_try = min(h, target - t)
        if h_try < UNDERFLOW * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow (h = {h_try:.3e})", time=t, state=y.tolist())

        y1, err = rkf45_step(f, y, h_try)
        if not np.all(np.isfinite(y1)):
            rejected += 1
            h = 0.5 * h_try
            continue
        norm = error_norm(err, y, y1, opts.rtol, opts.atol)
        if norm > 1.0:
            rejected += 1
            h = h_try * step_factor(norm)
            logger.debug("rejected step at t=%g (error %g), retrying with h=%g", t, norm, h)
            continue
        guarded = guard_nonnegative(model, y1, opts.clamp_threshold)
        if guarded is None:
            rejected += 1
            h = 0.5 * h_try
            continue

        y, n_clamped = guarded
        clamped += n_clamped
        accepted += 1
        t = target if h_try == target - t else t + h_try
        h_used = h_try
        h = max(h, h_try * step_factor(norm)) if h_try < h else h_try * step_factor(norm)

        while index < len(samples) and t >= samples[index]:
            times.append(samples[index])
            states.append(tuple(y.tolist()))
            diagnostics.append(record(samples[index], y, h_used))
            index += 1

    logger.debug("integration done: %d accepted, %d rejected, %d clamped", accepted, rejected, clamped)
    return Trajectory(
        times=tuple(times),
        states=tuple(states),
        diagnostics=tuple(diagnostics),
        accepted_steps=accepted,
        rejected_steps=rejected,
        clamped=clamped,
    )
