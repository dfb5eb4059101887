# app/kinetics/commands.py

from app.kinetics.services import (
    check_order_preservation,
    random_interior_point,
    trajectory_to_csv,
    ordered_partner,
    diagnostics,
    integrate,
)
from app.kinetics.rates import make_mass_action, make_power_law
from app.reactions.services import load_network, stoichiometric_matrix
from app.core.exceptions import DimensionMismatch, OrderError
from app.kinetics.schemas import IntegrationOptions
from app.order.services import cone_order, integral
from app.factorization.services import factorize
from app.core.config import settings
from pathlib import Path
import numpy as np
import argparse
import logging
import sys

logger = logging.getLogger(__name__)

PAIR_OFFSET = 0.1


def parse_x0(value: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if value == "random-interior":
        return random_interior_point(n, rng)
    try:
        x0 = np.array([float(a) for a in value.split(",")])
    except ValueError as exc:
        raise DimensionMismatch(f"--x0 must be 'random-interior' or comma-separated numbers: {value!r}", exit_code=2) from exc
    if x0.shape != (n,):
        raise DimensionMismatch(f"--x0 needs {n} values, got {x0.size}", exit_code=2)
    if not np.all(np.isfinite(x0)) or np.any(x0 < 0):
        raise DimensionMismatch(f"--x0 must be finite and nonnegative: {value!r}", exit_code=2)
    return x0


def simulate(args: argparse.Namespace) -> int:
    """
    Run one trajectory (or an ordered pair with --pair) and emit CSV plus
    optional diagnostics JSON.
    """
    net = load_network(args.file)
    rng = np.random.default_rng(args.seed)
    if args.kinetics == "power-law":
        rf = make_power_law(net, args.seed)
    else:
        constants = [args.rate_constant] * net.n_reactions
        rf = make_mass_action(net, constants, constants)

    f = factorize(stoichiometric_matrix(net))
    h = integral(f) if f is not None else None
    opts = IntegrationOptions(samples=args.samples, integral=h)
    x0 = parse_x0(args.x0, net.n_species, rng)
    trajectory = integrate(net, rf, x0, args.t_end, opts)

    preserved = None
    if args.pair:
        if f is None:
            raise OrderError("--pair needs a factorization of Γ; none exists for this network")
        order = cone_order(f)
        y0 = ordered_partner(order, x0, [PAIR_OFFSET] * order.r)
        partner = integrate(net, rf, y0, args.t_end, opts)
        preserved = check_order_preservation(order, trajectory, partner)
        print(f"order preserved: {'yes' if preserved else 'no'}", file=sys.stderr)

    text = trajectory_to_csv(trajectory, net.species_names, h)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        logger.info("trajectory written to %s", args.out)
    else:
        sys.stdout.write(text)

    if args.diagnostics:
        report = diagnostics(trajectory, rf, args.t_end, seed=args.seed, order_preserved=preserved)
        Path(args.diagnostics).write_text(report.model_dump_json(indent=2), encoding="utf-8")
        logger.info("diagnostics written to %s", args.diagnostics)
    return 1 if preserved is False else 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("simulate", help="integrate the network ODE")
    parser.add_argument("file")
    parser.add_argument("--kinetics", choices=["mass-action", "power-law"], default="mass-action")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--rate-constant", type=float, default=1.0, help="mass-action rate constant for every reaction")
    parser.add_argument("--x0", default="random-interior", help="'random-interior' or comma-separated values")
    parser.add_argument("--t-end", type=float, required=True)
    parser.add_argument("--samples", type=int, default=101)
    parser.add_argument("--pair", action="store_true", help="also run an ordered partner and report order preservation")
    parser.add_argument("--out", help="CSV path (stdout when omitted)")
    parser.add_argument("--diagnostics", help="diagnostics JSON path")
    parser.set_defaults(handler=simulate)
