# app/certificate/commands.py

from app.certificate.services import certificate_to_json, certify, render_report, verdict_exit_code
from app.certificate.recheck import load_certificate, recheck_certificate
from app.certificate.validation import run_validation
from app.reactions.services import load_network
from app.core.config import settings
from pathlib import Path
import argparse
import logging
import sys

logger = logging.getLogger(__name__)


def certify_command(args: argparse.Namespace) -> int:
    """Print the verdict and evidence; exit 0 global, 3 local, 4 none."""
    net = load_network(args.file)
    cert = certify(net)
    sys.stdout.write(render_report(cert))
    if args.json:
        Path(args.json).write_text(certificate_to_json(cert), encoding="utf-8")
        logger.info("certificate written to %s", args.json)
    return verdict_exit_code(cert)


def recheck_command(args: argparse.Namespace) -> int:
    cert = load_certificate(args.certificate)
    problems = recheck_certificate(cert)
    for problem in problems:
        print(f"problem: {problem}")
    if not problems:
        print(f"certificate ok (verdict {cert.verdict})")
    return 1 if problems else 0


def validate_command(args: argparse.Namespace) -> int:
    net = load_network(args.file)
    cert = certify(net)
    report = run_validation(net, cert, args.kinetics, args.seed)
    for check in report.checks:
        mark = "ok" if check.passed else "FAIL"
        print(f"{mark:<5} {check.name}: {check.detail}")
    if args.json:
        Path(args.json).write_text(report.model_dump_json(indent=2), encoding="utf-8")
    contradictions = report.contradictions
    if contradictions:
        print(f"{len(contradictions)} empirical check(s) contradict the certified claims (verdict {cert.verdict})")
        return 1
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    certify_parser = subparsers.add_parser("certify", help="decide conditions A3-A6 and report a verdict")
    certify_parser.add_argument("file")
    certify_parser.add_argument("--json", help="write the certificate JSON here")
    certify_parser.set_defaults(handler=certify_command)

    recheck_parser = subparsers.add_parser("recheck", help="re-verify a certificate JSON independently")
    recheck_parser.add_argument("certificate")
    recheck_parser.set_defaults(handler=recheck_command)

    validate_parser = subparsers.add_parser("validate", help="test certified claims by simulation")
    validate_parser.add_argument("file")
    validate_parser.add_argument("--kinetics", choices=["mass-action", "power-law"], default="mass-action")
    validate_parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    validate_parser.add_argument("--json", help="write the validation report JSON here")
    validate_parser.set_defaults(handler=validate_command)
