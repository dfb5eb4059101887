# app/main.py

from app.certificate.commands import register as register_certificate_commands
from app.reactions.commands import register as register_reaction_commands
from app.kinetics.commands import register as register_kinetics_commands
from app.dsr.commands import register as register_dsr_commands
from app.core.logging import configure_logging
from app.core.exceptions import CertifyError
from typing import List, Optional
from app.core.config import settings
import argparse
import logging
import sys

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Certify stability of chemical reaction networks from their structure.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Command groups
    register_reaction_commands(subparsers)
    register_certificate_commands(subparsers)
    register_kinetics_commands(subparsers)
    register_dsr_commands(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point; returns the process exit code.
    """
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None)
    try:
        return args.handler(args)
    except CertifyError as exc:
        logger.debug("command %s failed: %s", args.command, exc.detail)
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
