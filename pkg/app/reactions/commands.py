# app/reactions/commands.py

from app.reactions.services import format_network, load_network, network_to_json
import argparse
import sys


def parse_command(args: argparse.Namespace) -> int:
    """Echo the network as canonical JSON (or DSL with --dsl)."""
    net = load_network(args.file)
    sys.stdout.write(format_network(net) if args.dsl else network_to_json(net) + "\n")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("parse", help="parse a network file and echo it canonically")
    parser.add_argument("file")
    parser.add_argument("--dsl", action="store_true", help="print canonical DSL instead of JSON")
    parser.set_defaults(handler=parse_command)
