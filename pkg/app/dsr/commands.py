# app/dsr/commands.py

from app.dsr.services import build_dsr, strongly_connected_components, to_dot
from app.reactions.services import load_network, stoichiometric_matrix
from pathlib import Path
import argparse
import logging
import sys

logger = logging.getLogger(__name__)


def dsr_command(args: argparse.Namespace) -> int:
    net = load_network(args.file)
    graph = build_dsr(net, stoichiometric_matrix(net))
    dot = to_dot(graph)
    if args.dot:
        Path(args.dot).write_text(dot, encoding="utf-8")
        logger.info("DSR graph written to %s", args.dot)
        components = strongly_connected_components(graph)
        print(f"{len(graph.vertices)} vertices, {len(graph.arcs)} arcs, {len(components)} strongly connected components")
    else:
        sys.stdout.write(dot)
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("dsr", help="export the DSR graph as DOT")
    parser.add_argument("file")
    parser.add_argument("--dot", help="DOT output path (stdout when omitted)")
    parser.set_defaults(handler=dsr_command)
