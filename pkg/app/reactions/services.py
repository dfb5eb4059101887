# app/reactions/services.py

from app.reactions.grammar import ParsedTerm, parse_reaction_line, reaction_lines
from app.core.exceptions import NetworkSyntaxError, NetworkValidationError
from app.reactions.schemas import Network, Reaction, Species
from typing import Dict, List, Sequence, Tuple, Union
from app.linalg.matrix import RationalMatrix
from pydantic import ValidationError
from pathlib import Path
import pyparsing
import logging

logger = logging.getLogger(__name__)


# ============================================================
# ✅ PARSE
# ============================================================
def _collect_side(
    terms: Sequence[ParsedTerm], index: Dict[str, int], species: List[str]
) -> Dict[int, int]:
    side: Dict[int, int] = {}
    for term in terms:
        if term.species not in index:
            index[term.species] = len(species)
            species.append(term.species)
        i = index[term.species]
        side[i] = side.get(i, 0) + term.coefficient
    return side


def _reaction_key(reaction: Reaction) -> Tuple:
    return (tuple(sorted(reaction.left.items())), tuple(sorted(reaction.right.items())), reaction.reversible)


def _warn_duplicates(net: Network) -> None:
    seen: Dict[Tuple, int] = {}
    for j, reaction in enumerate(net.reactions):
        keys = [_reaction_key(reaction)]
        if reaction.reversible:
            keys.append(_reaction_key(reaction.swapped()))
        first = next((seen[k] for k in keys if k in seen), None)
        if first is not None:
            logger.warning("reaction %d duplicates reaction %d", j + 1, first + 1)
        else:
            seen[keys[0]] = j


def parse_network(text: str) -> Network:
    """Parse DSL text; species are numbered in order of first appearance."""
    lines = reaction_lines(text or "")
    if not lines:
        raise NetworkSyntaxError("empty input", line=1, column=1)

    index: Dict[str, int] = {}
    species: List[str] = []
    reactions: List[Reaction] = []
    for number, line in lines:
        try:
            parsed = parse_reaction_line(line)
        except pyparsing.ParseBaseException as exc:
            raise NetworkSyntaxError(exc.msg, line=number, column=exc.column) from exc

        left = _collect_side(parsed.left, index, species)
        right = _collect_side(parsed.right, index, species)
        if not left and not right:
            raise NetworkSyntaxError("reaction has no species on either side", line=number, column=1)
        both = [species[i] for i in left if i in right]
        if both:
            raise NetworkValidationError(f"line {number}: species {', '.join(both)} on both sides of a reaction")
        reactions.append(Reaction(left=left, right=right, reversible=parsed.reversible))

    net = build_network(species, reactions)
    _warn_duplicates(net)
    logger.debug("parsed network: %d species, %d reactions", net.n_species, net.n_reactions)
    return net


def build_network(names: Sequence[str], reactions: Sequence[Reaction]) -> Network:
    try:
        return Network(
            species=tuple(Species(name=name, index=i) for i, name in enumerate(names)),
            reactions=tuple(reactions),
        )
    except ValidationError as exc:
        raise NetworkValidationError(f"invalid network: {exc.errors()[0]['msg']}") from exc


def load_network(path: Union[str, Path]) -> Network:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise NetworkValidationError(f"cannot read {path}: {exc.strerror}") from exc
    if path.suffix == ".json":
        return network_from_json(text)
    net = parse_network(text)
    logger.info("read %s: %d species, %d reactions", path, net.n_species, net.n_reactions)
    return net


# ============================================================
# ✅ STOICHIOMETRY
# ============================================================
def stoichiometric_matrix(net: Network) -> RationalMatrix:
    """Γ_ij = right_j(i) − left_j(i)."""
    rows = [[0] * net.n_reactions for _ in range(net.n_species)]
    for j, reaction in enumerate(net.reactions):
        for i, k in reaction.left.items():
            rows[i][j] -= k
        for i, k in reaction.right.items():
            rows[i][j] += k
    return RationalMatrix(rows, net.n_reactions)


# ============================================================
# ✅ SERIALIZATION
# ============================================================
def _format_side(net: Network, side: Dict[int, int]) -> str:
    terms = []
    for i, k in side.items():
        name = net.species[i].name
        terms.append(name if k == 1 else f"{k} {name}")
    return " + ".join(terms)


def format_reaction(net: Network, reaction: Reaction) -> str:
    arrow = "<->" if reaction.reversible else "->"
    return " ".join(part for part in (_format_side(net, reaction.left), arrow, _format_side(net, reaction.right)) if part)


def format_network(net: Network) -> str:
    """Canonical DSL text; re-parsing it gives back a network equal to `net`
    whenever `net` lists its species in first-appearance order (as parsed
    networks do)."""
    return "\n".join(format_reaction(net, r) for r in net.reactions) + "\n"


def network_to_json(net: Network, indent: int = 2) -> str:
    return net.model_dump_json(indent=indent)


def network_from_json(text: str) -> Network:
    try:
        return Network.model_validate_json(text)
    except ValidationError as exc:
        raise NetworkValidationError(f"invalid network JSON: {exc.errors()[0]['msg']}") from exc
