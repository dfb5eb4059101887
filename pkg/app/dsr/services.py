# app/dsr/services.py

from app.dsr.schemas import DsrArc, DsrGraph, DsrSummary, reaction_vertex, species_vertex
from app.reactions.schemas import Network
from app.linalg.matrix import RationalMatrix
from app.helpers.rational import sign
from typing import List
import networkx as nx
import logging

logger = logging.getLogger(__name__)


# ============================================================
# ✅ BUILD
# ============================================================
def build_dsr(net: Network, gamma: RationalMatrix) -> DsrGraph:
    """
    R_j → S_i whenever Γ_ij ≠ 0, signed like Γ_ij.
    S_i → R_j whenever v_j depends on x_i at interior points: every
    participant of a reversible reaction, only the reactants of an
    irreversible one. Signed like −Γ_ij.
    """
    arcs: List[DsrArc] = []
    for j, reaction in enumerate(net.reactions):
        r = reaction_vertex(j)
        for i in range(net.n_species):
            if gamma[i, j] != 0:
                arcs.append(DsrArc(source=r, target=species_vertex(net.species[i].name), sign=sign(gamma[i, j])))
        sensitive = reaction.participants if reaction.reversible else sorted(reaction.left)
        for i in sensitive:
            arcs.append(DsrArc(source=species_vertex(net.species[i].name), target=r, sign=-sign(gamma[i, j])))
    graph = DsrGraph(species_names=tuple(net.species_names), n_reactions=net.n_reactions, arcs=tuple(arcs))
    logger.debug("DSR graph: %d vertices, %d arcs", len(graph.vertices), len(arcs))
    return graph


def to_networkx(g: DsrGraph) -> nx.DiGraph:
    digraph = nx.DiGraph()
    for name in g.species_vertices:
        digraph.add_node(name, kind="species")
    for name in g.reaction_vertices:
        digraph.add_node(name, kind="reaction")
    for arc in g.arcs:
        digraph.add_edge(arc.source, arc.target, sign=arc.sign)
    return digraph


# ============================================================
# ✅ CONNECTIVITY
# ============================================================
def is_strongly_connected(g: DsrGraph) -> bool:
    if not g.vertices:
        return False
    return nx.is_strongly_connected(to_networkx(g))


def strongly_connected_components(g: DsrGraph) -> List[List[str]]:
    """SCCs in topological order of the condensation, vertices sorted within each."""
    digraph = to_networkx(g)
    if digraph.number_of_nodes() == 0:
        return []
    condensed = nx.condensation(digraph)
    return [sorted(condensed.nodes[c]["members"]) for c in nx.topological_sort(condensed)]


def summarize(g: DsrGraph) -> DsrSummary:
    components = strongly_connected_components(g)
    return DsrSummary(
        graph=g,
        strongly_connected=len(components) == 1,
        scc_count=len(components),
        components=tuple(tuple(c) for c in components),
    )


# ============================================================
# ✅ DOT EXPORT
# ============================================================
def to_dot(g: DsrGraph) -> str:
    lines = ["digraph dsr {"]
    for name in g.species_vertices:
        lines.append(f'  "{name}" [shape=ellipse];')
    for name in g.reaction_vertices:
        lines.append(f'  "{name}" [shape=rectangle];')
    for arc in g.arcs:
        style = "solid" if arc.sign > 0 else "dashed"
        lines.append(f'  "{arc.source}" -> "{arc.target}" [style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
