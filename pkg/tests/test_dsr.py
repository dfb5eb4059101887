# tests/test_dsr.py

from app.dsr.services import build_dsr, is_strongly_connected, strongly_connected_components, summarize, to_dot
from app.reactions.services import load_network, parse_network, stoichiometric_matrix
from tests.conftest import network_path, random_network
from app.dsr.schemas import DsrArc, DsrGraph
from pydantic import ValidationError
import pytest


def graph_of(net):
    return build_dsr(net, stoichiometric_matrix(net))


def test_reversible_network_has_arcs_both_ways(ex1):
    g = graph_of(ex1)
    assert len(g.vertices) == 7
    assert len(g.arcs) == 16
    assert DsrArc(source="R:1", target="S:A", sign=-1) in g.arcs
    assert DsrArc(source="S:A", target="R:1", sign=1) in g.arcs


def test_irreversible_reaction_only_listens_to_reactants():
    net = parse_network("A -> B")
    arcs = set(graph_of(net).arcs)
    assert arcs == {
        DsrArc(source="R:1", target="S:A", sign=-1),
        DsrArc(source="R:1", target="S:B", sign=1),
        DsrArc(source="S:A", target="R:1", sign=1),
    }


@pytest.mark.parametrize("name", ["ex1.rxn", "ex2.rxn", "ex3.rxn", "trapped.rxn", "appendix_c.json"])
def test_strongly_connected_examples(name):
    g = graph_of(load_network(network_path(name)))
    assert is_strongly_connected(g)
    assert summarize(g).scc_count == 1


def test_components_in_topological_order():
    g = graph_of(load_network(network_path("one_way_chain.rxn")))
    assert not is_strongly_connected(g)
    assert strongly_connected_components(g) == [["R:1", "S:A"], ["R:2", "S:B", "S:C"]]
    summary = summarize(g)
    assert not summary.strongly_connected
    assert summary.scc_count == 2


def test_disconnected_network():
    g = graph_of(load_network(network_path("disconnected.rxn")))
    assert summarize(g).scc_count == 2


def test_graph_rejects_species_species_arc():
    with pytest.raises(ValidationError):
        DsrGraph(species_names=("A", "B"), n_reactions=1, arcs=(DsrArc(source="S:A", target="S:B", sign=1),))


def test_dot_export(ex1):
    dot = to_dot(graph_of(ex1))
    assert dot.startswith("digraph dsr {")
    assert '"R:1" [shape=rectangle];' in dot
    assert '"R:1" -> "S:A" [style=dashed];' in dot
    assert dot.rstrip().endswith("}")


# ============================================================
# ✅ CONNECTIVITY ORACLES
# ============================================================
def reachability(g):
    """Transitive closure by Floyd–Warshall."""
    vertices = list(g.vertices)
    position = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    reach = [[i == j for j in range(n)] for i in range(n)]
    for arc in g.arcs:
        reach[position[arc.source]][position[arc.target]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    reach[i][j] = reach[i][j] or reach[k][j]
    return reach


def weakly_connected(g):
    parent = {v: v for v in g.vertices}

    def root(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for arc in g.arcs:
        parent[root(arc.source)] = root(arc.target)
    return len({root(v) for v in g.vertices}) == 1


def test_strong_connectivity_matches_reachability(rng):
    for _ in range(200):
        net = random_network(rng, int(rng.integers(2, 7)), int(rng.integers(1, 7)), reversible=None)
        g = graph_of(net)
        assert len(g.vertices) <= 12
        reach = reachability(g)
        assert is_strongly_connected(g) == all(all(row) for row in reach)


def test_reversible_networks_are_strongly_connected_when_weakly_connected(rng):
    for _ in range(200):
        g = graph_of(random_network(rng, int(rng.integers(2, 9)), int(rng.integers(1, 7))))
        assert is_strongly_connected(g) == weakly_connected(g)


@pytest.mark.parametrize(
    "name", ["ex1.rxn", "ex2.rxn", "ex3.rxn", "trapped.rxn", "one_way_chain.rxn", "appendix_c.json"]
)
def test_reaction_to_species_arcs_match_nonzeros(name):
    net = load_network(network_path(name))
    gamma = stoichiometric_matrix(net)
    g = build_dsr(net, gamma)
    assert sum(1 for arc in g.arcs if arc.source.startswith("R:")) == gamma.nonzero_count()


def test_arc_count_on_random_networks(rng):
    for _ in range(50):
        net = random_network(rng, 6, 4, reversible=None)
        gamma = stoichiometric_matrix(net)
        g = graph_of(net)
        reactant_arcs = sum(len(r.participants) if r.reversible else len(r.left) for r in net.reactions)
        assert sum(1 for arc in g.arcs if arc.source.startswith("R:")) == gamma.nonzero_count()
        assert len(g.arcs) == gamma.nonzero_count() + reactant_arcs
