# tests/test_reactions.py

from app.reactions.services import (
    network_from_json,
    network_to_json,
    format_network,
    parse_network,
    stoichiometric_matrix,
    load_network,
)
from app.core.exceptions import NetworkSyntaxError, NetworkValidationError
from app.linalg.matrix import RationalMatrix
from tests.conftest import EX1_GAMMA, EX3_GAMMA, APPENDIX_C_GAMMA
import logging
import pytest


def test_species_numbered_by_first_appearance(ex1):
    assert ex1.species_names == ["A", "B", "C", "D"]
    assert ex1.n_reactions == 3
    assert ex1.all_reversible


def test_stoichiometric_matrices(ex1, ex3, appendix_c):
    assert stoichiometric_matrix(ex1) == RationalMatrix(EX1_GAMMA)
    assert stoichiometric_matrix(ex3) == RationalMatrix(EX3_GAMMA)
    assert stoichiometric_matrix(appendix_c) == RationalMatrix(APPENDIX_C_GAMMA)


def test_irreversible_reactions_recorded(ex3):
    assert [r.reversible for r in ex3.reactions] == [True, False, True, False]
    assert not ex3.all_reversible


def test_coefficients_accumulate():
    net = parse_network("A + A -> 3B\n2 B <-> C")
    assert dict(net.reactions[0].left) == {0: 2}
    assert dict(net.reactions[0].right) == {1: 3}
    assert stoichiometric_matrix(net) == RationalMatrix([[-2, 0], [3, -2], [0, 1]])


def test_comments_and_blank_lines_ignored():
    net = parse_network("# header\n\nA -> B  # trailing\n")
    assert net.n_reactions == 1


def test_empty_side_is_an_inflow():
    net = parse_network("-> A\nA -> B")
    assert dict(net.reactions[0].left) == {}
    assert stoichiometric_matrix(net).column(0) == (1, 0)


def test_syntax_error_reports_line():
    with pytest.raises(NetworkSyntaxError) as info:
        parse_network("A -> B\nA <- B")
    assert info.value.line == 2
    assert info.value.exit_code == 2


def test_zero_coefficient_rejected():
    with pytest.raises(NetworkSyntaxError):
        parse_network("0 A -> B")


def test_empty_input_rejected():
    with pytest.raises(NetworkSyntaxError):
        parse_network("# only a comment\n")


def test_species_on_both_sides_rejected():
    with pytest.raises(NetworkValidationError):
        parse_network("A + B -> A")


def test_duplicate_reaction_warns(caplog):
    with caplog.at_level(logging.WARNING):
        parse_network("A <-> B\nB <-> A")
    assert "duplicates reaction 1" in caplog.text


def test_dsl_round_trip(ex3):
    assert parse_network(format_network(ex3)) == ex3


def test_json_round_trip(appendix_c):
    assert network_from_json(network_to_json(appendix_c)) == appendix_c


def test_json_rejects_unknown_species_index():
    text = '{"species": [{"name": "A", "index": 0}], "reactions": [{"left": {"0": 1}, "right": {"3": 1}}]}'
    with pytest.raises(NetworkValidationError):
        network_from_json(text)


def test_json_rejects_idle_species():
    text = (
        '{"species": [{"name": "A", "index": 0}, {"name": "B", "index": 1}],'
        ' "reactions": [{"left": {"0": 1}, "right": {}}]}'
    )
    with pytest.raises(NetworkValidationError):
        network_from_json(text)


def test_missing_file(tmp_path):
    with pytest.raises(NetworkValidationError):
        load_network(tmp_path / "absent.rxn")
