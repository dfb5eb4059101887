# tests/test_persistence.py

from app.persistence.services import (
    verify_separation_certificate,
    verify_intersection_witness,
    enumerate_minimal_siphons,
    separation_certificate,
    intersection_witness,
    factor_certificate,
    project_off_face,
    is_mixed_column,
    tangent_faces,
    FAILURE_NOTE,
    face_status,
    complement,
    is_siphon,
    check_A6,
)
from app.reactions.services import load_network, parse_network, stoichiometric_matrix
from tests.conftest import network_path, random_network
from app.factorization.services import factorize
from app.core.exceptions import PersistenceError
from app.linalg.matrix import RationalMatrix
from app.core.config import settings
from itertools import combinations
import pytest

APPENDIX_C_CERTIFICATES = [
    ((1, 2, 4), (1, 0, 0, 1, 0)),
    ((0, 1, 4), (0, 0, 1, 1, 0)),
    ((1, 4), (1, 0, 1, 2, 0)),
    ((2, 3), (2, 2, 0, 0, 1)),
    ((0, 3), (0, 2, 2, 0, 1)),
    ((3,), (1, 2, 1, 0, 1)),
    ((2,), (3, 2, 0, 1, 1)),
    ((0,), (0, 2, 3, 1, 1)),
]


def siphon_sets(net):
    return [s.species for s in enumerate_minimal_siphons(net)]


# ============================================================
# ✅ SIPHONS
# ============================================================
def test_complement():
    assert complement(5, [1, 3]) == (0, 2, 4)


def test_is_siphon(ex1):
    assert is_siphon(ex1, [0, 2])
    assert not is_siphon(ex1, [0])
    assert not is_siphon(ex1, [])


def test_minimal_siphons_of_first_example(ex1):
    assert siphon_sets(ex1) == [(0, 1, 3), (0, 2)]


def test_minimal_siphons_of_futile_cycle(ex3):
    assert siphon_sets(ex3) == [(0, 2, 3, 5), (1, 2), (4, 5)]


def test_minimal_siphons_of_trapped_network(trapped):
    assert siphon_sets(trapped) == [(0,), (1, 2)]


def test_single_irreversible_reaction():
    net = parse_network("A -> B")
    assert siphon_sets(net) == [(0,)]
    assert not is_siphon(net, [1])


def brute_force_minimal_siphons(net):
    n = net.n_species
    siphons = [set(s) for size in range(1, n) for s in combinations(range(n), size) if is_siphon(net, s)]
    return sorted(tuple(sorted(s)) for s in siphons if not any(t < s for t in siphons))


@pytest.mark.parametrize(
    "name", ["ex1.rxn", "ex2.rxn", "ex3.rxn", "trapped.rxn", "one_way_chain.rxn", "appendix_c.json"]
)
def test_minimal_siphons_match_brute_force(name):
    net = load_network(network_path(name))
    found = siphon_sets(net)
    assert found == brute_force_minimal_siphons(net)
    for sigma in found:
        assert is_siphon(net, sigma)
        assert not any(is_siphon(net, sub) for size in range(1, len(sigma)) for sub in combinations(sigma, size))


def test_minimal_siphons_of_random_networks_match_brute_force(rng):
    for _ in range(40):
        net = random_network(rng, int(rng.integers(2, 8)), int(rng.integers(1, 6)), reversible=None)
        assert siphon_sets(net) == brute_force_minimal_siphons(net)


def test_siphon_search_limit(ex1, monkeypatch):
    monkeypatch.setattr(settings, "MAX_SIPHON_SPECIES", 3)
    with pytest.raises(PersistenceError):
        enumerate_minimal_siphons(ex1)


# ============================================================
# ✅ FACES
# ============================================================
def test_mixed_columns():
    assert is_mixed_column(RationalMatrix([[1, 0], [-1, 0]]))
    assert not is_mixed_column(RationalMatrix([[1, 1], [-1, 0]]))


def test_tangent_faces_of_reversible_network(appendix_c, appendix_c_gamma):
    faces = tangent_faces(appendix_c, appendix_c_gamma)
    assert set(faces) == {face for face, _ in APPENDIX_C_CERTIFICATES}


def assert_mixed_columns_match_siphons(net):
    gamma = stoichiometric_matrix(net)
    n = net.n_species
    for size in range(1, n):
        for face in combinations(range(n), size):
            mixed = is_mixed_column(project_off_face(gamma, face))
            assert mixed == is_siphon(net, complement(n, face)), face


@pytest.mark.parametrize("name", ["ex1", "ex2", "appendix_c"])
def test_mixed_columns_match_siphons_on_examples(request, name):
    assert_mixed_columns_match_siphons(request.getfixturevalue(name))


def test_mixed_columns_match_siphons_on_random_reversible_networks(rng):
    for _ in range(40):
        assert_mixed_columns_match_siphons(random_network(rng, int(rng.integers(2, 7)), int(rng.integers(1, 5))))


def test_face_status_of_siphon_complement(ex3, ex3_gamma):
    assert face_status(ex3, ex3_gamma, (0, 3, 4, 5)) == "tangent"
    assert face_status(ex3, ex3_gamma, (1, 2, 3, 4, 5)) == "repelling"


def test_face_status_rejects_improper_sets(ex3, ex3_gamma):
    with pytest.raises(PersistenceError):
        face_status(ex3, ex3_gamma, ())
    with pytest.raises(PersistenceError):
        face_status(ex3, ex3_gamma, range(6))


# ============================================================
# ✅ CERTIFICATES
# ============================================================
def test_factor_certificates_of_futile_cycle(ex3_factorization):
    assert factor_certificate(ex3_factorization, complement(6, (1, 2))) == (0, 1, 1, 0, 0, 0)
    assert factor_certificate(ex3_factorization, complement(6, (4, 5))) == (0, 0, 0, 0, 1, 1)
    assert factor_certificate(ex3_factorization, complement(6, (0, 2, 3, 5))) == (1, 0, 1, 1, 0, 1)


def test_factor_certificates_with_non_unit_entries(appendix_c_factorization, appendix_c_gamma):
    w1 = factor_certificate(appendix_c_factorization, (1, 2, 4))
    w4 = factor_certificate(appendix_c_factorization, (2, 3))
    assert w1 == (1, 0, 0, 1, 0)
    assert w4 == (2, 2, 0, 0, 1)
    assert verify_separation_certificate(appendix_c_gamma, (1, 2, 4), w1)
    assert verify_separation_certificate(appendix_c_gamma, (2, 3), w4)


@pytest.mark.parametrize("face, w", APPENDIX_C_CERTIFICATES)
def test_known_certificates_verify(appendix_c_gamma, face, w):
    assert verify_separation_certificate(appendix_c_gamma, face, w)
    found = separation_certificate(appendix_c_gamma, face)
    assert found is not None
    assert verify_separation_certificate(appendix_c_gamma, face, found)


@pytest.mark.parametrize("face, w", APPENDIX_C_CERTIFICATES)
def test_certificate_separates_every_smaller_face(appendix_c_gamma, face, w):
    for size in range(1, len(face) + 1):
        for smaller in combinations(face, size):
            assert verify_separation_certificate(appendix_c_gamma, smaller, w)


def test_every_tangent_face_has_a_certificate(appendix_c, appendix_c_gamma):
    for face in tangent_faces(appendix_c, appendix_c_gamma):
        w = separation_certificate(appendix_c_gamma, face)
        assert w is not None
        assert verify_separation_certificate(appendix_c_gamma, face, w)


def test_lp_certificate_matches_factorization(ex1_gamma):
    assert separation_certificate(ex1_gamma, (1, 3)) == (1, 0, 1, 0)


def test_verify_rejects_bad_certificates(ex1_gamma):
    assert not verify_separation_certificate(ex1_gamma, (1, 3), (1, 0, 0, 0))
    assert not verify_separation_certificate(ex1_gamma, (1, 3), (1, 1, 1, 0))
    assert not verify_separation_certificate(ex1_gamma, (1, 3), (0, 0, 0, 0))
    assert not verify_separation_certificate(ex1_gamma, (1, 3), (1, 0, 1))


def test_no_certificate_for_trapped_face(trapped):
    gamma = stoichiometric_matrix(trapped)
    face = complement(4, (0,))
    assert factor_certificate(factorize(gamma), face) is None
    assert separation_certificate(gamma, face) is None


def test_intersection_witness_for_trapped_face(trapped):
    gamma = stoichiometric_matrix(trapped)
    face = complement(4, (0,))
    witness = intersection_witness(gamma, face)
    assert witness is not None
    assert all(a > 0 for a in witness.c)
    assert witness.z[0] == 0
    assert verify_intersection_witness(gamma, face, witness)


def test_no_intersection_witness_for_separated_face(ex1_gamma):
    assert intersection_witness(ex1_gamma, (1, 3)) is None


# ============================================================
# ✅ A6
# ============================================================
def test_A6_via_reversibility(ex1, ex1_gamma, ex1_factorization):
    report = check_A6(ex1, ex1_gamma, ex1_factorization)
    assert report.via == "A6(i)"
    assert report.a6_holds
    assert all(v.separated for v in report.verdicts)


def test_A6_via_siphon_certificates(ex3, ex3_gamma, ex3_factorization):
    report = check_A6(ex3, ex3_gamma, ex3_factorization)
    assert report.via == "A6(ii)"
    assert report.a6_holds
    assert report.note is None
    assert [v.certificate_source for v in report.verdicts] == ["factorization"] * 3


def test_A6_without_factorization_uses_lp(ex3, ex3_gamma):
    report = check_A6(ex3, ex3_gamma)
    assert report.a6_holds
    assert {v.certificate_source for v in report.verdicts} == {"lp"}


def test_A6_fails_on_trapped_network(trapped):
    gamma = stoichiometric_matrix(trapped)
    report = check_A6(trapped, gamma, factorize(gamma))
    assert not report.a6_holds
    assert report.note == FAILURE_NOTE
    failing = [v for v in report.verdicts if not v.separated]
    assert [v.siphon for v in failing] == [(0,)]
    assert failing[0].intersects_nontrivial_classes == "yes"


def test_A6_fails_for_single_irreversible_reaction():
    net = parse_network("A -> B")
    gamma = stoichiometric_matrix(net)
    assert factorize(gamma) is None
    assert separation_certificate(gamma, (1,)) is None
    report = check_A6(net, gamma)
    assert report.via == "A6(ii)"
    assert not report.a6_holds
