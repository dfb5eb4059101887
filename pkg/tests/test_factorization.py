# tests/test_factorization.py

from app.factorization.services import (
    REASON_ZERO_COORDINATE,
    REASON_COLUMN_SIGNS,
    REASON_KERNEL_DIMENSION,
    VIOLATION_PRODUCT,
    VIOLATION_Y_POSITIVE,
    collinear_row_partition,
    attempt_factorization,
    verify_factorization,
    canonical_form,
    canonical_pair,
    factorize,
)
from app.reactions.services import load_network, stoichiometric_matrix
from app.core.exceptions import DimensionMismatch, FactorizationError
from app.factorization.schemas import Factorization
from app.linalg.matrix import RationalMatrix
from tests.conftest import (
    EX1_LAMBDA,
    EX1_THETA,
    EX2_LAMBDA,
    EX2_THETA,
    EX3_LAMBDA,
    EX3_THETA,
    network_path,
)
import pytest


def test_partition_of_first_example(ex1_gamma):
    assert collinear_row_partition(ex1_gamma) == [(0, 2), (1,), (3,)]


def test_partition_of_futile_cycle(ex3_gamma):
    assert collinear_row_partition(ex3_gamma) == [(0,), (1, 2), (3,), (4, 5)]


def test_partition_rejects_zero_row():
    with pytest.raises(FactorizationError):
        collinear_row_partition(RationalMatrix([[1, -1], [0, 0]]))


def test_first_example_factors_exactly(ex1_factorization):
    f = ex1_factorization
    assert f.lambda_ == RationalMatrix(EX1_LAMBDA)
    assert f.theta == RationalMatrix(EX1_THETA)
    assert f.y_theta == (1, 1, 1)
    assert f.sign_flip == (-1, 1, 1)
    assert f.r == 3
    assert f.class_of(2) == 0


def test_second_example_factors(ex2):
    f = factorize(stoichiometric_matrix(ex2))
    assert canonical_form(f) == canonical_pair(RationalMatrix(EX2_LAMBDA), RationalMatrix(EX2_THETA))
    assert f.y_theta == (1, 1, 1, 1)


def test_futile_cycle_factors_exactly(ex3_factorization):
    assert ex3_factorization.lambda_ == RationalMatrix(EX3_LAMBDA)
    assert ex3_factorization.theta == RationalMatrix(EX3_THETA)
    assert ex3_factorization.y_theta == (1, 1, 1, 1)


def test_factorization_with_non_unit_entries(appendix_c_factorization):
    f = appendix_c_factorization
    assert f.row_partition == ((0, 2, 3), (1,), (4,))
    assert f.lambda_.column(2) == (0, 0, 0, 0, 2)
    assert f.theta == RationalMatrix([[1, 0, 1], [-1, 1, 0], [0, -1, -1]])
    assert f.y_theta == (1, 1, 1)


@pytest.mark.parametrize("name", ["ex1.rxn", "ex2.rxn", "ex3.rxn", "trapped.rxn", "appendix_c.json"])
def test_factorizations_verify(name):
    gamma = stoichiometric_matrix(load_network(network_path(name)))
    f = factorize(gamma)
    assert f is not None
    assert verify_factorization(gamma, f) == []
    assert f.lambda_ @ f.theta == gamma


@pytest.mark.parametrize("name", ["one_way.rxn", "bimolecular.rxn", "disconnected.rxn"])
def test_kernel_dimension_failures(name):
    attempt = attempt_factorization(stoichiometric_matrix(load_network(network_path(name))))
    assert not attempt.succeeded
    assert attempt.reason == REASON_KERNEL_DIMENSION
    assert attempt.kernel_dimension != 1


def test_zero_coordinate_failure():
    attempt = attempt_factorization(RationalMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]]))
    assert attempt.reason == REASON_ZERO_COORDINATE


def test_column_sign_failure():
    attempt = attempt_factorization(RationalMatrix([[1, 1], [1, -1], [-1, 0]]))
    assert attempt.reason == REASON_COLUMN_SIGNS


def test_zero_matrix_rejected():
    with pytest.raises(FactorizationError):
        attempt_factorization(RationalMatrix([[0, 0]]))


def test_verify_reports_tampering(ex1_gamma, ex1_factorization):
    theta = RationalMatrix([[-1, 0, 2], [1, -1, 0], [0, 1, -1]])
    tampered = ex1_factorization.model_copy(update={"theta": theta, "y_theta": (1, 1, -1)})
    violations = verify_factorization(ex1_gamma, tampered)
    assert VIOLATION_PRODUCT in violations
    assert VIOLATION_Y_POSITIVE in violations


def test_verify_rejects_wrong_shapes(ex3_gamma, ex1_factorization):
    with pytest.raises(DimensionMismatch):
        verify_factorization(ex3_gamma, ex1_factorization)


def test_canonical_pair_ignores_positive_scaling(ex1_factorization):
    f = ex1_factorization
    scaled_lambda = f.lambda_.map_columns([2, 3, "1/2"])
    scaled_theta = f.theta.map_rows(["1/2", "1/3", 2])
    assert canonical_pair(scaled_lambda, scaled_theta) == canonical_form(f)


def test_factorization_serializes_with_alias(ex1_factorization):
    data = ex1_factorization.model_dump(by_alias=True)
    assert data["lambda"][2] == ["-1", "0", "0"]
    assert data["y_theta"] == ["1", "1", "1"]
    assert Factorization.model_validate(data) == ex1_factorization


# ============================================================
# ✅ ROW ORDER AND DETERMINISM
# ============================================================
ALL_NETWORKS = [
    "ex1.rxn",
    "ex2.rxn",
    "ex3.rxn",
    "trapped.rxn",
    "appendix_c.json",
    "one_way.rxn",
    "one_way_chain.rxn",
    "bimolecular.rxn",
    "disconnected.rxn",
]


@pytest.mark.parametrize("name", ALL_NETWORKS)
def test_row_permutation_is_equivariant(name, rng):
    gamma = stoichiometric_matrix(load_network(network_path(name)))
    attempt = attempt_factorization(gamma)
    for _ in range(5):
        perm = [int(i) for i in rng.permutation(gamma.n_rows)]
        permuted = attempt_factorization(gamma.submatrix(perm))
        assert permuted.succeeded == attempt.succeeded
        assert permuted.reason == attempt.reason
        assert {tuple(sorted(perm[i] for i in c)) for c in permuted.row_partition} == set(attempt.row_partition)
        if not attempt.succeeded:
            continue
        f, g = attempt.factorization, permuted.factorization
        assert verify_factorization(gamma.submatrix(perm), g) == []
        # the permuted Λ equals PΛ up to positive column scaling and one global sign
        expected = canonical_pair(f.lambda_.submatrix(perm), f.theta)
        lam, theta = canonical_form(g)
        assert (lam, theta) == expected or (-lam, -theta) == expected


@pytest.mark.parametrize("name", ALL_NETWORKS)
def test_factorization_is_deterministic(name):
    first = attempt_factorization(stoichiometric_matrix(load_network(network_path(name))))
    second = attempt_factorization(stoichiometric_matrix(load_network(network_path(name))))
    assert first == second
    if first.succeeded:
        assert first.factorization.model_dump_json() == second.factorization.model_dump_json()
