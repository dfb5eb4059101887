# tests/conftest.py

from app.reactions.services import build_network, load_network, stoichiometric_matrix
from app.factorization.services import factorize
from app.reactions.schemas import Network, Reaction
from app.linalg.matrix import RationalMatrix
from typing import Optional
from pathlib import Path
import numpy as np
import pytest

NETWORKS = Path(__file__).resolve().parent.parent / "networks"

EX1_GAMMA = [[-1, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]]
EX1_LAMBDA = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, 0, 1]]
EX1_THETA = [[-1, 0, 1], [1, -1, 0], [0, 1, -1]]

EX2_LAMBDA = [[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
EX2_THETA = [[-1, 0, 1, 1], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 0, -1]]

EX3_GAMMA = [
    [-1, 0, 0, 1],
    [-1, 1, 0, 0],
    [1, -1, 0, 0],
    [0, 1, -1, 0],
    [0, 0, -1, 1],
    [0, 0, 1, -1],
]
EX3_LAMBDA = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1], [0, 0, 0, 1]]
EX3_THETA = [[-1, 0, 0, 1], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]

APPENDIX_C_GAMMA = [[1, 0, 1], [-1, 1, 0], [1, 0, 1], [-1, 0, -1], [0, -2, -2]]


def network_path(name: str) -> Path:
    return NETWORKS / name


def random_network(
    rng: np.random.Generator, n_species: int, n_reactions: int, reversible: Optional[bool] = True
) -> Network:
    """
    Reactions over disjoint random sides of 2-4 species with coefficients 1-2.
    reversible=None flips a coin per reaction. Unused species are dropped.
    """
    drawn = []
    for _ in range(n_reactions):
        chosen = [int(i) for i in rng.choice(n_species, size=int(rng.integers(2, min(4, n_species) + 1)), replace=False)]
        cut = int(rng.integers(1, len(chosen)))
        flag = bool(rng.random() < 0.5) if reversible is None else reversible
        drawn.append((chosen[:cut], chosen[cut:], flag))
    used = sorted({i for left, right, _ in drawn for i in left + right})
    index = {old: new for new, old in enumerate(used)}
    reactions = [
        Reaction(
            left={index[i]: int(rng.integers(1, 3)) for i in left},
            right={index[i]: int(rng.integers(1, 3)) for i in right},
            reversible=flag,
        )
        for left, right, flag in drawn
    ]
    return build_network([f"X{i}" for i in range(len(used))], reactions)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ex1():
    return load_network(network_path("ex1.rxn"))


@pytest.fixture
def ex2():
    return load_network(network_path("ex2.rxn"))


@pytest.fixture
def ex3():
    return load_network(network_path("ex3.rxn"))


@pytest.fixture
def appendix_c():
    return load_network(network_path("appendix_c.json"))


@pytest.fixture
def trapped():
    return load_network(network_path("trapped.rxn"))


@pytest.fixture
def ex1_gamma(ex1):
    return stoichiometric_matrix(ex1)


@pytest.fixture
def ex2_gamma(ex2):
    return stoichiometric_matrix(ex2)


@pytest.fixture
def ex3_gamma(ex3):
    return stoichiometric_matrix(ex3)


@pytest.fixture
def appendix_c_gamma(appendix_c):
    return stoichiometric_matrix(appendix_c)


@pytest.fixture
def ex1_factorization(ex1_gamma):
    return factorize(ex1_gamma)


@pytest.fixture
def ex2_factorization(ex2_gamma):
    return factorize(ex2_gamma)


@pytest.fixture
def ex3_factorization(ex3_gamma):
    return factorize(ex3_gamma)


@pytest.fixture
def appendix_c_factorization(appendix_c_gamma):
    return factorize(appendix_c_gamma)


def matrix(rows) -> RationalMatrix:
    return RationalMatrix(rows)
