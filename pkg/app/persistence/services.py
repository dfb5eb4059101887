# app/persistence/services.py

from app.persistence.schemas import FaceStatus, FaceVerdict, IndexSet, IntersectionWitness, Siphon, SiphonReport
from app.core.exceptions import DimensionMismatch, PersistenceError
from app.helpers.rational import primitive_integer_vector
from app.linalg.simplex import minimize, nonneg_kernel_certificate
from app.linalg.elimination import in_image
from app.factorization.schemas import Factorization
from typing import Iterable, List, Optional, Tuple
from concurrent.futures import ThreadPoolExecutor
from app.reactions.schemas import Network
from app.linalg.matrix import RationalMatrix
from app.core.config import settings
from itertools import combinations
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

FAILURE_NOTE = "A6(ii) fails under the separation test: a minimal-siphon face meets a nontrivial stoichiometry class"


def complement(n: int, indices: Iterable[int]) -> IndexSet:
    chosen = set(indices)
    return tuple(i for i in range(n) if i not in chosen)


def _check_proper(n: int, face_set: Iterable[int]) -> IndexSet:
    face_set = tuple(sorted(set(face_set)))
    if not face_set or len(face_set) >= n or face_set[0] < 0 or face_set[-1] >= n:
        raise PersistenceError(f"face set {face_set} is not a proper nonempty subset of {n} species")
    return face_set


# ============================================================
# ✅ SIPHONS
# ============================================================
def is_siphon(net: Network, sigma: Iterable[int]) -> bool:
    """Every reaction that can produce a member of Σ consumes a member of Σ."""
    members = set(sigma)
    if not members:
        return False
    for reaction in net.reactions:
        for consumed, produced in reaction.producing_sides():
            if members.intersection(produced) and not members.intersection(consumed):
                return False
    return True


def enumerate_minimal_siphons(net: Network) -> List[Siphon]:
    """
    All inclusion-minimal nonempty proper siphons.

    Subsets are visited by increasing size, skipping supersets of siphons
    already found, so every hit is minimal.
    """
    n = net.n_species
    if n > settings.MAX_SIPHON_SPECIES:
        raise PersistenceError(
            f"{n} species exceed the exhaustive siphon search limit of {settings.MAX_SIPHON_SPECIES}"
        )
    found: List[frozenset] = []
    for size in range(1, n):
        for subset in combinations(range(n), size):
            candidate = frozenset(subset)
            if any(s <= candidate for s in found):
                continue
            if is_siphon(net, candidate):
                found.append(candidate)
    siphons = sorted(tuple(sorted(s)) for s in found)
    logger.debug("minimal siphons: %s", siphons)
    return [Siphon(species=s, minimal=True) for s in siphons]


# ============================================================
# ✅ FACES
# ============================================================
def is_mixed_column(matrix: RationalMatrix) -> bool:
    """Every nonzero column has a positive and a negative entry."""
    for column in matrix.columns():
        if any(a != 0 for a in column) and not (any(a > 0 for a in column) and any(a < 0 for a in column)):
            return False
    return True


def project_off_face(gamma: RationalMatrix, face_set: Iterable[int]) -> RationalMatrix:
    """(I − P^S)Γ: rows of S zeroed."""
    on_face = set(face_set)
    return RationalMatrix(
        ([Fraction(0)] * gamma.n_cols if i in on_face else row for i, row in enumerate(gamma.rows)), gamma.n_cols
    )


def face_status(net: Network, gamma: RationalMatrix, face_set: Iterable[int]) -> FaceStatus:
    face_set = _check_proper(net.n_species, face_set)
    if net.all_reversible:
        tangent = is_mixed_column(project_off_face(gamma, face_set))
    else:
        tangent = is_siphon(net, complement(net.n_species, face_set))
    return "tangent" if tangent else "repelling"


def tangent_faces(net: Network, gamma: RationalMatrix) -> List[IndexSet]:
    """Every proper nonempty S whose face F_S is tangent."""
    n = net.n_species
    if n > settings.MAX_SIPHON_SPECIES:
        raise PersistenceError(f"{n} species exceed the exhaustive face search limit")
    faces = []
    for size in range(1, n):
        for subset in combinations(range(n), size):
            if face_status(net, gamma, subset) == "tangent":
                faces.append(subset)
    return faces


# ============================================================
# ✅ CERTIFICATES AND WITNESSES
# ============================================================
def separation_certificate(gamma: RationalMatrix, face_set: Iterable[int]) -> Optional[Tuple[Fraction, ...]]:
    """w ≥ 0, nonzero, supported off S, with Γᵀw = 0."""
    support = complement(gamma.n_rows, face_set)
    if not support:
        raise DimensionMismatch("the face set covers every species")
    return nonneg_kernel_certificate(gamma, support)


def verify_separation_certificate(gamma: RationalMatrix, face_set: Iterable[int], w: Iterable[Fraction]) -> bool:
    w = list(w)
    if len(w) != gamma.n_rows:
        return False
    on_face = set(face_set)
    off_face = [w[i] for i in range(len(w)) if i not in on_face]
    if any(w[i] != 0 for i in on_face) or any(a < 0 for a in off_face) or all(a == 0 for a in off_face):
        return False
    return all(a == 0 for a in gamma.T.apply(w))


def factor_certificate(f: Factorization, face_set: Iterable[int]) -> Optional[Tuple[Fraction, ...]]:
    """
    Certificate read off the factorization, when Σ = S^c allows it:
    two opposite-signed Λ entries of one class inside Σ (Λᵀw = 0), or one
    same-signed representative per class inside Σ (Λᵀw = ±y_θ).
    """
    lam = f.lambda_
    n = lam.n_rows
    sigma = complement(n, face_set)
    in_sigma = set(sigma)

    for k, members in enumerate(f.row_partition):
        inside = [i for i in members if i in in_sigma]
        positive = [i for i in inside if lam[i, k] > 0]
        negative = [i for i in inside if lam[i, k] < 0]
        if positive and negative:
            i, j = positive[0], negative[0]
            w = [Fraction(0)] * n
            w[i] = -lam[j, k]
            w[j] = lam[i, k]
            return tuple(primitive_integer_vector(w))

    for direction in (1, -1):
        w = [Fraction(0)] * n
        for k, members in enumerate(f.row_partition):
            chosen = next((i for i in members if i in in_sigma and direction * lam[i, k] > 0), None)
            if chosen is None:
                break
            w[chosen] = f.y_theta[k] / abs(lam[chosen, k])
        else:
            return tuple(primitive_integer_vector(w))
    return None


def intersection_witness(gamma: RationalMatrix, face_set: Iterable[int]) -> Optional[IntersectionWitness]:
    """
    A nontrivial stoichiometry class meeting F_S, when one exists.

    Looks for d = Γw with d_i ≤ −1 off S; then z_S = 1 + max(d_S, 0),
    z = 0 off S and c = z − d is strictly positive.
    """
    face_set = set(face_set)
    n, m = gamma.n_rows, gamma.n_cols
    sigma = complement(n, face_set)
    if not sigma:
        return None

    # w = w⁺ − w⁻; Γ_Σ w + s = −1, all variables ≥ 0
    a_eq, b_eq = [], []
    for idx, i in enumerate(sigma):
        row = gamma.row(i)
        slack = [Fraction(int(t == idx)) for t in range(len(sigma))]
        a_eq.append(list(row) + [-a for a in row] + slack)
        b_eq.append(Fraction(-1))
    result = minimize([Fraction(0)] * (2 * m + len(sigma)), a_eq, b_eq)
    if not result.is_optimal:
        return None

    w = [result.x[j] - result.x[m + j] for j in range(m)]
    d = gamma.apply(w)
    z = [Fraction(1) + max(d[i], Fraction(0)) if i in face_set else Fraction(0) for i in range(n)]
    c = [zi - di for zi, di in zip(z, d)]
    return IntersectionWitness(c=tuple(c), z=tuple(z), direction=tuple(w))


def verify_intersection_witness(gamma: RationalMatrix, face_set: Iterable[int], witness: IntersectionWitness) -> bool:
    face_set = set(face_set)
    n = gamma.n_rows
    if len(witness.c) != n or len(witness.z) != n:
        return False
    if any(a <= 0 for a in witness.c):
        return False
    if any((witness.z[i] > 0) != (i in face_set) or witness.z[i] < 0 for i in range(n)):
        return False
    return in_image(gamma, [a - b for a, b in zip(witness.z, witness.c)])


# ============================================================
# ✅ CONDITION A6
# ============================================================
def _siphon_verdict(
    net: Network, gamma: RationalMatrix, siphon: Siphon, f: Optional[Factorization]
) -> FaceVerdict:
    face_set = complement(net.n_species, siphon.species)
    status = face_status(net, gamma, face_set)

    certificate, source = None, None
    if f is not None:
        certificate = factor_certificate(f, face_set)
        source = "factorization" if certificate is not None else None
    if certificate is None:
        certificate = separation_certificate(gamma, face_set)
        source = "lp" if certificate is not None else None

    if certificate is not None:
        return FaceVerdict(
            face_set=face_set,
            siphon=siphon.species,
            status=status,
            separation_certificate=certificate,
            certificate_source=source,
            intersects_nontrivial_classes="no",
        )

    witness = intersection_witness(gamma, face_set)
    return FaceVerdict(
        face_set=face_set,
        siphon=siphon.species,
        status=status,
        intersects_nontrivial_classes="yes" if witness is not None else "unknown",
        witness=witness,
    )


def check_A6(net: Network, gamma: RationalMatrix, f: Optional[Factorization] = None) -> SiphonReport:
    """
    A6 via (i) when every reaction is reversible; otherwise via (ii), each
    minimal-siphon face needing a separation certificate. Faces of larger
    siphons lie in the closure of minimal-siphon faces.
    """
    siphons = enumerate_minimal_siphons(net)
    with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
        verdicts = list(pool.map(lambda s: _siphon_verdict(net, gamma, s, f), siphons))

    if net.all_reversible:
        report = SiphonReport(minimal_siphons=tuple(siphons), verdicts=tuple(verdicts), a6_holds=True, via="A6(i)")
    else:
        holds = all(v.separated for v in verdicts)
        report = SiphonReport(
            minimal_siphons=tuple(siphons),
            verdicts=tuple(verdicts),
            a6_holds=holds,
            via="A6(ii)",
            note=None if holds else FAILURE_NOTE,
        )
    logger.debug("A6 %s via %s (%d minimal siphons)", report.a6_holds, report.via, len(siphons))
    return report
