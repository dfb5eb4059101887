# app/certificate/recheck.py

from app.persistence.services import (
    verify_separation_certificate,
    verify_intersection_witness,
    enumerate_minimal_siphons,
    face_status,
    complement,
    is_siphon,
)
from app.factorization.services import attempt_factorization, verify_factorization
from app.core.exceptions import CertificateFormatError, DimensionMismatch
from app.certificate.schemas import Certificate, expected_verdict
from app.dsr.services import build_dsr, strongly_connected_components
from app.reactions.services import stoichiometric_matrix
from app.linalg.matrix import RationalMatrix
from app.order.services import check_A5
from app.core.config import settings
from pydantic import ValidationError
from typing import List, Union
from pathlib import Path
import logging
import json

logger = logging.getLogger(__name__)


# ============================================================
# ✅ LOAD
# ============================================================
def parse_certificate(text: str) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"certificate is not JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != settings.SCHEMA_VERSION:
        raise CertificateFormatError(f"expected a certificate with schema {settings.SCHEMA_VERSION!r}")
    try:
        return Certificate.model_validate(data)
    except ValidationError as exc:
        raise CertificateFormatError(f"invalid certificate: {exc.errors()[0]['msg']}") from exc


def load_certificate(path: Union[str, Path]) -> Certificate:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CertificateFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_certificate(text)


# ============================================================
# ✅ PER-CONDITION CHECKS
# ============================================================
def _recheck_A3(cert: Certificate, gamma: RationalMatrix) -> List[str]:
    status = cert.conditions["A3"].status
    f = cert.factorization
    if status == "fail":
        if attempt_factorization(gamma).succeeded:
            return ["A3 recorded as failing, but Γ factors"]
        return []
    if f is None:
        return ["A3 passes without a factorization"]
    try:
        violations = verify_factorization(gamma, f)
    except DimensionMismatch as exc:
        return [f"A3: {exc.detail}"]
    problems = [f"A3: {v}" for v in violations]

    h = cert.integral
    if h is not None:
        if len(h.p_theta) != gamma.n_rows:
            problems.append("integral has the wrong length")
        else:
            if list(f.lambda_.T.apply(h.p_theta)) != list(f.y_theta):
                problems.append("integral: Λᵀp differs from y_θ")
            if any(a != 0 for a in gamma.T.apply(h.p_theta)):
                problems.append("integral: pᵀΓ is not zero")
    return problems


def _recheck_A4(cert: Certificate, gamma: RationalMatrix) -> List[str]:
    graph = build_dsr(cert.network, gamma)
    problems = []
    if cert.dsr is None:
        if cert.conditions["A4"].status == "pass":
            problems.append("A4 passes without a DSR summary")
    else:
        if set(cert.dsr.graph.arcs) != set(graph.arcs):
            problems.append("DSR arcs differ from the graph of the embedded network")
        # the witness order must partition the vertices with no arc pointing back
        position = {}
        for k, component in enumerate(cert.dsr.components):
            for vertex in component:
                position[vertex] = k
        if set(position) != set(graph.vertices) or sum(len(c) for c in cert.dsr.components) != len(position):
            problems.append("SCC witness order does not partition the vertices")
        elif any(position[a.source] > position[a.target] for a in graph.arcs):
            problems.append("SCC witness order is not topological")
    connected = len(strongly_connected_components(graph)) == 1
    if connected != (cert.conditions["A4"].status == "pass"):
        problems.append(f"A4 recorded as {cert.conditions['A4'].status}, but strong connectivity is {connected}")
    return problems


def _recheck_A5(cert: Certificate) -> List[str]:
    status = cert.conditions["A5"].status
    if status == "skipped":
        return []
    if cert.factorization is None:
        return ["A5 evaluated without a factorization"]
    holds = check_A5(cert.factorization.lambda_)
    if holds != (status == "pass"):
        return [f"A5 recorded as {status}, but the Λ column test gives {holds}"]
    return []


def _recheck_A6(cert: Certificate, gamma: RationalMatrix) -> List[str]:
    status = cert.conditions["A6"].status
    if status == "skipped":
        return []
    report = cert.siphon_report
    if report is None:
        return ["A6 evaluated without a siphon report"]

    net = cert.network
    problems = []
    minimal = sorted(s.species for s in enumerate_minimal_siphons(net))
    if sorted(s.species for s in report.minimal_siphons) != minimal:
        problems.append("minimal siphon list is incomplete or wrong")
    # one verdict per minimal siphon, none missing or repeated
    if sorted(tuple(v.siphon) for v in report.verdicts) != minimal:
        problems.append("face verdicts do not cover each minimal siphon exactly once")
    expected_route = "A6(i)" if net.all_reversible else "A6(ii)"
    if report.via != expected_route:
        problems.append(f"A6 route {report.via} does not match the network ({expected_route})")

    separated = {}
    for verdict in report.verdicts:
        label = "{" + ", ".join(net.species_names[i] for i in verdict.siphon) + "}"
        if not is_siphon(net, verdict.siphon):
            problems.append(f"{label} is not a siphon")
            continue
        if tuple(verdict.face_set) != complement(net.n_species, verdict.siphon):
            problems.append(f"{label}: face set is not the complement of the siphon")
            continue
        actual = face_status(net, gamma, verdict.face_set)
        if actual != verdict.status:
            problems.append(f"{label}: face status {verdict.status} is wrong")
        w = verdict.separation_certificate
        certified = w is not None and verify_separation_certificate(gamma, verdict.face_set, w)
        if w is not None and not certified:
            problems.append(f"{label}: separation certificate fails")
        if verdict.witness is not None and not verify_intersection_witness(gamma, verdict.face_set, verdict.witness):
            problems.append(f"{label}: intersection witness fails")
        if w is not None and verdict.witness is not None:
            problems.append(f"{label}: both a certificate and a witness are recorded")
        separated[tuple(verdict.siphon)] = actual == "repelling" or certified

    if net.all_reversible:
        holds = True
    else:
        holds = all(separated.get(s, False) for s in minimal)
    if holds != report.a6_holds:
        problems.append("siphon report conclusion does not follow from its verdicts")
    if holds != (status == "pass"):
        problems.append(f"A6 recorded as {status}, but the recomputed siphon verdicts give {holds}")
    return problems


# ============================================================
# ✅ RECHECK
# ============================================================
def recheck_certificate(cert: Certificate) -> List[str]:
    """
    Re-verify every recorded claim from the embedded network alone; returns
    the problems found (empty when the certificate stands).
    """
    gamma = stoichiometric_matrix(cert.network)
    problems: List[str] = []
    expected = expected_verdict(cert.conditions)
    if cert.verdict != expected:
        problems.append(f"verdict {cert.verdict} does not follow from the conditions ({expected})")
    problems += _recheck_A3(cert, gamma)
    problems += _recheck_A4(cert, gamma)
    problems += _recheck_A5(cert)
    problems += _recheck_A6(cert, gamma)
    for problem in problems:
        logger.debug("recheck: %s", problem)
    return problems
