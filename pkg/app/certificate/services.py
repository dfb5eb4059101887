# app/certificate/services.py

from app.certificate.schemas import CONDITIONS, Certificate, ConditionResult, expected_verdict
from app.reactions.services import stoichiometric_matrix
from app.helpers.rational import format_vector_line
from app.factorization.services import attempt_factorization
from app.order.services import check_A5, integral
from app.dsr.services import build_dsr, summarize
from app.persistence.services import check_A6
from app.reactions.schemas import Network
from typing import Dict, List
import logging

logger = logging.getLogger(__name__)

REASON_PREREQUISITES = "not evaluated: A3 and A4 must hold first"
REASON_A5 = "a column of Λ is nonpositive, so K(Λ) meets the nonpositive orthant"


def _dsr_reason(scc_count: int) -> str:
    return f"DSR graph is not strongly connected ({scc_count} strongly connected components)"


# ============================================================
# ✅ CERTIFY
# ============================================================
def certify(net: Network) -> Certificate:
    """
    Structural verdict for `net`.

    A3 and A4 are always evaluated (failures of both are reported); A5 and
    A6 only when A3 and A4 hold, since global stability builds on the
    local result.
    """
    gamma = stoichiometric_matrix(net)
    conditions: Dict[str, ConditionResult] = {}

    attempt = attempt_factorization(gamma)
    f = attempt.factorization
    if f is not None:
        conditions["A3"] = ConditionResult(status="pass", evidence="factorization")
    else:
        conditions["A3"] = ConditionResult(status="fail", reason=attempt.reason)

    dsr = summarize(build_dsr(net, gamma))
    if dsr.strongly_connected:
        conditions["A4"] = ConditionResult(status="pass", evidence="dsr")
    else:
        conditions["A4"] = ConditionResult(status="fail", evidence="dsr", reason=_dsr_reason(dsr.scc_count))

    siphon_report = None
    if f is not None and dsr.strongly_connected:
        if check_A5(f.lambda_):
            conditions["A5"] = ConditionResult(status="pass", evidence="factorization")
        else:
            conditions["A5"] = ConditionResult(status="fail", evidence="factorization", reason=REASON_A5)
        siphon_report = check_A6(net, gamma, f)
        conditions["A6"] = ConditionResult(
            status="pass" if siphon_report.a6_holds else "fail",
            evidence="siphon_report",
            reason=None if siphon_report.a6_holds else siphon_report.note,
        )
    else:
        for name in ("A5", "A6"):
            conditions[name] = ConditionResult(status="skipped", reason=REASON_PREREQUISITES)

    narrative = [
        f"{name}: {conditions[name].reason}" for name in CONDITIONS if conditions[name].status == "fail"
    ]
    certificate = Certificate(
        verdict=expected_verdict(conditions),
        network=net,
        conditions=conditions,
        factorization=f,
        integral=integral(f) if f is not None else None,
        dsr=dsr,
        siphon_report=siphon_report,
        failure_narrative=narrative,
    )
    logger.info("verdict %s (%d species, %d reactions)", certificate.verdict, net.n_species, net.n_reactions)
    return certificate


def certificate_to_json(cert: Certificate, indent: int = 2) -> str:
    return cert.model_dump_json(by_alias=True, indent=indent)


# ============================================================
# ✅ REPORT
# ============================================================
def render_report(cert: Certificate) -> str:
    """Plain-text verdict and evidence table."""
    net = cert.network
    lines = [f"verdict: {cert.verdict}", ""]
    lines += [f"assumed {name}: {text}" for name, text in cert.assumptions.items()]
    lines.append("")
    lines.append(f"{'condition':<10} {'status':<8} evidence")
    for name in CONDITIONS:
        result = cert.conditions[name]
        detail = result.reason if result.status != "pass" else result.evidence
        if name == "A6" and cert.siphon_report is not None:
            detail = f"{detail} via {cert.siphon_report.via}"
        lines.append(f"{name:<10} {result.status:<8} {detail or ''}")

    if cert.factorization is not None:
        f = cert.factorization
        lines += ["", "Λ ="] + [f"  {format_vector_line(row)}" for row in f.lambda_.rows]
        lines += ["Θ ="] + [f"  {format_vector_line(row)}" for row in f.theta.rows]
        lines.append(f"y_θ = {format_vector_line(f.y_theta)}")
    if cert.integral is not None:
        lines.append(f"H(x) = p·x with p = {format_vector_line(cert.integral.p_theta)}")
    if cert.dsr is not None:
        lines.append(f"DSR strongly connected components: {cert.dsr.scc_count}")

    if cert.siphon_report is not None:
        lines += ["", "minimal siphons:"]
        for verdict in cert.siphon_report.verdicts:
            names = "{" + ", ".join(net.species_names[i] for i in verdict.siphon) + "}"
            if verdict.separation_certificate is not None:
                evidence = f"w = {format_vector_line(verdict.separation_certificate)} ({verdict.certificate_source})"
            elif verdict.witness is not None:
                evidence = f"meets the class of c = {format_vector_line(verdict.witness.c)}"
            else:
                evidence = "no certificate"
            lines.append(f"  {names:<24} {verdict.status:<10} {evidence}")

    if cert.failure_narrative:
        lines += ["", "why:"] + [f"  {reason}" for reason in cert.failure_narrative]
    return "\n".join(lines) + "\n"


def verdict_exit_code(cert: Certificate) -> int:
    return {"global": 0, "local": 3, "none": 4}[cert.verdict]


def failed_conditions(cert: Certificate) -> List[str]:
    return [name for name in CONDITIONS if cert.conditions[name].status == "fail"]
