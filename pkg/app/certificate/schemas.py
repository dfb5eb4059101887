# app/certificate/schemas.py

from pydantic import BaseModel, ConfigDict, Field, model_validator
from app.persistence.schemas import SiphonReport
from app.factorization.schemas import Factorization
from typing import Dict, List, Literal, Optional
from app.reactions.schemas import Network
from app.order.schemas import Integral
from app.dsr.schemas import DsrSummary
from app.core.config import settings

Verdict = Literal["none", "local", "global"]
ConditionStatus = Literal["pass", "fail", "skipped"]
CONDITIONS = ("A3", "A4", "A5", "A6")

ASSUMPTIONS = {
    "A1": "rates are C¹ on the closed orthant and satisfy the kinetic sign and boundary conditions (not checked)",
    "A2": "every reaction runs at a positive rate in the interior of the orthant (not checked)",
}


class ConditionResult(BaseModel):
    status: ConditionStatus
    evidence: Optional[str] = None
    reason: Optional[str] = None

    model_config = ConfigDict(frozen=True)


class Certificate(BaseModel):
    """Structural verdict plus the evidence behind each condition."""

    schema_: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    verdict: Verdict
    assumptions: Dict[str, str] = Field(default_factory=lambda: dict(ASSUMPTIONS))
    network: Network
    conditions: Dict[str, ConditionResult]
    factorization: Optional[Factorization] = None
    integral: Optional[Integral] = None
    dsr: Optional[DsrSummary] = None
    siphon_report: Optional[SiphonReport] = None
    failure_narrative: List[str] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @model_validator(mode="after")
    def check_conditions(self):
        if set(self.conditions) != set(CONDITIONS):
            raise ValueError(f"conditions must be exactly {', '.join(CONDITIONS)}")
        return self

    def passed(self, name: str) -> bool:
        return self.conditions[name].status == "pass"


class ValidationCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    contradicts: Optional[str] = Field(default=None, description="the certified claim a failure contradicts")


class ValidationReport(BaseModel):
    kinetics: str
    seed: int
    verdict: Verdict
    checks: List[ValidationCheck] = Field(default_factory=list)

    @property
    def contradictions(self) -> List[ValidationCheck]:
        return [c for c in self.checks if not c.passed and c.contradicts is not None]


def expected_verdict(conditions: Dict[str, ConditionResult]) -> Verdict:
    """local needs A3 and A4; global needs all four."""
    passed = {name: conditions[name].status == "pass" for name in CONDITIONS}
    if not (passed["A3"] and passed["A4"]):
        return "none"
    return "global" if passed["A5"] and passed["A6"] else "local"
