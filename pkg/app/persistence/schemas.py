# app/persistence/schemas.py

from pydantic import BaseModel, ConfigDict, Field
from app.helpers.rational import RationalVector
from typing import Literal, Optional, Tuple

IndexSet = Tuple[int, ...]
FaceStatus = Literal["repelling", "tangent"]
TriState = Literal["yes", "no", "unknown"]
A6Route = Literal["A6(i)", "A6(ii)"]


class Siphon(BaseModel):
    """Species set Σ (0-based indices): whatever produces Σ consumes Σ."""

    species: IndexSet
    minimal: bool = True

    model_config = ConfigDict(frozen=True)


class IntersectionWitness(BaseModel):
    """c ≫ 0 and z on the face with z − c ∈ Im Γ."""

    c: RationalVector
    z: RationalVector
    direction: RationalVector

    model_config = ConfigDict(frozen=True)


class FaceVerdict(BaseModel):
    """Verdict on the face F_S whose support is `face_set` (the siphon's complement)."""

    face_set: IndexSet
    siphon: IndexSet
    status: FaceStatus
    separation_certificate: Optional[RationalVector] = None
    certificate_source: Optional[Literal["factorization", "lp"]] = None
    intersects_nontrivial_classes: TriState = "unknown"
    witness: Optional[IntersectionWitness] = None

    model_config = ConfigDict(frozen=True)

    @property
    def separated(self) -> bool:
        return self.status == "repelling" or self.separation_certificate is not None


class SiphonReport(BaseModel):
    minimal_siphons: Tuple[Siphon, ...]
    verdicts: Tuple[FaceVerdict, ...]
    a6_holds: bool
    via: A6Route
    note: Optional[str] = Field(default=None)

    model_config = ConfigDict(frozen=True)
