# app/factorization/schemas.py

from pydantic import BaseModel, ConfigDict, Field
from app.helpers.rational import RationalVector
from app.linalg.matrix import RationalMatrix
from typing import Optional, Tuple

IndexClass = Tuple[int, ...]


class Factorization(BaseModel):
    """Γ = ΛΘ with Λ one nonzero per row and Θ sign-compatible columns."""

    lambda_: RationalMatrix = Field(..., alias="lambda")
    theta: RationalMatrix
    sign_flip: RationalVector
    y_theta: RationalVector
    row_partition: Tuple[IndexClass, ...]

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @property
    def r(self) -> int:
        return self.theta.n_rows

    def class_of(self, species: int) -> int:
        for k, members in enumerate(self.row_partition):
            if species in members:
                return k
        raise KeyError(species)


class FactorizationAttempt(BaseModel):
    """Outcome of the factorization procedure, successful or not."""

    row_partition: Tuple[IndexClass, ...]
    factorization: Optional[Factorization] = None
    reason: Optional[str] = None
    kernel_dimension: Optional[int] = None

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @property
    def succeeded(self) -> bool:
        return self.factorization is not None
