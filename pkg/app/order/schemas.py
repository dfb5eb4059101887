# app/order/schemas.py

from pydantic import BaseModel, ConfigDict, Field
from app.helpers.rational import RationalVector
from app.linalg.matrix import RationalMatrix


class ConeOrder(BaseModel):
    """The partial order x ⪯ y ⟺ y − x ∈ K(Λ) = {Λt : t ≥ 0}."""

    lambda_: RationalMatrix = Field(..., alias="lambda")
    left_inverse: RationalMatrix

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    @property
    def n(self) -> int:
        return self.lambda_.n_rows

    @property
    def r(self) -> int:
        return self.lambda_.n_cols


class Integral(BaseModel):
    """H(x) = p_θᵀx, with Λᵀp_θ = y_θ."""

    y_theta: RationalVector
    p_theta: RationalVector

    model_config = ConfigDict(frozen=True)
