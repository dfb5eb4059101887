# app/kinetics/schemas.py

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator
from typing import Any, Dict, List, Literal, Optional, Tuple
from app.reactions.schemas import Network
from app.order.schemas import Integral
from app.core.config import settings

KineticsKind = Literal["mass-action", "power-law"]


class ReactionKinetics(BaseModel):
    """v_j = k_f ∏ x_i^a_i − k_r ∏ x_i^b_i over left (a) and right (b) species."""

    kind: KineticsKind
    forward: float = Field(..., gt=0)
    reverse: Optional[float] = Field(default=None, gt=0)
    left_exponents: Dict[int, float]
    right_exponents: Dict[int, float]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_exponents(self):
        for exponent in list(self.left_exponents.values()) + list(self.right_exponents.values()):
            if exponent < 1:
                raise ValueError("exponents below 1 break differentiability on the boundary")
        return self


class RateFunction(BaseModel):
    network: Network
    reactions: Tuple[ReactionKinetics, ...]
    negated: bool = False

    model_config = ConfigDict(frozen=True)

    _compiled: Any = PrivateAttr(default=None)

    @model_validator(mode="after")
    def check_reactions(self):
        if len(self.reactions) != self.network.n_reactions:
            raise ValueError("one kinetics entry per reaction is required")
        for j, (reaction, kinetics) in enumerate(zip(self.network.reactions, self.reactions)):
            if reaction.reversible != (kinetics.reverse is not None):
                raise ValueError(f"reaction {j + 1}: reverse rate given exactly for reversible reactions")
            if set(kinetics.left_exponents) != set(reaction.left) or set(kinetics.right_exponents) != set(reaction.right):
                raise ValueError(f"reaction {j + 1}: exponents must cover exactly its species")
        return self


class IntegrationOptions(BaseModel):
    rtol: float = Field(default_factory=lambda: settings.RTOL, gt=0)
    atol: float = Field(default_factory=lambda: settings.ATOL, gt=0)
    clamp_threshold: float = Field(default_factory=lambda: settings.CLAMP_THRESHOLD, ge=0)
    samples: int = Field(default=101, ge=2)
    t_eval: Optional[Tuple[float, ...]] = None
    initial_step: Optional[float] = Field(default=None, gt=0)
    max_steps: int = Field(default=1_000_000, ge=1)
    integral: Optional[Integral] = None

    model_config = ConfigDict(frozen=True)


class StepDiagnostics(BaseModel):
    time: float
    h_value: Optional[float] = None
    min_coordinate: float
    step_size: float


class Trajectory(BaseModel):
    times: Tuple[float, ...]
    states: Tuple[Tuple[float, ...], ...]
    diagnostics: Tuple[StepDiagnostics, ...]
    accepted_steps: int = 0
    rejected_steps: int = 0
    clamped: int = 0

    model_config = ConfigDict(frozen=True)

    @property
    def final_state(self) -> Tuple[float, ...]:
        return self.states[-1]


class SimulationDiagnostics(BaseModel):
    """What `simulate` writes next to its CSV."""

    kinetics: KineticsKind
    seed: Optional[int] = None
    t_end: float
    accepted_steps: int
    rejected_steps: int
    clamped: int
    h_initial: Optional[float] = None
    h_max_drift: Optional[float] = None
    min_coordinate: float
    order_preserved: Optional[bool] = None
    steps: List[StepDiagnostics] = Field(default_factory=list)
