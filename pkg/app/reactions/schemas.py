# app/reactions/schemas.py

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator
from typing import Dict, List, Tuple

SPECIES_NAME_PATTERN = r"^[A-Za-z_][A-Za-z0-9_]*$"


class Species(BaseModel):
    name: str = Field(..., pattern=SPECIES_NAME_PATTERN)
    index: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)


class Reaction(BaseModel):
    """One reaction; a reversible reaction is a single process, not two."""

    left: Dict[int, PositiveInt] = Field(default_factory=dict)
    right: Dict[int, PositiveInt] = Field(default_factory=dict)
    reversible: bool = False

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_sides(self):
        if not self.left and not self.right:
            raise ValueError("reaction has no species on either side")
        both = set(self.left) & set(self.right)
        if both:
            raise ValueError(f"species {sorted(both)} on both sides of a reaction")
        return self

    @property
    def participants(self) -> List[int]:
        return sorted(set(self.left) | set(self.right))

    def producing_sides(self) -> List[Tuple[Dict[int, int], Dict[int, int]]]:
        """(consumed, produced) pairs for each direction the reaction can run."""
        sides = [(self.left, self.right)]
        if self.reversible:
            sides.append((self.right, self.left))
        return sides

    def swapped(self) -> "Reaction":
        return Reaction(left=dict(self.right), right=dict(self.left), reversible=self.reversible)


class Network(BaseModel):
    species: Tuple[Species, ...]
    reactions: Tuple[Reaction, ...]

    model_config = ConfigDict(frozen=True)

    @field_validator("species")
    @classmethod
    def check_species(cls, value):
        names = [s.name for s in value]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate species names: {duplicates}")
        for position, s in enumerate(value):
            if s.index != position:
                raise ValueError(f"species {s.name} has index {s.index} at position {position}")
        return value

    @model_validator(mode="after")
    def check_references(self):
        if not self.reactions:
            raise ValueError("network has no reactions")
        n = len(self.species)
        used = set()
        for j, reaction in enumerate(self.reactions):
            for i in reaction.participants:
                if i < 0 or i >= n:
                    raise ValueError(f"reaction {j} references unknown species index {i}")
                used.add(i)
        idle = [s.name for s in self.species if s.index not in used]
        if idle:
            raise ValueError(f"species in no reaction: {idle}")
        return self

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @property
    def species_names(self) -> List[str]:
        return [s.name for s in self.species]

    @property
    def all_reversible(self) -> bool:
        return all(r.reversible for r in self.reactions)

    def index_of(self, name: str) -> int:
        for s in self.species:
            if s.name == name:
                return s.index
        raise KeyError(name)
