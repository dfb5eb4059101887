# app/dsr/schemas.py

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import List, Literal, Tuple

SPECIES_PREFIX = "S:"
REACTION_PREFIX = "R:"


def species_vertex(name: str) -> str:
    return f"{SPECIES_PREFIX}{name}"


def reaction_vertex(j: int) -> str:
    """Reaction vertices are numbered from 1, as reactions are in the DSL file."""
    return f"{REACTION_PREFIX}{j + 1}"


class DsrArc(BaseModel):
    source: str
    target: str
    sign: Literal[-1, 1]

    model_config = ConfigDict(frozen=True)


class DsrGraph(BaseModel):
    """Reduced DSR graph at interior points of the orthant."""

    species_names: Tuple[str, ...]
    n_reactions: int = Field(..., ge=0)
    arcs: Tuple[DsrArc, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_bipartite(self):
        species = set(self.species_vertices)
        reactions = set(self.reaction_vertices)
        for arc in self.arcs:
            ends = {arc.source, arc.target}
            if arc.source == arc.target or not (ends & species and ends & reactions):
                raise ValueError(f"arc {arc.source} -> {arc.target} is not species-reaction")
        return self

    @property
    def species_vertices(self) -> List[str]:
        return [species_vertex(name) for name in self.species_names]

    @property
    def reaction_vertices(self) -> List[str]:
        return [reaction_vertex(j) for j in range(self.n_reactions)]

    @property
    def vertices(self) -> List[str]:
        return self.species_vertices + self.reaction_vertices


class DsrSummary(BaseModel):
    """What a certificate records about the graph."""

    graph: DsrGraph
    strongly_connected: bool
    scc_count: int
    components: Tuple[Tuple[str, ...], ...]
