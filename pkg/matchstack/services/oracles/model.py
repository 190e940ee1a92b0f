from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Dict, Literal

from matchstack.services.triangulation.model import StackTriangulation

class SpinState(BaseModel):
    model_config = ConfigDict(frozen=True)

    spins: Dict[int, int] = Field(description="Vertex -> +1 or -1.")

    @field_validator("spins")
    def check_values(cls, v):
        bad = {vertex: s for vertex, s in v.items() if s not in (1, -1)}
        if bad:
            raise ValueError(f"spins must be +1 or -1, got {bad}")
        return v

    @classmethod
    def from_mask(cls, mask: int, vertex_count: int) -> "SpinState":
        """Bit i set means vertex i carries spin -1."""
        return cls.model_construct(spins={i: -1 if mask >> i & 1 else 1 for i in range(vertex_count)})

    def to_mask(self) -> int:
        return sum(1 << vertex for vertex, s in self.spins.items() if s < 0)

class IsingInstance(BaseModel):
    """Antiferromagnetic instance: every edge has coupling -1."""
    triangulation: StackTriangulation
    coupling: Literal[-1] = -1
