from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import List, Tuple

from matchstack.model.common import SignClass

Vector = Tuple[int, int, int, int]

class DegeneracyVector(BaseModel):
    """Satisfying-state counts per root sign class, indexed (+++, ++-, +-+, -++)."""
    model_config = ConfigDict(frozen=True)

    v: Vector = Field(description="Exact nonnegative counts, unbounded.")

    @field_validator("v")
    def check_nonnegative(cls, v):
        if any(x < 0 for x in v):
            raise ValueError(f"counts must be nonnegative, got {v}")
        return v

    @classmethod
    def of(cls, v0: int, v1: int, v2: int, v3: int) -> "DegeneracyVector":
        return cls(v=(v0, v1, v2, v3))

    def __getitem__(self, index: int) -> int:
        return self.v[int(index)]

    def count(self, sign_class: SignClass) -> int:
        return self.v[sign_class]

    def dominates(self, other: "DegeneracyVector") -> bool:
        return all(x >= y for x, y in zip(self.v, other.v))

    def to_strings(self) -> List[str]:
        return [str(x) for x in self.v]
