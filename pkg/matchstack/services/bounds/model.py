from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Any, List, Optional, Tuple

from matchstack.model.common import BoundVariant, SmallPropClass
from matchstack.services.bijection.model import Path

class ExponentVector(BaseModel):
    """Exponents (e0..e3) with phi**e_s <= v_s for a certified degeneracy vector."""
    model_config = ConfigDict(frozen=True)

    e: Tuple[int, int, int, int]

    @field_validator("e")
    def check_nonnegative(cls, v):
        if any(x < 0 for x in v):
            raise ValueError(f"exponents must be nonnegative, got {v}")
        return v

    def __getitem__(self, index: int) -> int:
        return self.e[index]

class GoldenPower(BaseModel):
    """phi**e = (l + f * sqrt(5)) / 2 with l, f the Lucas and Fibonacci numbers."""
    model_config = ConfigDict(frozen=True)

    exponent: int = Field(ge=0)
    l: int = Field(ge=0)
    f: int = Field(ge=0)

class RemainderReport(BaseModel):
    remainders: List[Tuple[Path, ...]] = Field(default_factory=list, description="Removable node sets of size 1 or 2.")
    generators: List[Path] = Field(default_factory=list, description="Generator of each remainder, index-aligned.")

    def removed_nodes(self) -> List[Path]:
        return [path for remainder in self.remainders for path in remainder]

class ChainDecomposition(BaseModel):
    """Unique-child path from the root down to the witness subtree root."""
    chain: List[Path] = Field(description="Nodes of the path, root first.")
    length: int = Field(ge=0, description="Edge count of the path.")
    subtree_root: Path
    subtree_size: int = Field(ge=1)
    psi: int = Field(ge=0, description="Psi of the max certificate at the subtree root.")

class MainLemmaCandidate(BaseModel):
    path: Path
    depth: int
    subtree_size: int
    psi: int
    qualifies: bool

class MainLemmaFailure(BaseModel):
    tree: Any = Field(description="Tree serialization.")
    candidates: List[MainLemmaCandidate]

class SmallPropResult(BaseModel):
    size_class: SmallPropClass
    instance: Any
    psi: int
    bound: int
    passed: bool

class TheoremCertificate(BaseModel):
    """One instance walked through the degeneracy lower-bound argument."""
    tree_size: int = Field(ge=1)
    vertex_count: int
    stripped_size: int = Field(description="Size after removing every remainder.")
    stripped_third: bool = Field(description="3 * stripped_size >= tree_size.")
    witness: Optional[ChainDecomposition] = Field(default=None, description="Witness in the stripped tree, when it has >= 4 nodes.")
    witness_required: bool
    exponents: Tuple[int, int, int, int]
    psi: int
    psi_linear: bool = Field(description="12 * Psi >= |Delta| + 3.")
    printed_step: bool = Field(description="2 sum phi**e_s >= 6 phi**(Psi/3).")
    amgm_step: bool = Field(description="2 sum phi**e_s >= 6 phi**(Psi/6).")
    degeneracy: int
    theorem_36: bool
    theorem_72: bool

    @property
    def passed(self) -> bool:
        return self.stripped_third and self.amgm_step and (self.witness is not None or not self.witness_required)

class ThresholdReport(BaseModel):
    variant: str
    tested_sizes: Tuple[int, int] = Field(description="Smallest and largest tested size.")
    violating_sizes: List[int]
    threshold: int = Field(description="Smallest tested size beyond the last violation.")

class BoundVerdicts(BaseModel):
    theorem_36: bool
    theorem_72: bool
    corollary_72: bool
    corollary_144: bool

    def get(self, variant: BoundVariant) -> bool:
        return getattr(self, variant.value)
