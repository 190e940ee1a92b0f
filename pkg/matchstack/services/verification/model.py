from pydantic import BaseModel, Field
from typing import Any, List, NamedTuple, Optional

from matchstack.services.bounds.model import ThresholdReport

class CheckOutcome(NamedTuple):
    """One check on one instance, as returned by sweep workers."""
    check: str
    passed: bool
    expected: Any = None
    got: Any = None
    size: Optional[int] = None
    whitelistable: bool = False
    psi: Optional[int] = None
    bound: Optional[int] = None

class CheckTally(BaseModel):
    name: str
    instance_count: int = 0
    pass_count: int = 0
    fail_count: int = 0
    whitelisted_count: int = Field(default=0, description="Violations below --allow-below, counted as passes.")

class Failure(BaseModel):
    instance: Any
    check: str
    expected: Any = None
    got: Any = None

class Violation(BaseModel):
    """A bound violation whitelisted by --allow-below."""
    instance: Any
    check: str
    size: int

class CheckRecord(BaseModel):
    """Per-instance line streamed by `verify --records`."""
    suite: str
    check: str
    instance: Any
    passed: bool = Field(serialization_alias="pass")
    expected: Any = None
    got: Any = None
    whitelisted: bool = False
    psi: Optional[int] = Field(default=None, description="Psi of the instance, for the exponent checks.")
    bound: Optional[int] = Field(default=None, description="Least Psi the check accepts.")

class SweepReport(BaseModel):
    suite: str
    max_n: Optional[int] = None
    instance_count: int = 0
    pass_count: int = 0
    fail_count: int = 0
    failures: List[Failure] = Field(default_factory=list)
    wall_time: float = Field(default=0.0, description="Seconds.")
    checks: List[CheckTally] = Field(default_factory=list)
    violations: List[Violation] = Field(default_factory=list)
    thresholds: List[ThresholdReport] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.fail_count == 0
