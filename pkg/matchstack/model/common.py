from enum import Enum, IntEnum
from typing import Dict, Tuple

# Degeneracy vector of the bare triangle and root vector of a leaf
BASE_VECTOR: Tuple[int, int, int, int] = (0, 1, 1, 1)
LEAF_VECTOR: Tuple[int, int, int, int] = (1, 1, 1, 1)

CHILD_LABELS: Tuple[int, int, int] = (1, 2, 3)
MAIN_LEMMA_MAX_DEPTH: int = 5

class SignClass(IntEnum):
    """Spin pattern of the root triangle (v0, v1, v2), folded so that at most one spin is minus."""
    PPP = 0
    PPM = 1
    PMP = 2
    MPP = 3

class Suite(str, Enum):
    LEMMA1 = "lemma1"
    PROP2 = "prop2"
    BIJECTION = "bijection"
    MATCHING = "matching"
    REMAINDERS = "remainders"
    SMALL_PROPS = "small-props"
    MAIN_LEMMA = "main-lemma"
    STRIP = "strip"
    THEOREM = "theorem"
    COROLLARY = "corollary"
    GOLDEN = "golden"
    ALL = "all"

# --max-n used when the flag is omitted
DEFAULT_MAX_N: Dict[Suite, int] = {
    Suite.LEMMA1: 5,
    Suite.PROP2: 5,
    Suite.BIJECTION: 6,
    Suite.MATCHING: 5,
    Suite.REMAINDERS: 9,
    Suite.SMALL_PROPS: 5,
    Suite.MAIN_LEMMA: 9,
    Suite.STRIP: 7,
    Suite.THEOREM: 6,
    Suite.COROLLARY: 6,
    Suite.GOLDEN: 90,
}

class SmallPropClass(str, Enum):
    OR2 = "or2"
    OR3 = "or3"
    OR4 = "or4"
    OR5 = "or5"
    THREE_CHILDREN_Z2 = "3chior5-z2"
    THREE_CHILDREN_Z3 = "3chior5-z3"
    @property
    def bound(self) -> int:
        match self:
            case SmallPropClass.OR2: return 2
            case SmallPropClass.OR3: return 4
            case SmallPropClass.OR4: return 6
            case SmallPropClass.OR5: return 8
            case SmallPropClass.THREE_CHILDREN_Z2: return 8
            case SmallPropClass.THREE_CHILDREN_Z3: return 10

class BoundVariant(str, Enum):
    """Degeneracy / matching lower bounds with their exponent denominators."""
    THEOREM_36 = "theorem_36"
    THEOREM_72 = "theorem_72"
    COROLLARY_72 = "corollary_72"
    COROLLARY_144 = "corollary_144"

    @property
    def denominator(self) -> int:
        return int(self.value.rsplit("_", 1)[1])

    @property
    def is_theorem(self) -> bool:
        return self.value.startswith("theorem")

class ExportTarget(str, Enum):
    TRI = "tri"
    TREE = "tree"
    DUAL = "dual"

class ExportFormat(str, Enum):
    JSON = "json"
    DOT = "dot"

class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    PARSE = 3
    REFUSAL = 4
    CONTRACT = 5
