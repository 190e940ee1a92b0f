from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import List, Tuple

Edge = Tuple[int, int]  # undirected, stored with u < v

def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)

class FaceRecord(BaseModel):
    """Oriented triangular face; the marked edge is a -> b."""
    model_config = ConfigDict(frozen=True)

    a: int = Field(ge=0, description="Tail of the marked edge.")
    b: int = Field(ge=0, description="Head of the marked edge.")
    c: int = Field(ge=0, description="Third corner, counterclockwise after b.")

    @model_validator(mode="after")
    def check_distinct(self):
        if len({self.a, self.b, self.c}) != 3:
            raise ValueError(f"face corners must be pairwise distinct, got {self.as_tuple()}")
        return self

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def marked_edge(self) -> Tuple[int, int]:
        return (self.a, self.b)

    def edges(self) -> List[Edge]:
        return [norm_edge(self.a, self.b), norm_edge(self.b, self.c), norm_edge(self.c, self.a)]

    def directed_edges(self) -> List[Tuple[int, int]]:
        return [(self.a, self.b), (self.b, self.c), (self.c, self.a)]

class GrowthHistory(BaseModel):
    model_config = ConfigDict(frozen=True)

    choices: Tuple[int, ...] = Field(default=(), description="choices[i] indexes the inner-face list before step i+1.")

    @field_validator("choices")
    def check_range(cls, v):
        for i, choice in enumerate(v):
            if not 0 <= choice < 2 * i + 1:
                raise ValueError(f"step {i + 1}: face index {choice} outside 0..{2 * i}")
        return v

    def __len__(self) -> int:
        return len(self.choices)

class StackTriangulation(BaseModel):
    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=3, description="|Delta|, vertices 0..vertex_count-1.")
    inner_faces: Tuple[FaceRecord, ...] = Field(description="Inner faces in growth order.")
    outer_face: FaceRecord = Field(description="Starting triangle with root edge 0 -> 1.")
    history: GrowthHistory = Field(default_factory=GrowthHistory)
    edges: Tuple[Edge, ...] = Field(description="Undirected edges, sorted.")

    @property
    def steps(self) -> int:
        return len(self.history)

class CubicMultigraph(BaseModel):
    """Geometric dual; the last vertex stands for the outer face."""
    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=0)
    edges: Tuple[Edge, ...] = Field(description="Multiset of edges, one per primal edge, parallel edges repeated.")
    face_of: Tuple[FaceRecord, ...] = Field(description="Primal face represented by each dual vertex.")

    def degrees(self) -> List[int]:
        degree = [0] * self.vertex_count
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return degree
