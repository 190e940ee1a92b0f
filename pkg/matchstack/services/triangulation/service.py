import itertools
from collections import defaultdict, deque
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from matchstack.services.middleware import ContractError, HistoryIndexError, ParseError
from matchstack.services.triangulation.model import (
    CubicMultigraph, Edge, FaceRecord, GrowthHistory, StackTriangulation, norm_edge
)
from matchstack.utils.logger import Logger

logger = Logger("matchstack.services.triangulation.service")

HistoryLike = Union[GrowthHistory, Sequence[int]]

ROOT_FACE: Tuple[int, int, int] = (0, 1, 2)
SEED_MASK = 2**64 - 1

def _choices(h: HistoryLike) -> Tuple[int, ...]:
    return h.choices if isinstance(h, GrowthHistory) else tuple(h)

def _replay(choices: Sequence[int]) -> Tuple[List[Tuple[int, int, int]], List[Edge]]:
    faces: List[Tuple[int, int, int]] = [ROOT_FACE]
    edges: List[Edge] = [(0, 1), (0, 2), (1, 2)]
    for step, choice in enumerate(choices, start=1):
        if isinstance(choice, bool) or not isinstance(choice, int) or not 0 <= choice < len(faces):
            raise HistoryIndexError(
                f"step {step}: face index {choice!r} outside 0..{len(faces) - 1}", step=step
            )
        a, b, c = faces.pop(choice)
        u = step + 2
        faces.extend(((a, b, u), (b, c, u), (c, a, u)))
        edges.extend((norm_edge(a, u), norm_edge(b, u), norm_edge(c, u)))
    return faces, edges

def _build(choices: Tuple[int, ...], faces: List[Tuple[int, int, int]], edges: List[Edge]) -> StackTriangulation:
    return StackTriangulation.model_construct(
        vertex_count=len(choices) + 3,
        inner_faces=tuple(FaceRecord.model_construct(a=a, b=b, c=c) for a, b, c in faces),
        outer_face=FaceRecord.model_construct(a=0, b=1, c=2),
        history=GrowthHistory.model_construct(choices=choices),
        edges=tuple(sorted(edges)),
    )

def new_root_triangle() -> StackTriangulation:
    return _build((), [ROOT_FACE], [(0, 1), (0, 2), (1, 2)])

def grow(tri: StackTriangulation, face_index: int) -> StackTriangulation:
    """Insert vertex |Delta| into inner face `face_index`."""
    faces = [face.as_tuple() for face in tri.inner_faces]
    step = tri.steps + 1
    if isinstance(face_index, bool) or not isinstance(face_index, int) or not 0 <= face_index < len(faces):
        raise HistoryIndexError(
            f"step {step}: face index {face_index!r} outside 0..{len(faces) - 1}", step=step
        )
    a, b, c = faces.pop(face_index)
    u = tri.vertex_count
    faces.extend(((a, b, u), (b, c, u), (c, a, u)))
    edges = list(tri.edges) + [norm_edge(a, u), norm_edge(b, u), norm_edge(c, u)]
    return _build(tri.history.choices + (face_index,), faces, edges)

def from_history(h: HistoryLike) -> StackTriangulation:
    choices = _choices(h)
    faces, edges = _replay(choices)
    return _build(tuple(choices), faces, edges)

def enumerate_histories(n: int) -> Iterator[GrowthHistory]:
    """All prod(2i+1) histories of length n, lexicographic."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    for choices in itertools.product(*(range(2 * i + 1) for i in range(n))):
        yield GrowthHistory.model_construct(choices=choices)

def random_history(n: int, seed: int) -> GrowthHistory:
    rng = np.random.default_rng(seed & SEED_MASK)
    choices = tuple(int(rng.integers(0, 2 * i + 1)) for i in range(n))
    return GrowthHistory.model_construct(choices=choices)

def _strip_offset(i: int) -> int:
    # faces created by step i sit at the end of the list: 2i-2, 2i-1, 2i
    return 2 * i - 2

def enumerate_strip_histories(n: int) -> Iterator[GrowthHistory]:
    """Histories in which every insertion lands in a face created by the previous one."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield GrowthHistory.model_construct(choices=())
        return
    for picks in itertools.product(range(3), repeat=n - 1):
        choices = (0,) + tuple(_strip_offset(i) + pick for i, pick in enumerate(picks, start=1))
        yield GrowthHistory.model_construct(choices=choices)

def random_strip_history(n: int, seed: int) -> GrowthHistory:
    if n == 0:
        return GrowthHistory.model_construct(choices=())
    rng = np.random.default_rng(seed & SEED_MASK)
    choices = (0,) + tuple(_strip_offset(i) + int(rng.integers(0, 3)) for i in range(1, n))
    return GrowthHistory.model_construct(choices=choices)

def is_stack_strip(tri: StackTriangulation) -> bool:
    return all(
        _strip_offset(i) <= choice <= _strip_offset(i) + 2
        for i, choice in enumerate(tri.history.choices)
        if i > 0
    )

def sub_triangulation(tri: StackTriangulation, position: int) -> StackTriangulation:
    """
    The stack triangulation grown inside face f1(position) of the first
    insertion, rooted at that face's marked edge.
    """
    if position not in (1, 2, 3):
        raise ValueError(f"position must be 1, 2 or 3, got {position}")
    choices = tri.history.choices
    if not choices:
        raise ContractError("the bare triangle has no sub-triangulations")
    region: List[int] = [1, 2, 3]
    sub_choices: List[int] = []
    for choice in choices[1:]:
        r = region.pop(choice)
        if r == position:
            sub_choices.append(sum(1 for x in region[:choice] if x == position))
        region.extend((r, r, r))
    return from_history(sub_choices)

def faces_by_edge(tri: StackTriangulation) -> Dict[Edge, List[int]]:
    """Edge -> indices of incident faces; index len(inner_faces) is the outer face."""
    inc: Dict[Edge, List[int]] = defaultdict(list)
    faces = list(tri.inner_faces) + [tri.outer_face]
    for fi, face in enumerate(faces):
        for e in face.edges():
            inc[e].append(fi)
    return inc

def _contract_error(message: str) -> ContractError:
    logger.warning("Triangulation contract violated", error=message)
    return ContractError(message)

def dual(tri: StackTriangulation) -> CubicMultigraph:
    inc = faces_by_edge(tri)
    edges: List[Edge] = []
    for e in tri.edges:
        incident = inc.get(e, [])
        if len(incident) != 2:
            raise _contract_error(f"edge {e} lies on {len(incident)} faces")
        edges.append(norm_edge(*incident))
    return CubicMultigraph.model_construct(
        vertex_count=len(tri.inner_faces) + 1,
        edges=tuple(edges),
        face_of=tuple(tri.inner_faces) + (tri.outer_face,),
    )

def validate(tri: StackTriangulation) -> None:
    """Re-check the structural invariants; raises ContractError."""
    n = tri.steps
    if tri.vertex_count != n + 3:
        raise _contract_error(f"vertex count {tri.vertex_count} does not match {n} growing steps")
    if len(tri.inner_faces) != max(1, 2 * n + 1):
        raise _contract_error(f"{len(tri.inner_faces)} inner faces after {n} growing steps")
    if len(set(tri.edges)) != len(tri.edges) or len(tri.edges) != 3 * tri.vertex_count - 6:
        raise _contract_error(f"{len(tri.edges)} edges, Euler requires {3 * tri.vertex_count - 6}")
    if tri.outer_face.as_tuple() != ROOT_FACE:
        raise _contract_error(f"outer face must be {ROOT_FACE}")
    for e, incident in faces_by_edge(tri).items():
        if len(incident) != 2:
            raise _contract_error(f"edge {e} lies on {len(incident)} faces")
    # the outer face is traversed clockwise when seen from inside
    oriented = [d for face in tri.inner_faces for d in face.directed_edges()] + [(0, 2), (2, 1), (1, 0)]
    if len(set(oriented)) != len(oriented):
        raise _contract_error("inconsistent face orientation")
    replayed = from_history(tri.history)
    if replayed.inner_faces != tri.inner_faces:
        raise _contract_error("face records or marked edges differ from the growth history replay")

def canonical_code(tri: StackTriangulation) -> Tuple[int, Tuple[Tuple[int, int, int], ...]]:
    """
    Complete invariant of the rooted plane triangulation: vertices are
    renamed in breadth-first discovery order starting at the root edge,
    crossing from face to face over shared edges.
    """
    third: Dict[Tuple[int, int], int] = {}
    for face in tri.inner_faces:
        a, b, c = face.as_tuple()
        third[(a, b)] = c
        third[(b, c)] = a
        third[(c, a)] = b
    rename = {0: 0, 1: 1}
    seen = set()
    queue = deque([(0, 1)])
    while queue:
        x, y = queue.popleft()
        z = third[(x, y)]
        key = frozenset((x, y, z))
        if key in seen:
            continue
        seen.add(key)
        if z not in rename:
            rename[z] = len(rename)
        for p, q in ((y, z), (z, x)):
            if (q, p) in third:
                queue.append((q, p))
    relabelled = []
    for face in tri.inner_faces:
        a, b, c = (rename[x] for x in face.as_tuple())
        # rotate so the smallest name comes first
        while a != min(a, b, c):
            a, b, c = b, c, a
        relabelled.append((a, b, c))
    return tri.vertex_count, tuple(sorted(relabelled))

def to_networkx(g: CubicMultigraph) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    for v in range(g.vertex_count):
        graph.add_node(v, face=g.face_of[v].as_tuple())
    graph.add_edges_from(g.edges)
    return graph

def primal_graph(tri: StackTriangulation) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(tri.vertex_count))
    graph.add_edges_from(tri.edges)
    return graph

def is_cubic_bridgeless(g: CubicMultigraph) -> bool:
    """3-regular, connected, and still connected after deleting any single edge."""
    if any(d != 3 for d in g.degrees()):
        return False
    graph = to_networkx(g)
    if not nx.is_connected(graph):
        return False
    for u, v, key in list(graph.edges(keys=True)):
        graph.remove_edge(u, v, key)
        connected = nx.is_connected(graph)
        graph.add_edge(u, v, key)
        if not connected:
            return False
    return True

# --- serialization ---

def history_to_json(h: HistoryLike) -> List[int]:
    return list(_choices(h))

def history_from_json(value: Any, line: Optional[int] = None) -> GrowthHistory:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise ParseError("a growth history is a JSON array of integers", line=line)
    for i, choice in enumerate(value):
        if not 0 <= choice < 2 * i + 1:
            raise HistoryIndexError(
                f"step {i + 1}: face index {choice} outside 0..{2 * i}" + (f" (line {line})" if line else ""),
                step=i + 1,
            )
    return GrowthHistory.model_construct(choices=tuple(value))

def to_json(tri: StackTriangulation) -> Dict[str, Any]:
    return {
        "vertices": tri.vertex_count,
        "faces": [list(face.as_tuple()) for face in tri.inner_faces],
        "outer": list(tri.outer_face.as_tuple()),
        "history": history_to_json(tri.history),
    }

def from_json(value: Any, line: Optional[int] = None) -> StackTriangulation:
    if not isinstance(value, dict) or "history" not in value:
        raise ParseError("a triangulation object needs a 'history' key", line=line)
    tri = from_history(history_from_json(value["history"], line=line))
    expected = to_json(tri)
    for key in ("vertices", "faces", "outer"):
        if key in value and value[key] != expected[key]:
            raise ParseError(f"'{key}' does not match the replayed history", line=line)
    return tri

def dual_to_json(g: CubicMultigraph) -> Dict[str, Any]:
    return {
        "vertices": g.vertex_count,
        "edges": [list(e) for e in g.edges],
        "faces": [list(face.as_tuple()) for face in g.face_of],
    }

def dual_to_dot(g: CubicMultigraph, name: str = "dual") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.vertex_count):
        a, b, c = g.face_of[v].as_tuple()
        outer = v == g.vertex_count - 1
        lines.append(f'  {v} [label="{"outer" if outer else v}: {a} {b} {c}"];')
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
