import logging
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence

import networkx as nx

from matchstack.config.setting import get_settings
from matchstack.model.common import SignClass
from matchstack.services.middleware import ContractError, RefusalError
from matchstack.services.oracles.model import IsingInstance, SpinState
from matchstack.services.transfer.model import DegeneracyVector
from matchstack.services.triangulation.model import CubicMultigraph, Edge, StackTriangulation
from matchstack.services.triangulation.service import primal_graph
from matchstack.utils.logger import Logger, LogTimer

logger = Logger("matchstack.services.oracles.service")

# root pattern bits (s0, s1, s2) -> sign class; bit set means spin -1
CLASS_PATTERNS = {SignClass.PPP: 0b000, SignClass.PPM: 0b100, SignClass.PMP: 0b010, SignClass.MPP: 0b001}

def _guard(oracle: str, size: int, limit: Optional[int], default: int) -> None:
    limit = default if limit is None else limit
    if size > limit:
        logger.warning("Oracle refused", oracle=oracle, size=size, limit=limit)
        raise RefusalError(f"{oracle}: size {size} exceeds the guard {limit}")

def _face_masks(tri: StackTriangulation) -> List[int]:
    return [(1 << f.a) | (1 << f.b) | (1 << f.c) for f in tri.inner_faces]

def _satisfies(mask: int, face_masks: Sequence[int]) -> bool:
    # a triangle has exactly one frustrated edge unless it is monochromatic
    for fm in face_masks:
        corners = mask & fm
        if corners == 0 or corners == fm:
            return False
    return True

def _satisfying_masks(tri: StackTriangulation, guard: Optional[int]) -> Iterator[int]:
    _guard("spin enumeration", tri.vertex_count, guard, get_settings().state_guard)
    face_masks = _face_masks(tri)
    for mask in range(1 << tri.vertex_count):
        if _satisfies(mask, face_masks):
            yield mask

def frustrated_edges(tri: StackTriangulation, s: SpinState) -> List[Edge]:
    missing = [v for v in range(tri.vertex_count) if v not in s.spins]
    if missing:
        raise ContractError(f"state has no spin for vertices {missing}")
    return [(u, v) for u, v in tri.edges if s.spins[u] == s.spins[v]]

def energy(inst: IsingInstance, s: SpinState) -> int:
    """-sum c(e) s(u) s(v) over all edges."""
    tri = inst.triangulation
    frustrated = len(frustrated_edges(tri, s))
    return -inst.coupling * (frustrated - (len(tri.edges) - frustrated))

def iter_satisfying_states(tri: StackTriangulation, guard: Optional[int] = None) -> Iterator[SpinState]:
    for mask in _satisfying_masks(tri, guard):
        yield SpinState.from_mask(mask, tri.vertex_count)

def count_satisfying_states(tri: StackTriangulation, guard: Optional[int] = None) -> int:
    with LogTimer(logger, "Spin enumeration", level=logging.DEBUG, vertices=tri.vertex_count):
        return sum(1 for _ in _satisfying_masks(tri, guard))

def count_satisfying_by_class(tri: StackTriangulation, guard: Optional[int] = None) -> DegeneracyVector:
    """
    Brute-force degeneracy vector; also checks that each root pattern and
    its negation are equally frequent.
    """
    counts = [0] * 8
    with LogTimer(logger, "Spin enumeration by class", level=logging.DEBUG, vertices=tri.vertex_count):
        for mask in _satisfying_masks(tri, guard):
            counts[mask & 0b111] += 1
    for pattern in range(4):
        if counts[pattern] != counts[pattern ^ 0b111]:
            raise ContractError(
                f"pattern {pattern:03b} has {counts[pattern]} satisfying states, "
                f"its negation {counts[pattern ^ 0b111]}"
            )
    return DegeneracyVector(v=tuple(counts[CLASS_PATTERNS[c]] for c in SignClass))

def count_groundstates(tri: StackTriangulation, guard: Optional[int] = None) -> int:
    """
    Minimum-energy states by full enumeration, cross-checked against the
    satisfying states that also satisfy the outer face.
    """
    _guard("spin enumeration", tri.vertex_count, guard, get_settings().state_guard)
    edges = tri.edges
    face_masks = _face_masks(tri)
    outer = [(1 << 0) | (1 << 1) | (1 << 2)]
    best: Optional[int] = None
    ground: List[int] = []
    with LogTimer(logger, "Groundstate enumeration", level=logging.DEBUG, vertices=tri.vertex_count):
        for mask in range(1 << tri.vertex_count):
            frustrated = sum(1 for u, v in edges if not ((mask >> u) ^ (mask >> v)) & 1)
            value = 2 * frustrated - len(edges)
            if best is None or value < best:
                best, ground = value, [mask]
            elif value == best:
                ground.append(mask)
        expected = {
            m for m in range(1 << tri.vertex_count) if _satisfies(m, face_masks) and _satisfies(m, outer)
        }
    if set(ground) != expected:
        raise ContractError(
            f"{len(ground)} groundstates but {len(expected)} states satisfy every face"
        )
    return len(ground)

def count_perfect_matchings(g: CubicMultigraph, guard: Optional[int] = None) -> int:
    """Branch on a vertex of least remaining degree, memoized on the remaining-vertex bitmask."""
    n = g.vertex_count
    if n % 2:
        return 0
    _guard("perfect matchings", n, guard, get_settings().matching_guard)
    incident: List[List[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        if u == v:
            continue
        incident[u].append(v)
        incident[v].append(u)

    memo: Dict[int, int] = {0: 1}

    def count(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        pick, pick_degree = -1, None
        rest = mask
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            degree = sum(1 for w in incident[v] if mask >> w & 1)
            if pick_degree is None or degree < pick_degree:
                pick, pick_degree = v, degree
                if degree == 0:
                    break
        total = 0
        if pick_degree:
            without = mask & ~(1 << pick)
            # parallel edges appear repeatedly in incident[pick]
            for w in incident[pick]:
                if without >> w & 1:
                    total += count(without & ~(1 << w))
        memo[mask] = total
        return total

    with LogTimer(logger, "Perfect matching search", level=logging.DEBUG, vertices=n):
        return count((1 << n) - 1)

def iter_intersecting_sets(tri: StackTriangulation, guard: Optional[int] = None) -> Iterator[FrozenSet[Edge]]:
    """Edge sets meeting every face, outer included, in exactly one edge."""
    _guard("intersecting sets", len(tri.edges), guard, get_settings().edge_guard)
    index = {e: i for i, e in enumerate(tri.edges)}
    faces = [[index[e] for e in f.edges()] for f in list(tri.inner_faces) + [tri.outer_face]]
    state = [-1] * len(tri.edges)  # -1 undecided, 0 out, 1 in

    def search(fi: int) -> Iterator[FrozenSet[Edge]]:
        if fi == len(faces):
            yield frozenset(tri.edges[i] for i, s in enumerate(state) if s == 1)
            return
        face = faces[fi]
        chosen = sum(1 for e in face if state[e] == 1)
        if chosen > 1:
            return
        undecided = [e for e in face if state[e] == -1]
        if chosen == 1:
            for e in undecided:
                state[e] = 0
            yield from search(fi + 1)
            for e in undecided:
                state[e] = -1
            return
        for pick in undecided:
            for e in undecided:
                state[e] = 1 if e == pick else 0
            yield from search(fi + 1)
            for e in undecided:
                state[e] = -1

    yield from search(0)

def count_intersecting_sets(tri: StackTriangulation, guard: Optional[int] = None) -> int:
    with LogTimer(logger, "Intersecting set search", level=logging.DEBUG, edges=len(tri.edges)):
        return sum(1 for _ in iter_intersecting_sets(tri, guard))

def is_bipartite_without(tri: StackTriangulation, removed: FrozenSet[Edge]) -> bool:
    graph = primal_graph(tri)
    graph.remove_edges_from(removed)
    return nx.is_bipartite(graph)
