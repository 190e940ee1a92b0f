from typing import Dict, List, Tuple

from matchstack.model.common import BASE_VECTOR, CHILD_LABELS, LEAF_VECTOR
from matchstack.services.bijection.model import ColoredTernaryTree, Path
from matchstack.services.bijection.service import to_tree
from matchstack.services.middleware import InvalidTreeError
from matchstack.services.transfer.model import DegeneracyVector, Vector
from matchstack.services.triangulation.model import StackTriangulation

RULE_TWO_PAIRS = {(1, 2), (2, 3), (3, 1)}

def _vec(v: Vector) -> DegeneracyVector:
    return DegeneracyVector.model_construct(v=v)

def _combine(v1: Vector, v2: Vector, v3: Vector) -> Vector:
    return (
        v1[0] * v2[0] * v3[0] + v1[1] * v2[1] * v3[1],
        v1[0] * v2[2] * v3[3] + v1[1] * v2[3] * v3[2],
        v1[2] * v2[3] * v3[0] + v1[3] * v2[2] * v3[1],
        v1[2] * v2[1] * v3[3] + v1[3] * v2[0] * v3[2],
    )

def combine_children(v1: DegeneracyVector, v2: DegeneracyVector, v3: DegeneracyVector) -> DegeneracyVector:
    """Vector of a face subdivided once, from the vectors of its three sub-faces in position order."""
    return _vec(_combine(v1.v, v2.v, v3.v))

def _rule_one(u: Vector, label: int) -> Vector:
    match label:
        case 1: return (u[1], u[0] + u[1], u[3], u[2])
        case 2: return (u[1], u[3], u[2], u[0] + u[1])
        case 3: return (u[1], u[2], u[0] + u[1], u[3])
    raise InvalidTreeError(f"child label must be 1, 2 or 3, got {label}")

def _rule_two(u: Vector, l_u: int, w: Vector, l_w: int) -> Vector:
    if (l_u, l_w) not in RULE_TWO_PAIRS:
        if (l_w, l_u) not in RULE_TWO_PAIRS:
            raise InvalidTreeError(f"sibling labels {l_u} and {l_w} are not a valid pair")
        u, l_u, w, l_w = w, l_w, u, l_u
    match l_u:
        case 1: return (u[1] * w[1], u[0] * w[2] + u[1] * w[3], u[3] * w[2], u[2] * w[1] + u[3] * w[0])
        case 2: return (u[1] * w[1], u[3] * w[2], u[3] * w[0] + u[2] * w[1], u[1] * w[3] + u[0] * w[2])
        case _: return (u[1] * w[1], u[3] * w[0] + u[2] * w[1], u[0] * w[2] + u[1] * w[3], u[3] * w[2])

def apply_rule_one(u: DegeneracyVector, label: int) -> DegeneracyVector:
    return _vec(_rule_one(u.v, label))

def apply_rule_two(u: DegeneracyVector, l_u: int, w: DegeneracyVector, l_w: int) -> DegeneracyVector:
    return _vec(_rule_two(u.v, l_u, w.v, l_w))

def apply_rule_three(u: DegeneracyVector, w: DegeneracyVector, z: DegeneracyVector) -> DegeneracyVector:
    """Children colored 1, 2 and 3 respectively."""
    return _vec(_combine(u.v, w.v, z.v))

def _check_labels(path: Path, labels: List[int]) -> None:
    if len(labels) > 3 or len(set(labels)) != len(labels) or any(label not in CHILD_LABELS for label in labels):
        raise InvalidTreeError(f"node {list(path)} has invalid child labels {labels}")

def node_vectors(tree: ColoredTernaryTree) -> Dict[Path, Vector]:
    """Root vector of every subtree, keyed by node path."""
    vectors: Dict[Path, Vector] = {}
    for path, node in reversed(list(tree.iter_nodes())):
        kids = [(c.label, vectors[path + (c.label,)]) for c in node.children]
        _check_labels(path, [label for label, _ in kids])
        match len(kids):
            case 0:
                vectors[path] = LEAF_VECTOR
            case 1:
                (label, u), = kids
                vectors[path] = _rule_one(u, label)
            case 2:
                (l_u, u), (l_w, w) = kids
                vectors[path] = _rule_two(u, l_u, w, l_w)
            case _:
                by = dict(kids)
                vectors[path] = _combine(by[1], by[2], by[3])
    return vectors

def root_vector(tree: ColoredTernaryTree) -> DegeneracyVector:
    return _vec(node_vectors(tree)[()])

def root_vector_by_combination(tree: ColoredTernaryTree) -> DegeneracyVector:
    """Every node evaluated with combine_children, absent children standing in as the bare triangle."""
    vectors: Dict[Path, Vector] = {}
    for path, node in reversed(list(tree.iter_nodes())):
        by = {c.label: vectors[path + (c.label,)] for c in node.children}
        _check_labels(path, list(by))
        vectors[path] = _combine(*(by.get(label, BASE_VECTOR) for label in CHILD_LABELS))
    return _vec(vectors[()])

def degeneracy_vector(tri: StackTriangulation) -> DegeneracyVector:
    if tri.steps == 0:
        return _vec(BASE_VECTOR)
    return root_vector(to_tree(tri))

def degeneracy_vector_by_history(tri: StackTriangulation) -> DegeneracyVector:
    """
    Evaluate the recorded subdivisions face by face: an untouched face is
    the bare triangle, a subdivided face (a,b,c) with new vertex u combines
    (a,b,u), (b,c,u), (c,a,u).
    """
    inserted: Dict[Tuple[int, int, int], int] = {}
    faces: List[Tuple[int, int, int]] = [(0, 1, 2)]
    for step, choice in enumerate(tri.history.choices, start=1):
        a, b, c = faces.pop(choice)
        u = step + 2
        inserted[(a, b, c)] = u
        faces.extend(((a, b, u), (b, c, u), (c, a, u)))

    values: Dict[Tuple[int, int, int], Vector] = {}
    stack: List[Tuple[Tuple[int, int, int], bool]] = [((0, 1, 2), False)]
    while stack:
        face, expanded = stack.pop()
        u = inserted.get(face)
        if u is None:
            values[face] = BASE_VECTOR
            continue
        a, b, c = face
        parts = ((a, b, u), (b, c, u), (c, a, u))
        if expanded:
            values[face] = _combine(*(values[p] for p in parts))
        else:
            stack.append((face, True))
            stack.extend((p, False) for p in parts)
    return _vec(values[(0, 1, 2)])

def degeneracy(v: DegeneracyVector) -> int:
    """Number of groundstates: 2 (v1 + v2 + v3)."""
    return 2 * (v[1] + v[2] + v[3])

def satisfying_state_total(v: DegeneracyVector) -> int:
    """All satisfying states over the eight root spin patterns."""
    return 2 * sum(v.v)
