import itertools
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from matchstack.model.common import CHILD_LABELS, MAIN_LEMMA_MAX_DEPTH, BoundVariant, SmallPropClass
from matchstack.services.bijection.model import ColoredTernaryTree, Path
from matchstack.services.bijection.service import (
    enumerate_subtrees, enumerate_trees, graft_above, graft_chain, iter_nodes, node_at,
    remove_subtrees, subtree_sizes, tree_from_children, tree_to_json
)
from matchstack.services.bounds.golden import (
    corollary_bound_check, golden_power_leq, golden_sum_bound_check, theorem_bound_check
)
from matchstack.services.bounds.model import (
    BoundVerdicts, ChainDecomposition, ExponentVector, MainLemmaCandidate, MainLemmaFailure,
    RemainderReport, SmallPropResult, TheoremCertificate, ThresholdReport
)
from matchstack.services.middleware import ContractError, UndefinedExponentError
from matchstack.services.transfer.model import DegeneracyVector, Vector
from matchstack.services.transfer.service import degeneracy, node_vectors
from matchstack.utils.logger import Logger

logger = Logger("matchstack.services.bounds.service")

def psi(e: ExponentVector) -> int:
    return 2 * (e[1] + e[2] + e[3])

def phi_functional(e: ExponentVector) -> int:
    return psi(e) - sum(1 for s in (1, 2, 3) if e[s] > e[0])

def _max_exponent(x: int) -> int:
    if x <= 0:
        raise UndefinedExponentError(f"no power of phi lies below {x}")
    k = 0
    while golden_power_leq(k + 1, x):
        k += 1
    return k

def max_exponent_vector(v: Union[DegeneracyVector, Vector]) -> ExponentVector:
    """Coordinatewise largest k with phi**k <= v_s."""
    values = v.v if isinstance(v, DegeneracyVector) else v
    return ExponentVector.model_construct(e=tuple(_max_exponent(x) for x in values))

def max_psi(v: Union[DegeneracyVector, Vector]) -> int:
    return psi(max_exponent_vector(v))

def max_phi(v: Union[DegeneracyVector, Vector]) -> int:
    return phi_functional(max_exponent_vector(v))

# --- remainders ---

def find_remainders(tree: ColoredTernaryTree) -> RemainderReport:
    """
    Case I: a leaf whose father has two or three children, every other
    one spanning at least 3 nodes. Case II: a pendant edge w-v hanging from
    a father with exactly two children, the other spanning at least 3 nodes.
    """
    sizes = subtree_sizes(tree)
    report = RemainderReport()
    for path, node in iter_nodes(tree):
        kids = [path + (c.label,) for c in node.children]
        if len(kids) in (2, 3):
            for v in kids:
                if sizes[v] == 1 and all(sizes[u] >= 3 for u in kids if u != v):
                    report.remainders.append((v,))
                    report.generators.append(path)
        if len(kids) == 2:
            for w in kids:
                (u,) = [k for k in kids if k != w]
                if sizes[w] == 2 and sizes[u] >= 3:
                    (v,) = [w + (c.label,) for c in node_at(tree, w).children]
                    report.remainders.append((v, w))
                    report.generators.append(path)
    return report

def strip_remainders(tree: ColoredTernaryTree) -> ColoredTernaryTree:
    report = find_remainders(tree)
    # removing the top node of each remainder takes the whole set with it
    return remove_subtrees(tree, {remainder[-1] for remainder in report.remainders})

# --- small trees ---

def small_prop_trees(size_class: SmallPropClass) -> List[ColoredTernaryTree]:
    match size_class:
        case SmallPropClass.OR2: return list(enumerate_trees(2))
        case SmallPropClass.OR3: return list(enumerate_trees(3))
        case SmallPropClass.OR4: return list(enumerate_trees(4))
        case SmallPropClass.OR5:
            return [
                t for t in enumerate_trees(5)
                if len(t.root.children) == 2 and all(c.children for c in t.root.children)
            ]
    k = 2 if size_class == SmallPropClass.THREE_CHILDREN_Z2 else 3
    trees = []
    for sizes in itertools.product((1, 2, 3), repeat=3):
        if k not in sizes:
            continue
        pools = [enumerate_subtrees(s, label) for s, label in zip(sizes, CHILD_LABELS)]
        trees.extend(tree_from_children(kids) for kids in itertools.product(*pools))
    return trees

def verify_small_props(size_class: SmallPropClass) -> List[SmallPropResult]:
    size_class = SmallPropClass(size_class)
    results = []
    for tree in small_prop_trees(size_class):
        value = max_psi(node_vectors(tree)[()])
        results.append(SmallPropResult(
            size_class=size_class,
            instance=tree_to_json(tree),
            psi=value,
            bound=size_class.bound,
            passed=value >= size_class.bound,
        ))
    return results

# --- main lemma ---

def witness_bound(subtree_size: int) -> int:
    """Least Psi with 2 * Psi >= subtree_size + 7."""
    return (subtree_size + 8) // 2

def verify_main_lemma(tree: ColoredTernaryTree) -> Union[ChainDecomposition, MainLemmaFailure]:
    """
    Walk down the unique-child path from the root (at most 5 edges) and
    return the first node whose subtree has 2 * Psi >= |T_sub| + 7.
    """
    if tree.size < 4:
        raise ContractError(f"the tree has {tree.size} nodes, at least 4 are required")
    report = find_remainders(tree)
    if report.remainders:
        found = [list(p) for p in report.remainders[0]]
        raise ContractError(f"the tree has a remainder {found} with generator {list(report.generators[0])}")
    vectors = node_vectors(tree)
    sizes = subtree_sizes(tree)
    candidates: List[MainLemmaCandidate] = []
    path: Path = ()
    node = tree.root
    chain: List[Path] = []
    for depth in range(MAIN_LEMMA_MAX_DEPTH + 1):
        chain.append(path)
        value = max_psi(vectors[path])
        qualifies = value >= witness_bound(sizes[path])
        candidates.append(MainLemmaCandidate(
            path=path, depth=depth, subtree_size=sizes[path], psi=value, qualifies=qualifies
        ))
        if qualifies:
            return ChainDecomposition(
                chain=list(chain), length=depth, subtree_root=path, subtree_size=sizes[path], psi=value
            )
        if len(node.children) != 1:
            break
        node = node.children[0]
        path = path + (node.label,)
    logger.warning("No main lemma witness", tree_size=tree.size, depth=len(candidates) - 1)
    return MainLemmaFailure(tree=tree_to_json(tree), candidates=candidates)

# --- exponent calculus checks ---

def lemma_strip_step(tree: ColoredTernaryTree, label: int) -> bool:
    """One unique-child step above the root raises the max Phi by at least 1."""
    before = max_phi(node_vectors(tree)[()])
    after = max_phi(node_vectors(graft_above(tree, label))[()])
    return after >= before + 1

def onechild_gain(tree: ColoredTernaryTree, labels: Sequence[int]) -> bool:
    """A grafted path of length L raises the max Psi by at least L - 3."""
    before = max_psi(node_vectors(tree)[()])
    after = max_psi(node_vectors(graft_chain(tree, labels))[()])
    return after >= before + max(len(labels) - 3, 0)

def children_split_check(tree: ColoredTernaryTree) -> Optional[bool]:
    """Psi at a root with two or three children dominates the children's sum; None otherwise."""
    if len(tree.root.children) not in (2, 3):
        return None
    vectors = node_vectors(tree)
    total = sum(max_psi(vectors[(c.label,)]) for c in tree.root.children)
    return max_psi(vectors[()]) >= total

# --- degeneracy bounds ---

def bound_verdicts(vertex_count: int, degeneracy_value: int) -> BoundVerdicts:
    graph_size = 2 * vertex_count - 4
    matchings = degeneracy_value // 2
    verdicts = {
        variant.value: (
            theorem_bound_check(vertex_count, degeneracy_value, variant.denominator)
            if variant.is_theorem
            else corollary_bound_check(graph_size, matchings, variant.denominator)
        )
        for variant in BoundVariant
    }
    return BoundVerdicts(**verdicts)

def variant_size(variant: BoundVariant, vertex_count: int) -> int:
    """Size a bound is stated in: |Delta| for the theorem, |V(G)| for the corollary."""
    return vertex_count if variant.is_theorem else 2 * vertex_count - 4

def theorem_certificate(tree: ColoredTernaryTree) -> TheoremCertificate:
    stripped = strip_remainders(tree)
    witness = None
    witness_required = stripped.size >= 4
    if witness_required:
        outcome = verify_main_lemma(stripped)
        witness = outcome if isinstance(outcome, ChainDecomposition) else None
    vector = node_vectors(tree)[()]
    e = max_exponent_vector(vector)
    value = psi(e)
    vertex_count = tree.size + 3
    d = degeneracy(DegeneracyVector.model_construct(v=vector))
    exponent_sum = e[1] + e[2] + e[3]
    return TheoremCertificate(
        tree_size=tree.size,
        vertex_count=vertex_count,
        stripped_size=stripped.size,
        stripped_third=3 * stripped.size >= tree.size,
        witness=witness,
        witness_required=witness_required,
        exponents=e.e,
        psi=value,
        psi_linear=12 * value >= vertex_count + 3,
        # Psi/3 = 2*sum/3 and Psi/6 = sum/3, both compared after cubing
        printed_step=golden_sum_bound_check(e.e[1:], 3, 2 * exponent_sum, 3),
        amgm_step=golden_sum_bound_check(e.e[1:], 3, exponent_sum, 3),
        degeneracy=d,
        theorem_36=theorem_bound_check(vertex_count, d, BoundVariant.THEOREM_36.denominator),
        theorem_72=theorem_bound_check(vertex_count, d, BoundVariant.THEOREM_72.denominator),
    )

def map_threshold(variant: str, records: Iterable[Tuple[int, bool]]) -> ThresholdReport:
    """Violating sizes and the smallest tested size past the last violation."""
    tested = set()
    violating = set()
    for size, holds in records:
        tested.add(size)
        if not holds:
            violating.add(size)
    if not tested:
        logger.error("No records to map", variant=str(variant))
        raise ValueError("no records to map")
    if violating:
        beyond = [s for s in tested if s > max(violating)]
        threshold = min(beyond) if beyond else max(violating) + 1
    else:
        threshold = min(tested)
    return ThresholdReport(
        variant=str(variant),
        tested_sizes=(min(tested), max(tested)),
        violating_sizes=sorted(violating),
        threshold=threshold,
    )
