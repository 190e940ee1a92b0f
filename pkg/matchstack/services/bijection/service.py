import itertools
from functools import lru_cache
from math import comb
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from pydantic import ValidationError

from matchstack.model.common import CHILD_LABELS
from matchstack.services.bijection.model import ColoredTernaryTree, Path, TreeNode
from matchstack.services.middleware import HistoryIndexError, InvalidTreeError, ParseError, validation_message
from matchstack.services.triangulation.model import StackTriangulation
from matchstack.services.triangulation.service import from_history, sub_triangulation

# label subsets in generation order: {}, {1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}
LABEL_SUBSETS: List[Tuple[int, ...]] = [
    subset for k in range(4) for subset in itertools.combinations(CHILD_LABELS, k)
]

def _node(label: Optional[int], children: Sequence[TreeNode]) -> TreeNode:
    return TreeNode.model_construct(label=label, children=tuple(sorted(children, key=lambda c: c.label)))

def _tree(root: TreeNode, size: Optional[int] = None) -> ColoredTernaryTree:
    return ColoredTernaryTree.model_construct(root=root, size=size if size is not None else root.size())

def history_parents(choices: Sequence[int]) -> List[Optional[Tuple[int, int]]]:
    """
    For each insertion i (1-based, list index i-1) the pair (j, k) meaning
    "inserted into face f_j(k)", or None for the first insertion.
    """
    tags: List[Optional[Tuple[int, int]]] = [None]
    parents: List[Optional[Tuple[int, int]]] = []
    for step, choice in enumerate(choices, start=1):
        if not 0 <= choice < len(tags):
            raise HistoryIndexError(f"step {step}: face index {choice} outside 0..{len(tags) - 1}", step=step)
        parents.append(tags.pop(choice))
        tags.extend(((step, 1), (step, 2), (step, 3)))
    return parents

def to_tree(tri: StackTriangulation) -> ColoredTernaryTree:
    choices = tri.history.choices
    if not choices:
        raise InvalidTreeError("the bare triangle has no ternary tree")
    parents = history_parents(choices)
    n = len(choices)
    children: Dict[int, List[TreeNode]] = {i: [] for i in range(1, n + 1)}
    # a child is always inserted after its parent, so build from the last insertion back
    for i in range(n, 1, -1):
        j, k = parents[i - 1]
        children[j].append(_node(k, children[i]))
    return _tree(_node(None, children[1]), n)

def validate_tree(tree: ColoredTernaryTree) -> None:
    """Raise InvalidTreeError unless the tree satisfies the coloring rules."""
    if tree.root.label is not None:
        raise InvalidTreeError("the root carries no label")
    count = 0
    for path, node in tree.iter_nodes():
        count += 1
        labels = [c.label for c in node.children]
        if len(labels) > 3:
            raise InvalidTreeError(f"node {list(path)} has {len(labels)} children")
        if any(label not in CHILD_LABELS for label in labels):
            raise InvalidTreeError(f"node {list(path)} has a child label outside 1..3: {labels}")
        if len(set(labels)) != len(labels):
            raise InvalidTreeError(f"node {list(path)} has colliding child labels {labels}")
        if labels != sorted(labels):
            raise InvalidTreeError(f"node {list(path)} stores children out of label order")
    if count != tree.size:
        raise InvalidTreeError(f"size {tree.size} does not match {count} nodes")

def tree_to_history(tree: ColoredTernaryTree) -> List[int]:
    """Depth-first, label-ascending replay of the tree as a growth history."""
    validate_tree(tree)
    choices = [0]
    tags: List[Tuple[int, int]] = [(1, 1), (1, 2), (1, 3)]
    stack = [(c, 1) for c in reversed(tree.root.children)]
    while stack:
        node, parent_step = stack.pop()
        index = tags.index((parent_step, node.label))
        choices.append(index)
        tags.pop(index)
        step = len(choices)
        tags.extend(((step, 1), (step, 2), (step, 3)))
        stack.extend((c, step) for c in reversed(node.children))
    return choices

def from_tree(tree: ColoredTernaryTree) -> StackTriangulation:
    return from_history(tree_to_history(tree))

@lru_cache(maxsize=None)
def _nodes(size: int, label: Optional[int]) -> Tuple[TreeNode, ...]:
    """Every node of the given subtree size and label, shared between trees."""
    result: List[TreeNode] = []
    for subset in LABEL_SUBSETS:
        k = len(subset)
        if (k == 0) != (size == 1) or size - 1 < k:
            continue
        for parts in _compositions(size - 1, k):
            pools = [_nodes(part, lab) for part, lab in zip(parts, subset)]
            for kids in itertools.product(*pools):
                result.append(TreeNode.model_construct(label=label, children=tuple(kids)))
    return tuple(result)

def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cut + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))

def enumerate_subtrees(size: int, label: int) -> Tuple[TreeNode, ...]:
    """Every node colored `label` whose subtree has `size` nodes."""
    if label not in CHILD_LABELS:
        raise InvalidTreeError(f"label must be 1, 2 or 3, got {label}")
    return _nodes(size, label) if size >= 1 else ()

def tree_from_children(children: Iterable[TreeNode]) -> ColoredTernaryTree:
    """Tree whose root has the given (distinctly labelled) children."""
    return _tree(_node(None, list(children)))

def enumerate_trees(n: int) -> Iterator[ColoredTernaryTree]:
    if n < 1:
        raise ValueError("n must be positive")
    for root in _nodes(n, None):
        yield _tree(root, n)

def tree_count(n: int) -> int:
    """Number of colored rooted ternary trees with n nodes."""
    return comb(3 * n, n) // (2 * n + 1)

def iter_nodes(tree: ColoredTernaryTree) -> Iterator[Tuple[Path, TreeNode]]:
    return tree.iter_nodes()

def node_at(tree: ColoredTernaryTree, path: Path) -> TreeNode:
    node = tree.root
    for label in path:
        nxt = node.child(label)
        if nxt is None:
            raise InvalidTreeError(f"no node at path {list(path)}")
        node = nxt
    return node

def subtree(tree: ColoredTernaryTree, path: Path) -> ColoredTernaryTree:
    node = node_at(tree, path)
    return _tree(TreeNode.model_construct(label=None, children=node.children))

def children_match_sub_triangulations(tri: StackTriangulation) -> bool:
    """
    Child j of the root spans the tree of the sub-triangulation at
    position j, and is absent exactly when that sub-triangulation is bare.
    """
    tree = to_tree(tri)
    for j in CHILD_LABELS:
        sub = sub_triangulation(tri, j)
        child = tree.root.child(j)
        if (child is None) != (not sub.history.choices):
            return False
        if child is not None and tree_to_json(subtree(tree, (j,))) != tree_to_json(to_tree(sub)):
            return False
    return True

def subtree_sizes(tree: ColoredTernaryTree) -> Dict[Path, int]:
    nodes = list(tree.iter_nodes())
    sizes: Dict[Path, int] = {}
    # pre-order reversed visits children before parents
    for path, node in reversed(nodes):
        sizes[path] = 1 + sum(sizes[path + (c.label,)] for c in node.children)
    return sizes

def is_chain(tree: ColoredTernaryTree) -> bool:
    return all(len(node.children) <= 1 for _, node in tree.iter_nodes())

def graft_above(tree: ColoredTernaryTree, label: int) -> ColoredTernaryTree:
    """New root whose only child is the old root, colored `label`."""
    if label not in CHILD_LABELS:
        raise InvalidTreeError(f"label must be 1, 2 or 3, got {label}")
    old_root = TreeNode.model_construct(label=label, children=tree.root.children)
    return _tree(TreeNode.model_construct(label=None, children=(old_root,)), tree.size + 1)

def graft_chain(tree: ColoredTernaryTree, labels: Iterable[int]) -> ColoredTernaryTree:
    """Graft a unique-child path above the root; labels are listed bottom-up."""
    for label in labels:
        tree = graft_above(tree, label)
    return tree

def remove_subtrees(tree: ColoredTernaryTree, paths: Set[Path]) -> ColoredTernaryTree:
    if () in paths:
        raise InvalidTreeError("cannot remove the root")

    def rebuild(node: TreeNode, path: Path) -> TreeNode:
        kept = [rebuild(c, path + (c.label,)) for c in node.children if path + (c.label,) not in paths]
        return TreeNode.model_construct(label=node.label, children=tuple(kept))

    return _tree(rebuild(tree.root, ()))

# --- serialization ---

def tree_to_json(tree: ColoredTernaryTree) -> Dict[str, Any]:
    def encode(node: TreeNode) -> Dict[str, Any]:
        return {"label": node.label, "children": [encode(c) for c in node.children]}
    return encode(tree.root)

def tree_from_json(value: Any, line: Optional[int] = None) -> ColoredTernaryTree:
    def decode(obj: Any) -> TreeNode:
        if not isinstance(obj, dict) or not isinstance(obj.get("children", []), list):
            raise ParseError("a tree node is an object with 'label' and 'children'", line=line)
        kids = [decode(c) for c in obj.get("children", [])]
        kids.sort(key=lambda c: (c.label is None, c.label or 0))
        try:
            return TreeNode(label=obj.get("label"), children=tuple(kids))
        except ValidationError as ve:
            raise InvalidTreeError(validation_message(ve)) from ve

    root = decode(value)
    if root.label is not None:
        raise InvalidTreeError("the root carries no label")
    return _tree(root)

def tree_to_dot(tree: ColoredTernaryTree, name: str = "tree") -> str:
    def node_id(path: Path) -> str:
        return "n" + "".join(str(label) for label in path)

    lines = [f"digraph {name} {{"]
    for path, node in tree.iter_nodes():
        lines.append(f'  {node_id(path)} [label="{"root" if not path else node_id(path)}"];')
        for c in node.children:
            lines.append(f'  {node_id(path)} -> {node_id(path + (c.label,))} [label="{c.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
