from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Iterator, Optional, Tuple

Path = Tuple[int, ...]  # child labels from the root down; the root is ()

class TreeNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: Optional[int] = Field(default=None, ge=1, le=3, description="Color 1, 2 or 3; None only for the root.")
    children: Tuple["TreeNode", ...] = Field(default=(), description="At most three children, label-ascending.")

    @model_validator(mode="after")
    def check_children(self):
        labels = [child.label for child in self.children]
        if len(labels) > 3:
            raise ValueError(f"a node has at most 3 children, got {len(labels)}")
        if any(label is None for label in labels):
            raise ValueError("non-root nodes must carry a label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"sibling labels must be distinct, got {labels}")
        if labels != sorted(labels):
            raise ValueError(f"children must be stored label-ascending, got {labels}")
        return self

    def child(self, label: int) -> Optional["TreeNode"]:
        for c in self.children:
            if c.label == label:
                return c
        return None

    def size(self) -> int:
        total = 0
        stack = [self]
        while stack:
            node = stack.pop()
            total += 1
            stack.extend(node.children)
        return total

class ColoredTernaryTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    root: TreeNode
    size: int = Field(ge=1, description="Node count |T|.")

    @model_validator(mode="after")
    def check_root(self):
        if self.root.label is not None:
            raise ValueError("the root carries no label")
        if self.root.size() != self.size:
            raise ValueError(f"size {self.size} does not match {self.root.size()} nodes")
        return self

    def iter_nodes(self) -> Iterator[Tuple[Path, TreeNode]]:
        """Pre-order (path, node) pairs, children label-ascending."""
        stack = [((), self.root)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for c in reversed(node.children):
                stack.append((path + (c.label,), c))

TreeNode.model_rebuild()
