"""
Minimal Newick reader used to verify exported hierarchical trees.
Supports quoted and unquoted labels and branch lengths; no comments.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from domain.exceptions import DataValidationError

RESERVED = set("()[]':;, \t\n")


def quote_label(label: str) -> str:
    """Quote a label when it contains Newick punctuation."""
    if any(ch in RESERVED for ch in label):
        return "'" + label.replace("'", "''") + "'"
    return label


@dataclass
class NewickNode:
    name: str = ""
    length: Optional[float] = None
    children: List["NewickNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children


def parse_newick(text: str) -> NewickNode:
    """Parse one Newick tree terminated by ';'."""
    text = text.strip()
    if not text.endswith(";"):
        raise DataValidationError("Newick text must end with ';'")

    root = NewickNode()
    node = root
    stack: List[NewickNode] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            child = NewickNode()
            node.children.append(child)
            stack.append(node)
            node = child
        elif ch == ",":
            if not stack:
                raise DataValidationError(f"Unexpected ',' at position {i}")
            child = NewickNode()
            stack[-1].children.append(child)
            node = child
        elif ch == ")":
            if not stack:
                raise DataValidationError(f"Unbalanced ')' at position {i}")
            node = stack.pop()
        elif ch == ":":
            j = i + 1
            while j < len(text) and text[j] not in ",);":
                j += 1
            try:
                node.length = float(text[i + 1:j])
            except ValueError:
                raise DataValidationError(f"Bad branch length {text[i + 1:j]!r}")
            i = j - 1
        elif ch == ";":
            if stack or i != len(text) - 1:
                raise DataValidationError("Newick tree ended early")
        elif ch == "'":
            j = i + 1
            label = []
            while True:
                if j >= len(text):
                    raise DataValidationError("Unterminated quoted label")
                if text[j] == "'":
                    if j + 1 < len(text) and text[j + 1] == "'":
                        label.append("'")
                        j += 2
                        continue
                    break
                label.append(text[j])
                j += 1
            node.name = "".join(label)
            i = j
        elif not ch.isspace():
            j = i
            while j < len(text) and text[j] not in RESERVED:
                j += 1
            node.name = text[i:j]
            i = j - 1
        i += 1
    if stack:
        raise DataValidationError("Unbalanced '(' in Newick text")
    return root


def newick_cophenetic(text: str) -> Tuple[List[str], np.ndarray]:
    """
    Leaf names in reading order and, per leaf pair, the mean branch length
    from the two leaves up to their lowest common ancestor.
    """
    root = parse_newick(text)
    paths: Dict[str, List[Tuple[int, float]]] = {}
    names: List[str] = []

    def walk(node: NewickNode, ancestry: List[Tuple[int, float]], depth: float) -> None:
        ancestry = ancestry + [(id(node), depth)]
        if node.is_leaf:
            names.append(node.name)
            paths[node.name] = ancestry
            return
        for child in node.children:
            walk(child, ancestry, depth + (child.length or 0.0))

    walk(root, [], 0.0)
    n = len(names)
    u = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            path_a, path_b = paths[names[a]], paths[names[b]]
            k = 0
            while k < min(len(path_a), len(path_b)) and path_a[k][0] == path_b[k][0]:
                k += 1
            lca_depth = path_a[k - 1][1]
            u[a, b] = u[b, a] = (path_a[-1][1] + path_b[-1][1]) / 2.0 - lca_depth
    return names, u
