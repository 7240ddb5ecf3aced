"""State trees and angle trees.

Levels run from 0 at the root to ``n`` at the leaves of the state tree.  The
angle tree mirrors the state tree without its leaf level, so its deepest
level is ``n - 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .amplitudes import AmplitudeVector, SparseAmplitudeVector


@dataclass(frozen=True)
class StateTreeNode:
    index: int
    level: int
    amplitude: complex
    left: Optional["StateTreeNode"] = None
    right: Optional["StateTreeNode"] = None

    @property
    def magnitude(self) -> float:
        return abs(self.amplitude)

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None


@dataclass(frozen=True)
class AngleTreeNode:
    index: int
    level: int
    angle_y: float
    angle_z: float
    left: Optional["AngleTreeNode"] = None
    right: Optional["AngleTreeNode"] = None

    @property
    def beta(self) -> complex:
        return math.sin(self.angle_y / 2) * cmath.exp(0.5j * self.angle_z)

    def children(self) -> list["AngleTreeNode"]:
        return [c for c in (self.left, self.right) if c is not None]


def _merge(index: int, level: int, left: StateTreeNode | None, right: StateTreeNode | None) -> StateTreeNode:
    # A zero or absent child carries no phase, so the parent takes the
    # surviving child's phase.  With no right amplitude the node gets no RZ,
    # and only this choice leaves the left branch with the right phase.
    ml = left.magnitude if left is not None else 0.0
    mr = right.magnitude if right is not None else 0.0
    mag = math.hypot(ml, mr)
    if ml > 0.0 and mr > 0.0:
        arg = (cmath.phase(left.amplitude) + cmath.phase(right.amplitude)) / 2
    elif ml > 0.0:
        arg = cmath.phase(left.amplitude)
    elif mr > 0.0:
        arg = cmath.phase(right.amplitude)
    else:
        arg = 0.0
    return StateTreeNode(index, level, cmath.rect(mag, arg), left, right)


def build_state_tree(v: AmplitudeVector) -> StateTreeNode:
    n = v.n
    nodes = [StateTreeNode(i, n, a) for i, a in enumerate(v.entries)]
    for level in range(n - 1, -1, -1):
        nodes = [
            _merge(nodes[k].index // 2, level, nodes[k], nodes[k + 1])
            for k in range(0, len(nodes), 2)
        ]
    return nodes[0]


def build_sparse_state_tree(v: SparseAmplitudeVector) -> StateTreeNode:
    """Pruned state tree holding only ancestors of nonzero leaves."""
    nodes = [StateTreeNode(i, v.n, a) for i, a in v.entries]
    for level in range(v.n - 1, -1, -1):
        parents = []
        k = 0
        while k < len(nodes):
            node = nodes[k]
            if node.index % 2 == 1:
                parents.append(_merge(node.index // 2, level, None, node))
                k += 1
            elif k + 1 < len(nodes) and nodes[k + 1].index == node.index + 1:
                parents.append(_merge(node.index // 2, level, node, nodes[k + 1]))
                k += 2
            else:
                parents.append(_merge(node.index // 2, level, node, None))
                k += 1
        nodes = parents
    return nodes[0]


def build_angle_tree(root: StateTreeNode) -> AngleTreeNode:
    angle_y = angle_z = 0.0
    if root.right is not None and root.amplitude != 0:
        ratio = root.right.amplitude / root.amplitude
        angle_y = 2 * math.asin(min(1.0, max(-1.0, abs(ratio))))
        # A zero ratio has no phase; cmath.phase(-0j) would give a spurious
        # RZ(+-2pi), which negates the branch.
        angle_z = 2 * cmath.phase(ratio) if ratio != 0 else 0.0
    left = right = None
    if root.left is not None and not root.left.is_leaf:
        left = build_angle_tree(root.left)
    if root.right is not None and not root.right.is_leaf:
        right = build_angle_tree(root.right)
    return AngleTreeNode(root.index, root.level, angle_y, angle_z, left, right)


def first_child(node):
    """Left child when present, otherwise the right one."""
    return node.left if node.left is not None else node.right


def left_view(root) -> list:
    """Nodes on the leftmost existing path, root first."""
    path = []
    node = root
    while node is not None:
        path.append(node)
        node = first_child(node)
    return path


def iter_nodes(root) -> Iterator:
    """Pre-order traversal."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if node.right is not None:
            stack.append(node.right)
        if node.left is not None:
            stack.append(node.left)


def node_map(root) -> dict[tuple[int, int], object]:
    return {(node.level, node.index): node for node in iter_nodes(root)}


def tree_height(root) -> int:
    return len(left_view(root))


def is_full(root) -> bool:
    height = tree_height(root)
    return sum(1 for _ in iter_nodes(root)) == 2**height - 1


def tree_to_json(node) -> dict:
    """Debug export of either tree kind."""
    out: dict = {"level": node.level, "index": node.index}
    if isinstance(node, StateTreeNode):
        out["amplitude"] = [node.amplitude.real, node.amplitude.imag]
    else:
        out["angles"] = [node.angle_y, node.angle_z]
    out["children"] = [
        None if child is None else tree_to_json(child) for child in (node.left, node.right)
    ]
    return out
