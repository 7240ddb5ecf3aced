"""Circuit construction walks over the angle tree.

The split ``s`` counts angle-tree levels from the bottom (``1 <= s <= n``).
Sub-trees rooted at depth ``n - s`` are loaded top-down into ``s``-qubit
registers (stage 1); every node above that depth gets its own qubit and
merges its children's registers with a CSWAP chain (stage 2).

Qubits are allocated stage-2 nodes first, in pre-order from the root, then
stage-1 registers left to right.  Gates are emitted as: stage-1 registers
left to right, stage-2 rotations in pre-order, then the CSWAP chains level
by level from the bottom, left to right within a level.  RZ and multiplexed
RZ gates are emitted only when some phase angle is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import trees
from .amplitudes import AmplitudeVector, SparseAmplitudeVector
from .circuit import Circuit, CircuitBuilder, Gate, cswap, mux_ry, mux_rz, ry, rz
from .errors import LengthMismatch, SparseTreeUnsupported, SplitOutOfRange, ValidationError
from .trees import AngleTreeNode

METHODS = ("top_down", "bottom_up", "bidirectional", "sparse_bidirectional")


@dataclass(frozen=True)
class SynthesisPlan:
    n: int
    s: int
    method: str = "bidirectional"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}")
        check_split(self.n, self.s)
        if self.method == "top_down" and self.s != self.n:
            raise ValidationError("top_down implies s = n")
        if self.method == "bottom_up" and self.s != 1:
            raise ValidationError("bottom_up implies s = 1")

    @property
    def depth(self) -> int:
        """Tree depth of the stage-1 sub-tree roots."""
        return self.n - self.s


def check_split(n: int, s: int) -> None:
    if not 1 <= s <= n:
        raise SplitOutOfRange(f"split {s} outside [1, {n}]")


def _rotations(target: int, node: AngleTreeNode) -> list[Gate]:
    gates = [ry(node.angle_y, target)]
    if node.angle_z != 0.0:
        gates.append(rz(node.angle_z, target))
    return gates


def cswap_chain(circuit: CircuitBuilder, control: int, left_path: Sequence[int], right_path: Sequence[int]) -> None:
    """Append CSWAPs sharing ``control`` that exchange two equal-length registers."""
    if len(left_path) != len(right_path) or not left_path:
        raise LengthMismatch(f"registers of length {len(left_path)} and {len(right_path)}")
    if control in left_path or control in right_path or set(left_path) & set(right_path):
        raise ValidationError("control and registers must be disjoint")
    for a, b in zip(left_path, right_path):
        circuit.append(cswap(control, a, b))


def _load_register(circuit: CircuitBuilder, root: AngleTreeNode, qubits: Sequence[int], nodes: dict) -> None:
    """Top-down load of the sub-tree under ``root`` into ``qubits`` (one per level)."""
    circuit.extend(_rotations(qubits[0], root))
    for t in range(1, len(qubits)):
        level = root.level + t
        base = root.index << t
        layer = [nodes.get((level, base + j)) for j in range(2**t)]
        ys = [0.0 if nd is None else nd.angle_y for nd in layer]
        zs = [0.0 if nd is None else nd.angle_z for nd in layer]
        controls = qubits[:t]
        circuit.append(mux_ry(ys, controls, qubits[t]))
        if any(z != 0.0 for z in zs):
            circuit.append(mux_rz(zs, controls, qubits[t]))


def _two_stage(tree: AngleTreeNode, s: int) -> Circuit:
    n = trees.tree_height(tree)
    check_split(n, s)
    d = n - s
    nodes = trees.node_map(tree)
    circuit = CircuitBuilder()

    stage2 = [nd for nd in trees.iter_nodes(tree) if nd.level < d]
    qubit = {(nd.level, nd.index): circuit.add_qubit() for nd in stage2}
    registers: dict[tuple[int, int], list[int]] = {}
    roots = sorted((nd for nd in nodes.values() if nd.level == d), key=lambda nd: nd.index)
    for root in roots:
        registers[(root.level, root.index)] = [circuit.add_qubit() for _ in range(s)]

    for root in roots:
        _load_register(circuit, root, registers[(root.level, root.index)], nodes)
    for nd in stage2:
        circuit.extend(_rotations(qubit[(nd.level, nd.index)], nd))

    def path(nd: AngleTreeNode) -> list[int]:
        key = (nd.level, nd.index)
        if key in registers:
            return registers[key]
        return [qubit[key]] + path(trees.first_child(nd))

    for level in range(d - 1, -1, -1):
        for nd in sorted((x for x in stage2 if x.level == level), key=lambda x: x.index):
            if nd.left is not None and nd.right is not None:
                cswap_chain(circuit, qubit[(nd.level, nd.index)], path(nd.left), path(nd.right))

    return circuit.build(path(tree))


def synth_bidirectional(tree: AngleTreeNode, s: int) -> Circuit:
    return _two_stage(tree, s)


def synth_sparse_bidirectional(tree: AngleTreeNode, s: int) -> Circuit:
    """Same walk on a pruned tree: missing sub-trees get no qubits or gates."""
    return _two_stage(tree, s)


def synth_top_down(tree: AngleTreeNode) -> Circuit:
    """Multiplexed-rotation walk from root to leaves on ``n`` qubits."""
    if not trees.is_full(tree):
        raise SparseTreeUnsupported("top-down walk requires a full angle tree")
    n = trees.tree_height(tree)
    circuit = CircuitBuilder()
    qubits = [circuit.add_qubit() for _ in range(n)]
    levels: list[list[AngleTreeNode]] = [[tree]]
    for _ in range(1, n):
        levels.append([c for nd in levels[-1] for c in (nd.left, nd.right)])
    circuit.extend(_rotations(qubits[0], tree))
    for t in range(1, n):
        ys = [nd.angle_y for nd in levels[t]]
        zs = [nd.angle_z for nd in levels[t]]
        circuit.append(mux_ry(ys, qubits[:t], qubits[t]))
        if any(zs):
            circuit.append(mux_rz(zs, qubits[:t], qubits[t]))
    return circuit.build(qubits)


def synth_bottom_up(tree: AngleTreeNode) -> Circuit:
    """One qubit per angle-tree node, single-qubit states merged by CSWAP chains."""
    n = trees.tree_height(tree)
    circuit = CircuitBuilder()
    inner = [nd for nd in trees.iter_nodes(tree) if nd.level < n - 1]
    bottom = sorted(
        (nd for nd in trees.iter_nodes(tree) if nd.level == n - 1), key=lambda nd: nd.index
    )
    qubit = {}
    for nd in inner + bottom:
        qubit[(nd.level, nd.index)] = circuit.add_qubit()
    for nd in bottom + inner:
        circuit.extend(_rotations(qubit[(nd.level, nd.index)], nd))

    def chain_qubits(nd):
        return [qubit[(x.level, x.index)] for x in trees.left_view(nd)]

    for level in range(n - 2, -1, -1):
        for nd in sorted((x for x in inner if x.level == level), key=lambda x: x.index):
            if nd.left is not None and nd.right is not None:
                cswap_chain(circuit, qubit[(nd.level, nd.index)], chain_qubits(nd.left), chain_qubits(nd.right))
    return circuit.build(chain_qubits(tree))


def synthesize(tree: AngleTreeNode, plan: SynthesisPlan) -> Circuit:
    if plan.method == "top_down":
        return synth_top_down(tree)
    if plan.method == "bottom_up":
        return synth_bottom_up(tree)
    if plan.method == "sparse_bidirectional":
        return synth_sparse_bidirectional(tree, plan.s)
    return synth_bidirectional(tree, plan.s)


def angle_tree_for(v: AmplitudeVector | SparseAmplitudeVector) -> AngleTreeNode:
    if isinstance(v, SparseAmplitudeVector):
        return trees.build_angle_tree(trees.build_sparse_state_tree(v))
    return trees.build_angle_tree(trees.build_state_tree(v))


def prepare(v: AmplitudeVector | SparseAmplitudeVector, s: int | None = None, method: str | None = None) -> Circuit:
    """Synthesize a state-preparation circuit for ``v``.

    ``s`` defaults to ``n`` (top-down).  ``method`` defaults to
    ``sparse_bidirectional`` for sparse input and ``bidirectional`` otherwise.
    """
    sparse = isinstance(v, SparseAmplitudeVector)
    if method is None:
        method = "sparse_bidirectional" if sparse else "bidirectional"
    n = v.n
    if method == "top_down":
        s = n
    elif method == "bottom_up":
        s = 1
    elif s is None:
        s = n
    plan = SynthesisPlan(n, s, method)
    return synthesize(angle_tree_for(v), plan)

