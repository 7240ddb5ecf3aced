"""Gate-list circuit representation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError

NATIVE_KINDS = frozenset({"ry", "rz", "cx"})
ROTATION_KINDS = frozenset({"ry", "rz"})
MUX_KINDS = frozenset({"mux_ry", "mux_rz"})
GATE_KINDS = NATIVE_KINDS | MUX_KINDS | {"cswap"}

_ARITY = {"ry": 1, "rz": 1, "cx": 2, "cswap": 3}


@dataclass(frozen=True)
class Gate:
    """A single gate.

    ``qubits`` holds the operands in a kind-specific order: ``(target,)`` for
    rotations, ``(control, target)`` for CX, ``(control, a, b)`` for CSWAP and
    ``(*controls, target)`` for multiplexers.  A multiplexer with ``c``
    controls carries ``2**c`` angles; ``angles[j]`` applies when the controls
    read ``j`` with the first control as the most significant bit.
    """

    kind: str
    qubits: tuple[int, ...]
    angles: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValidationError(f"repeated qubit in {self.kind} {self.qubits}")
        if self.kind in MUX_KINDS:
            if len(self.angles) != 2 ** (len(self.qubits) - 1):
                raise ValidationError("multiplexer needs 2**controls angles")
        elif len(self.qubits) != _ARITY[self.kind]:
            raise ValidationError(f"{self.kind} takes {_ARITY[self.kind]} qubits")
        elif len(self.angles) != (1 if self.kind in ROTATION_KINDS else 0):
            raise ValidationError(f"wrong number of angles for {self.kind}")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in MUX_KINDS:
            return self.qubits[:-1]
        if self.kind in ("cx", "cswap"):
            return self.qubits[:1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def is_native(self) -> bool:
        return self.kind in NATIVE_KINDS

    @property
    def is_permutation(self) -> bool:
        """True when the gate maps computational basis states to basis states."""
        return self.kind in ("cx", "cswap")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "qubits": list(self.qubits)}
        if self.angles:
            out["angles"] = list(self.angles)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Gate":
        return cls(data["kind"], tuple(data["qubits"]), tuple(data.get("angles", ())))


def ry(theta: float, target: int) -> Gate:
    return Gate("ry", (target,), (float(theta),))


def rz(phi: float, target: int) -> Gate:
    return Gate("rz", (target,), (float(phi),))


def cx(control: int, target: int) -> Gate:
    return Gate("cx", (control, target))


def cswap(control: int, a: int, b: int) -> Gate:
    return Gate("cswap", (control, a, b))


def mux_ry(angles: Sequence[float], controls: Sequence[int], target: int) -> Gate:
    return Gate("mux_ry", (*controls, target), tuple(float(a) for a in angles))


def mux_rz(angles: Sequence[float], controls: Sequence[int], target: int) -> Gate:
    return Gate("mux_rz", (*controls, target), tuple(float(a) for a in angles))


@dataclass(frozen=True)
class Circuit:
    """Immutable circuit.

    ``outputs[k]`` is the qubit carrying output bit position ``k``; position 0
    is the most significant bit of the encoded index.  Every other qubit is an
    ancilla.  ``global_phase`` is the scalar phase picked up by lowering.
    """

    width: int
    gates: tuple[Gate, ...] = ()
    outputs: tuple[int, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        for gate in self.gates:
            if any(not 0 <= q < self.width for q in gate.qubits):
                raise ValidationError(f"{gate} touches a qubit outside width {self.width}")
        if len(set(self.outputs)) != len(self.outputs):
            raise ValidationError("output qubits must be distinct")
        if any(not 0 <= q < self.width for q in self.outputs):
            raise ValidationError("output qubit outside circuit width")

    @property
    def n(self) -> int:
        return len(self.outputs)

    @property
    def roles(self) -> dict[int, tuple]:
        """``{qubit: ("output", position) | ("ancilla",)}``."""
        roles: dict[int, tuple] = {q: ("ancilla",) for q in range(self.width)}
        for pos, q in enumerate(self.outputs):
            roles[q] = ("output", pos)
        return roles

    @property
    def ancillas(self) -> tuple[int, ...]:
        outs = set(self.outputs)
        return tuple(q for q in range(self.width) if q not in outs)

    @property
    def is_lowered(self) -> bool:
        return all(g.is_native for g in self.gates)

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def to_json(self) -> dict:
        roles = []
        for q in range(self.width):
            role = self.roles[q]
            roles.append({"qubit": q, "role": role[0], **({"bit": role[1]} if len(role) > 1 else {})})
        return {
            "width": self.width,
            "global_phase": self.global_phase,
            "roles": roles,
            "gates": [g.to_json() for g in self.gates],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "Circuit":
        outs = sorted((r["bit"], r["qubit"]) for r in data["roles"] if r["role"] == "output")
        return cls(
            width=int(data["width"]),
            gates=tuple(Gate.from_json(g) for g in data["gates"]),
            outputs=tuple(q for _, q in outs),
            global_phase=float(data.get("global_phase", 0.0)),
        )


@dataclass
class CircuitBuilder:
    """Mutable scratch space used while synthesizing a :class:`Circuit`."""

    width: int = 0
    gates: list[Gate] = field(default_factory=list)
    global_phase: float = 0.0

    def add_qubit(self) -> int:
        self.width += 1
        return self.width - 1

    def append(self, gate: Gate) -> None:
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        self.gates.extend(gates)

    def build(self, outputs: Sequence[int] = ()) -> Circuit:
        return Circuit(self.width, tuple(self.gates), tuple(outputs), self.global_phase)
