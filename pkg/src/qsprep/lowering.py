"""Lowering to {RY, RZ, CX}, ASAP scheduling and resource metrics.

Cost model: a multiplexer with ``c >= 1`` controls becomes ``2**c``
rotations interleaved with ``2**c`` CX (Gray-code schedule); a CSWAP becomes
``CX(b,a) Toffoli(ctl,a,b) CX(b,a)`` with the 6-CX Toffoli, i.e. 8 CX.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .circuit import Circuit, Gate, cx, rz, ry

# The native Toffoli below equals -exp(-i pi/8) * CCX; this undoes it.
_TOFFOLI_PHASE = math.pi + math.pi / 8


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def multiplexer_angles(angles: tuple[float, ...]) -> list[float]:
    """Rotation angles for the Gray-code schedule.

    Step ``i`` sees control value ``j`` through the sign
    ``(-1)**popcount(j & gray(i))``; inverting that Walsh-type matrix gives
    the per-step angles.
    """
    size = len(angles)
    out = []
    for i in range(size):
        g = gray_code(i)
        total = math.fsum(
            -a if bin(j & g).count("1") % 2 else a for j, a in enumerate(angles)
        )
        out.append(total / size)
    return out


def _lower_mux(gate: Gate) -> list[Gate]:
    rot = ry if gate.kind == "mux_ry" else rz
    controls = gate.controls
    c = len(controls)
    if c == 0:
        return [rot(gate.angles[0], gate.target)]
    size = 2**c
    out = []
    for i, phi in enumerate(multiplexer_angles(gate.angles)):
        out.append(rot(phi, gate.target))
        flipped = gray_code(i) ^ gray_code((i + 1) % size)
        bit = flipped.bit_length() - 1
        out.append(cx(controls[c - 1 - bit], gate.target))
    return out


def _h(q: int) -> list[Gate]:
    # RY(pi/2) RZ(pi) = -i H
    return [rz(math.pi, q), ry(math.pi / 2, q)]


def toffoli(c1: int, c2: int, t: int) -> list[Gate]:
    """Standard 6-CX Toffoli with T = RZ(pi/4) up to the phase ``_TOFFOLI_PHASE``."""
    t4 = math.pi / 4
    return [
        *_h(t),
        cx(c2, t), rz(-t4, t),
        cx(c1, t), rz(t4, t),
        cx(c2, t), rz(-t4, t),
        cx(c1, t), rz(t4, c2), rz(t4, t),
        *_h(t),
        cx(c1, c2), rz(t4, c1), rz(-t4, c2),
        cx(c1, c2),
    ]


def lower_gate(gate: Gate) -> tuple[list[Gate], float]:
    """Native replacement for one gate and the global phase it contributes."""
    if gate.kind in ("ry", "rz"):
        return ([] if gate.angles[0] == 0.0 else [gate]), 0.0
    if gate.kind == "cx":
        return [gate], 0.0
    if gate.kind == "cswap":
        ctl, a, b = gate.qubits
        return [cx(b, a), *toffoli(ctl, a, b), cx(b, a)], _TOFFOLI_PHASE
    if all(a == 0.0 for a in gate.angles):
        return [], 0.0
    return _lower_mux(gate), 0.0


def lower(c: Circuit) -> Circuit:
    gates: list[Gate] = []
    phase = c.global_phase
    for gate in c.gates:
        seq, extra = lower_gate(gate)
        gates.extend(seq)
        phase += extra
    phase = math.remainder(phase, 2 * math.pi)
    return Circuit(c.width, tuple(gates), c.outputs, phase)


def asap_layers(gates) -> list[int]:
    """1-based ASAP layer of every gate."""
    last: dict[int, int] = {}
    layers = []
    for gate in gates:
        layer = 1 + max((last.get(q, 0) for q in gate.qubits), default=0)
        for q in gate.qubits:
            last[q] = layer
        layers.append(layer)
    return layers


def asap_depth(gates) -> int:
    return max(asap_layers(gates), default=0)


def _rotation_weight(gate: Gate) -> int:
    if gate.kind in ("ry", "rz"):
        return 1
    return len(gate.angles)


def stage1_steps(c: Circuit) -> int:
    """Longest chain of rotation steps; a multiplexer counts its ``2**c`` angles."""
    finish: dict[int, int] = {}
    best = 0
    for gate in c.gates:
        if gate.kind not in ("ry", "rz", "mux_ry", "mux_rz"):
            continue
        t = max(finish.get(q, 0) for q in gate.qubits) + _rotation_weight(gate)
        for q in gate.qubits:
            finish[q] = t
        best = max(best, t)
    return best


def cswap_depth(c: Circuit) -> int:
    """Sequential depth of the CSWAP network alone."""
    return asap_depth([g for g in c.gates if g.kind == "cswap"])


@dataclass(frozen=True)
class ResourceReport:
    width: int
    native_depth: int
    cx_count: int
    abstract_stage1_steps: int
    abstract_stage2_cswap_depth: int

    @property
    def abstract_depth(self) -> int:
        return self.abstract_stage1_steps + self.abstract_stage2_cswap_depth

    def to_json(self) -> dict:
        return {**asdict(self), "abstract_depth": self.abstract_depth}


def metrics(c: Circuit) -> ResourceReport:
    native = c if c.is_lowered else lower(c)
    return ResourceReport(
        width=c.width,
        native_depth=asap_depth(native.gates),
        cx_count=native.count("cx"),
        abstract_stage1_steps=stage1_steps(c),
        abstract_stage2_cswap_depth=cswap_depth(c),
    )
