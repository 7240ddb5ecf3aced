"""OPENQASM 2.0 export and a reader for the subset we emit."""

from __future__ import annotations

import re

from .circuit import Circuit, Gate, cswap, cx, rz, ry
from .errors import UnloweredGate, ValidationError
from .lowering import lower_gate

_FREDKIN_DEF = "gate fredkin c,a,b { cx b,a; ccx c,a,b; cx b,a; }"


def _fmt(x: float) -> str:
    return format(x, ".17g")


def export_qasm(c: Circuit, keep_high_level: bool = False) -> str:
    """Render ``c`` as OPENQASM 2.0.

    Only RY, RZ and CX are accepted unless ``keep_high_level`` is set; then
    multiplexers are expanded inline and CSWAP is kept as a ``fredkin`` gate
    defined in the header.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if keep_high_level and any(g.kind == "cswap" for g in c.gates):
        lines.append(_FREDKIN_DEF)
    lines.append("// outputs: " + " ".join(f"{pos}:q[{q}]" for pos, q in enumerate(c.outputs)))
    lines.append(f"// global_phase: {_fmt(c.global_phase)}")
    lines.append(f"qreg q[{c.width}];")
    for gate in c.gates:
        if gate.is_native:
            lines.append(_native_line(gate))
        elif not keep_high_level:
            raise UnloweredGate(f"{gate.kind} cannot be exported without keep_high_level")
        elif gate.kind == "cswap":
            ctl, a, b = gate.qubits
            lines.append(f"fredkin q[{ctl}],q[{a}],q[{b}];")
        else:
            seq, _ = lower_gate(gate)
            lines.extend(_native_line(g) for g in seq)
    return "\n".join(lines) + "\n"


def _native_line(gate: Gate) -> str:
    if gate.kind == "cx":
        return f"cx q[{gate.qubits[0]}],q[{gate.qubits[1]}];"
    return f"{gate.kind}({_fmt(gate.angles[0])}) q[{gate.target}];"


_ROT = re.compile(r"^(ry|rz)\(([^)]+)\) q\[(\d+)\];$")
_CX = re.compile(r"^cx q\[(\d+)\],q\[(\d+)\];$")
_FRED = re.compile(r"^fredkin q\[(\d+)\],q\[(\d+)\],q\[(\d+)\];$")
_QREG = re.compile(r"^qreg q\[(\d+)\];$")
_OUT = re.compile(r"(\d+):q\[(\d+)\]")


def parse_qasm(text: str) -> Circuit:
    """Read text produced by :func:`export_qasm`."""
    width = None
    outputs: dict[int, int] = {}
    phase = 0.0
    gates = []
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "OPENQASM 2.0;":
        raise ValidationError("missing OPENQASM 2.0 header")
    for ln in lines[1:]:
        if ln.startswith("include ") or ln.startswith("gate fredkin"):
            continue
        if ln.startswith("// outputs:"):
            outputs = {int(p): int(q) for p, q in _OUT.findall(ln)}
            continue
        if ln.startswith("// global_phase:"):
            phase = float(ln.split(":", 1)[1])
            continue
        if ln.startswith("//"):
            continue
        if m := _QREG.match(ln):
            width = int(m.group(1))
        elif m := _ROT.match(ln):
            make = ry if m.group(1) == "ry" else rz
            gates.append(make(float(m.group(2)), int(m.group(3))))
        elif m := _CX.match(ln):
            gates.append(cx(int(m.group(1)), int(m.group(2))))
        elif m := _FRED.match(ln):
            gates.append(cswap(*(int(g) for g in m.groups())))
        else:
            raise ValidationError(f"unrecognized QASM line: {ln}")
    if width is None:
        raise ValidationError("missing qreg declaration")
    return Circuit(width, tuple(gates), tuple(outputs[k] for k in sorted(outputs)), phase)
