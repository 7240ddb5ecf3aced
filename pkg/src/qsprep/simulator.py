"""Exact simulation for verifying prepared states.

Two engines live here.  :func:`simulate` is a dense statevector simulator
for circuits up to ``QSPREP_MAX_SIM_QUBITS`` qubits.  :func:`circuit_marginals`
and :func:`reduced_density_matrix` track independent qubit groups, trace out
ancillas after their last gate and switch to classical probabilities once
only basis permutations (CX, CSWAP) remain, so they handle the wide
bottom-up circuits whose full statevector does not fit in memory.

Qubit 0 is the most significant bit of every basis index.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .amplitudes import AmplitudeVector
from .circuit import Circuit, Gate
from .errors import DimensionMismatch, TooWide, ValidationError

DEFAULT_MAX_SIM_QUBITS = 26


def max_sim_qubits() -> int:
    return int(os.environ.get("QSPREP_MAX_SIM_QUBITS", DEFAULT_MAX_SIM_QUBITS))


@dataclass(frozen=True)
class StateVector:
    width: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class Distribution:
    probs: np.ndarray
    shots: int | None = None
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.probs)

    def to_json(self) -> list[float]:
        return [float(p) for p in self.probs]


# Gate matrices ---------------------------------------------------------------


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(phi: float) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * phi), 0], [0, cmath.exp(0.5j * phi)]], dtype=complex)


def _rotation(kind: str, angle: float) -> np.ndarray:
    return ry_matrix(angle) if kind.endswith("ry") else rz_matrix(angle)


def gate_unitary(gate: Gate, width: int) -> np.ndarray:
    """Full ``2**width`` unitary built column by column from basis-state action.

    Deliberately independent of the in-place kernels below; tests use it as
    the matrix oracle.
    """
    dim = 2**width
    u = np.zeros((dim, dim), dtype=complex)

    def bit(b, q):
        return (b >> (width - 1 - q)) & 1

    def flip(b, q):
        return b ^ (1 << (width - 1 - q))

    for col in range(dim):
        if gate.kind == "cx":
            c, t = gate.qubits
            u[flip(col, t) if bit(col, c) else col, col] = 1
        elif gate.kind == "cswap":
            c, a, b = gate.qubits
            row = col
            if bit(col, c) and bit(col, a) != bit(col, b):
                row = flip(flip(col, a), b)
            u[row, col] = 1
        else:
            if gate.kind in ("ry", "rz"):
                angle = gate.angles[0]
            else:
                j = 0
                for q in gate.controls:
                    j = (j << 1) | bit(col, q)
                angle = gate.angles[j]
            m = _rotation(gate.kind, angle)
            t = gate.target
            tb = bit(col, t)
            base = col if tb == 0 else flip(col, t)
            u[base, col] += m[0, tb]
            u[flip(base, t), col] += m[1, tb]
    return u


def circuit_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2**c.width, dtype=complex)
    for gate in c.gates:
        u = gate_unitary(gate, c.width) @ u
    return cmath.exp(1j * c.global_phase) * u


# In-place kernels on (2,)*k tensors ---------------------------------------------


def _index(ndim: int, fixed: dict[int, int]) -> list:
    idx: list = [slice(None)] * ndim
    for ax, v in fixed.items():
        idx[ax] = v
    return idx


def _apply_1q(t: np.ndarray, fixed: dict[int, int], axis: int, m: np.ndarray) -> None:
    idx = _index(t.ndim, fixed)
    idx[axis] = 0
    i0 = tuple(idx)
    idx[axis] = 1
    i1 = tuple(idx)
    if m[0, 1] == 0 and m[1, 0] == 0:
        t[i0] *= m[0, 0]
        t[i1] *= m[1, 1]
        return
    a = t[i0].copy()
    b = t[i1]
    t[i0] = m[0, 0] * a + m[0, 1] * b
    t[i1] = m[1, 0] * a + m[1, 1] * b


def _swap(t: np.ndarray, fixed: dict[int, int], pos_a: dict[int, int], pos_b: dict[int, int]) -> None:
    ia = tuple(_index(t.ndim, {**fixed, **pos_a}))
    ib = tuple(_index(t.ndim, {**fixed, **pos_b}))
    tmp = t[ia].copy()
    t[ia] = t[ib]
    t[ib] = tmp


def apply_gate(t: np.ndarray, gate: Gate, axis: dict[int, int], conj: bool = False) -> None:
    """Apply ``gate`` (or its complex conjugate) in place; ``axis`` maps qubit -> tensor axis."""
    kind = gate.kind
    if kind == "cx":
        c, q = (axis[x] for x in gate.qubits)
        _swap(t, {c: 1}, {q: 0}, {q: 1})
    elif kind == "cswap":
        c, a, b = (axis[x] for x in gate.qubits)
        _swap(t, {c: 1}, {a: 0, b: 1}, {a: 1, b: 0})
    elif kind in ("ry", "rz"):
        m = _rotation(kind, gate.angles[0])
        _apply_1q(t, {}, axis[gate.target], m.conj() if conj else m)
    else:
        controls = [axis[q] for q in gate.controls]
        c = len(controls)
        for j, angle in enumerate(gate.angles):
            fixed = {ax: (j >> (c - 1 - k)) & 1 for k, ax in enumerate(controls)}
            m = _rotation(kind, angle)
            _apply_1q(t, fixed, axis[gate.target], m.conj() if conj else m)


# Dense statevector --------------------------------------------------------------


def simulate(c: Circuit, max_qubits: int | None = None) -> StateVector:
    cap = max_sim_qubits() if max_qubits is None else max_qubits
    if c.width > cap:
        raise TooWide(f"width {c.width} exceeds simulation cap {cap}")
    state = np.zeros((2,) * c.width, dtype=complex)
    state[(0,) * c.width] = 1.0
    axis = {q: q for q in range(c.width)}
    for gate in c.gates:
        apply_gate(state, gate, axis)
    amps = state.reshape(-1)
    if c.global_phase:
        amps = amps * cmath.exp(1j * c.global_phase)
    return StateVector(c.width, amps)


def output_marginals(psi: StateVector, outputs: Sequence[int]) -> Distribution:
    """Probability of each output pattern, summing over every other qubit."""
    probs = psi.probabilities().reshape((2,) * psi.width)
    rest = tuple(q for q in range(psi.width) if q not in set(outputs))
    probs = probs.sum(axis=rest) if rest else probs
    kept = [q for q in range(psi.width) if q in set(outputs)]
    order = [kept.index(q) for q in outputs]
    return Distribution(np.transpose(probs, order).reshape(-1))


def sample_distribution(dist: Distribution, shots: int, seed: int = 0) -> Distribution:
    """Empirical distribution from ``shots`` categorical draws (numpy PCG64)."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p = np.clip(dist.probs, 0.0, None)
    counts = np.random.default_rng(seed).multinomial(shots, p / p.sum())
    return Distribution(counts / shots, shots=shots, seed=seed)


def sample(psi: StateVector, shots: int, seed: int = 0, outputs: Sequence[int] | None = None) -> Distribution:
    qubits = range(psi.width) if outputs is None else outputs
    return sample_distribution(output_marginals(psi, qubits), shots, seed)


def state_distance(psi: StateVector, target: AmplitudeVector, outputs: Sequence[int] | None = None) -> dict:
    """Overlap ``|<target|psi>|`` and its phase; ``psi`` must carry no ancillas."""
    if psi.width != target.n:
        raise DimensionMismatch(f"state has {psi.width} qubits, target {target.n}")
    amps = psi.amplitudes
    if outputs is not None:
        amps = np.transpose(amps.reshape((2,) * psi.width), list(outputs)).reshape(-1)
    inner = complex(np.vdot(target.to_numpy(), amps))
    return {"overlap": abs(inner), "global_phase": cmath.phase(inner)}


def mae(est, target) -> float:
    a = np.asarray(getattr(est, "probs", est), dtype=float)
    b = np.asarray(getattr(target, "probs", target), dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"lengths {a.shape} and {b.shape} differ")
    return float(np.mean(np.abs(a - b)))


# Grouped engine -----------------------------------------------------------------


class _Group:
    """Joint state of a set of qubits.

    ``mode`` is ``pure`` (amplitude tensor), ``mixed`` (density tensor, row
    axes then column axes) or ``classical`` (probability tensor).
    """

    def __init__(self, qubits, data, mode):
        self.qubits = list(qubits)
        self.data = data
        self.mode = mode

    @classmethod
    def zero(cls, q, mode):
        data = np.zeros(2, dtype=float if mode == "classical" else complex)
        data[0] = 1.0
        if mode == "mixed":
            data = np.zeros((2, 2), dtype=complex)
            data[0, 0] = 1.0
        return cls([q], data, mode)

    @property
    def k(self) -> int:
        return len(self.qubits)

    @property
    def cost(self) -> int:
        return 2 * self.k if self.mode == "mixed" else self.k

    def to_mixed(self) -> None:
        if self.mode == "pure":
            self.data = np.multiply.outer(self.data, self.data.conj())
            self.mode = "mixed"

    def to_classical(self) -> None:
        if self.mode == "pure":
            self.data = np.abs(self.data) ** 2
        elif self.mode == "mixed":
            k = self.k
            flat = self.data.reshape(2**k, 2**k)
            self.data = np.real(np.diagonal(flat)).reshape((2,) * k).copy() if k else np.real(flat)
        self.mode = "classical"

    def apply(self, gate: Gate) -> None:
        axis = {q: i for i, q in enumerate(self.qubits)}
        if self.mode == "mixed":
            apply_gate(self.data, gate, axis)
            apply_gate(self.data, gate, {q: i + self.k for q, i in axis.items()}, conj=True)
        else:
            apply_gate(self.data, gate, axis)

    def trace_out(self, q: int) -> None:
        i = self.qubits.index(q)
        if self.mode == "classical":
            self.data = self.data.sum(axis=i)
        else:
            self.to_mixed()
            self.data = np.trace(self.data, axis1=i, axis2=i + self.k)
        self.qubits.pop(i)


def _merge(groups: list[_Group]) -> _Group:
    modes = {g.mode for g in groups}
    if "mixed" in modes:
        for g in groups:
            g.to_mixed()
        mode = "mixed"
    else:
        mode = modes.pop()
    out = groups[0]
    for g in groups[1:]:
        if mode == "mixed":
            ka, kb = out.k, g.k
            data = np.multiply.outer(out.data, g.data)
            order = (
                list(range(ka))
                + list(range(2 * ka, 2 * ka + kb))
                + list(range(ka, 2 * ka))
                + list(range(2 * ka + kb, 2 * ka + 2 * kb))
            )
            data = np.transpose(data, order).copy()
        else:
            data = np.multiply.outer(out.data, g.data)
        out = _Group(out.qubits + g.qubits, data, mode)
    return out


def _run_groups(c: Circuit, keep: Sequence[int], diagonal_only: bool, max_qubits: int | None) -> _Group:
    cap = max_sim_qubits() if max_qubits is None else max_qubits
    keep_set = set(keep)
    last_use: dict[int, int] = {}
    for i, gate in enumerate(c.gates):
        for q in gate.qubits:
            last_use[q] = i
    switch = len(c.gates) + 1
    if diagonal_only:
        switch = len(c.gates)
        while switch > 0 and c.gates[switch - 1].is_permutation:
            switch -= 1
    owner: dict[int, _Group] = {}
    mode = "pure"

    def group_of(q):
        if q not in owner:
            owner[q] = _Group.zero(q, mode)
        return owner[q]

    for i, gate in enumerate(c.gates):
        if i == switch:
            mode = "classical"
            for g in {id(g): g for g in owner.values()}.values():
                g.to_classical()
        parts = list({id(g): g for g in (group_of(q) for q in gate.qubits)}.values())
        group = parts[0] if len(parts) == 1 else _merge(parts)
        if group.cost > cap:
            raise TooWide(f"live group of {group.k} qubits exceeds simulation cap {cap}")
        for q in group.qubits:
            owner[q] = group
        group.apply(gate)
        for q in gate.qubits:
            if last_use[q] == i and q not in keep_set:
                group.trace_out(q)
                del owner[q]

    if diagonal_only and switch >= len(c.gates):
        mode = "classical"
        for g in {id(g): g for g in owner.values()}.values():
            g.to_classical()
    parts = list({id(g): g for g in (group_of(q) for q in keep)}.values())
    final = parts[0] if len(parts) == 1 else _merge(parts)
    if diagonal_only:
        final.to_classical()
    return final


def circuit_marginals(c: Circuit, outputs: Sequence[int] | None = None, max_qubits: int | None = None) -> Distribution:
    """Exact output-pattern probabilities without building the full state."""
    outputs = list(c.outputs if outputs is None else outputs)
    group = _run_groups(c, outputs, diagonal_only=True, max_qubits=max_qubits)
    order = [group.qubits.index(q) for q in outputs]
    return Distribution(np.transpose(group.data, order).reshape(-1).astype(float))


def reduced_density_matrix(c: Circuit, outputs: Sequence[int] | None = None, max_qubits: int | None = None) -> np.ndarray:
    """Density matrix of the output qubits with every ancilla traced out."""
    outputs = list(c.outputs if outputs is None else outputs)
    group = _run_groups(c, outputs, diagonal_only=False, max_qubits=max_qubits)
    group.to_mixed()
    k = group.k
    order = [group.qubits.index(q) for q in outputs]
    data = np.transpose(group.data, order + [i + k for i in order])
    return data.reshape(2**k, 2**k)
