import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsprep.amplitudes import load_vector, random_complex_vector
from qsprep.circuit import Circuit, Gate, cswap, cx, mux_ry, mux_rz, ry, rz
from qsprep.errors import DimensionMismatch, TooWide, ValidationError
from qsprep.lowering import lower
from qsprep.simulator import (
    Distribution,
    StateVector,
    apply_gate,
    circuit_marginals,
    gate_unitary,
    mae,
    max_sim_qubits,
    output_marginals,
    reduced_density_matrix,
    sample,
    sample_distribution,
    simulate,
    state_distance,
)
from qsprep.synthesis import prepare


def random_gate(kind, width, rng):
    qubits = [int(q) for q in rng.permutation(width)]
    if kind in ("ry", "rz"):
        return Gate(kind, (qubits[0],), (float(rng.uniform(-7, 7)),))
    if kind == "cx":
        return cx(qubits[0], qubits[1])
    if kind == "cswap":
        return cswap(*qubits[:3])
    c = int(rng.integers(0, width))
    return Gate(kind, tuple(qubits[: c + 1]), tuple(rng.uniform(-7, 7, 2**c)))


@pytest.mark.parametrize("kind", ["ry", "rz", "cx", "cswap", "mux_ry", "mux_rz"])
def test_kernel_matches_matrix_oracle(kind):
    rng = np.random.default_rng(7)
    for _ in range(20):
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        psi /= np.linalg.norm(psi)
        gate = random_gate(kind, 3, rng)
        t = psi.reshape(2, 2, 2).copy()
        apply_gate(t, gate, {0: 0, 1: 1, 2: 2})
        assert np.max(np.abs(t.reshape(-1) - gate_unitary(gate, 3) @ psi)) < 1e-12
        assert abs(np.linalg.norm(t) - 1) < 1e-10


def test_empty_circuit_state():
    assert simulate(Circuit(2)).amplitudes.tolist() == [1, 0, 0, 0]


def test_single_ry():
    amps = simulate(Circuit(1, (ry(math.pi / 2, 0),))).amplitudes
    assert np.allclose(amps, [2**-0.5, 2**-0.5], atol=1e-15)


def test_qubit_zero_is_most_significant():
    amps = simulate(Circuit(2, (ry(math.pi, 0),))).amplitudes
    assert abs(amps[2]) == pytest.approx(1)


def test_global_phase_applied():
    amps = simulate(Circuit(1, (), (0,), 0.5)).amplitudes
    assert amps[0] == pytest.approx(cmath.exp(0.5j))


@pytest.mark.parametrize("n", range(1, 6))
def test_lowered_and_unlowered_states_agree(n):
    v = random_complex_vector(n, np.random.default_rng(100 + n))
    for s in range(1, n + 1):
        c = prepare(v, s)
        if c.width > 14:
            continue
        a, b = simulate(c).amplitudes, simulate(lower(c)).amplitudes
        assert np.max(np.abs(a - b)) < 1e-10


def test_width_cap(monkeypatch):
    monkeypatch.setenv("QSPREP_MAX_SIM_QUBITS", "4")
    assert max_sim_qubits() == 4
    with pytest.raises(TooWide):
        simulate(Circuit(5))


def test_marginals_without_ancillas():
    v = random_complex_vector(3, np.random.default_rng(1))
    c = prepare(v, 3)
    psi = simulate(c)
    assert np.allclose(output_marginals(psi, c.outputs).probs, psi.probabilities(), atol=1e-15)


def test_marginals_bottom_up_experiment(v8):
    c = prepare(v8, 1)
    probs = output_marginals(simulate(c), c.outputs).probs
    assert np.max(np.abs(probs - [0.03, 0.06, 0.15, 0.05, 0.1, 0.3, 0.2, 0.11])) < 1e-9


def test_controlled_swap_marginals():
    # a|0>|psi>|phi> + b|1>|phi>|psi> with psi=|0>, phi=|1>; outputs = control, first register.
    theta = 1.1
    c = Circuit(3, (ry(theta, 0), ry(math.pi, 2), cswap(0, 1, 2)), (0, 1))
    a2, b2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    probs = output_marginals(simulate(c), c.outputs).probs
    assert np.allclose(probs, [a2, 0, 0, b2], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 4), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_grouped_engine_matches_dense(n, seed, data):
    v = random_complex_vector(n, np.random.default_rng(seed))
    s = data.draw(st.integers(1, n))
    c = prepare(v, s)
    dense = simulate(c)
    grouped = circuit_marginals(c).probs
    assert np.max(np.abs(grouped - output_marginals(dense, c.outputs).probs)) < 1e-12
    rho = reduced_density_matrix(c)
    psi = dense.amplitudes.reshape((2,) * c.width)
    anc = [q for q in range(c.width) if q not in c.outputs]
    psi = np.transpose(psi, list(c.outputs) + anc).reshape(2**n, -1)
    assert np.max(np.abs(rho - psi @ psi.conj().T)) < 1e-12


def test_grouped_engine_handles_wide_circuits():
    v = random_complex_vector(6, np.random.default_rng(0))
    c = prepare(v, 1)
    assert c.width == 63
    assert np.max(np.abs(circuit_marginals(c).probs - v.probabilities())) < 1e-9


def test_grouped_engine_cap():
    c = prepare(random_complex_vector(4, np.random.default_rng(0)), 4)
    with pytest.raises(TooWide):
        circuit_marginals(c, max_qubits=2)


def test_sampling_deterministic_state():
    psi = simulate(Circuit(2))
    assert sample(psi, 100, seed=3).probs.tolist() == [1, 0, 0, 0]


def test_sampling_same_seed_same_counts():
    psi = simulate(prepare(random_complex_vector(3, np.random.default_rng(0)), 3))
    a, b = sample(psi, 5000, seed=9), sample(psi, 5000, seed=9)
    assert np.array_equal(a.probs, b.probs)
    assert not np.array_equal(a.probs, sample(psi, 5000, seed=10).probs)


def test_sampling_uniform_bound():
    # 6 sigma of a binomial with p = 1/8 and 2**20 shots is about 0.002.
    psi = simulate(Circuit(3, tuple(ry(math.pi / 2, q) for q in range(3))))
    est = sample(psi, 2**20, seed=0).probs
    assert np.max(np.abs(est - 1 / 8)) < 0.01


def test_sampling_rejects_zero_shots():
    with pytest.raises(ValidationError):
        sample_distribution(Distribution(np.array([1.0, 0.0])), 0)


def test_state_distance_identity_and_phase():
    v = random_complex_vector(2, np.random.default_rng(4))
    psi = StateVector(2, v.to_numpy())
    assert state_distance(psi, v)["overlap"] == pytest.approx(1)
    shifted = StateVector(2, v.to_numpy() * cmath.exp(0.7j))
    d = state_distance(shifted, v)
    assert d["overlap"] == pytest.approx(1) and d["global_phase"] == pytest.approx(0.7)


def test_state_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        state_distance(StateVector(1, np.array([1, 0], dtype=complex)), load_vector([1, 0, 0, 0]))


@pytest.mark.parametrize("n", range(1, 7))
def test_top_down_overlap(n):
    v = random_complex_vector(n, np.random.default_rng(n))
    c = prepare(v, n)
    assert state_distance(simulate(c), v, c.outputs)["overlap"] >= 1 - 1e-9


def test_mae():
    assert mae([0.5, 0.5], [0.5, 0.5]) == 0
    assert mae([0.5, 0.5], [0.4, 0.6]) == pytest.approx(0.1)
    with pytest.raises(DimensionMismatch):
        mae([1.0], [0.5, 0.5])


def test_mae_exact_simulation(v8):
    for s in (1, 2, 3):
        assert mae(circuit_marginals(prepare(v8, s)), v8.probabilities()) < 1e-9
