"""Configurable divide-and-conquer quantum state preparation."""

from .amplitudes import (
    AmplitudeVector,
    SparseAmplitudeVector,
    densify,
    load_vector,
    parse_json,
    random_complex_vector,
    random_sparse_vector,
    read_json,
    sparsify,
)
from .analysis import (
    SplitPrediction,
    balance_root,
    choose_split,
    depth_argmin,
    predicted_depth,
    predicted_width,
    predictions,
    sweep,
)
from .circuit import Circuit, CircuitBuilder, Gate
from .errors import QSPrepError, TooWide, UnloweredGate, ValidationError
from .lowering import ResourceReport, lower, metrics
from .qasm import export_qasm, parse_qasm
from .simulator import (
    Distribution,
    StateVector,
    circuit_marginals,
    mae,
    sample,
    simulate,
    state_distance,
)
from .synthesis import SynthesisPlan, prepare, synthesize
from .trees import build_angle_tree, build_sparse_state_tree, build_state_tree

__all__ = [name for name in dir() if not name.startswith("_")]
