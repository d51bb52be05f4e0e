"""Heisenberg-picture qubit network simulator.

Propagates per-qubit observable triples (descriptors) through a circuit of
rotations, Hadamards, controlled-nots, and controlled-Hadamards; detects
entanglement and sharp/non-sharp foliations of qubit pairs; builds the
branching tree of foliation events; and cross-validates everything against
a dense state-vector oracle.
"""
from .engine import (
    Circuit,
    Descriptor,
    GateStep,
    NetworkState,
    apply_cnot,
    apply_controlled_hadamard,
    apply_hadamard,
    apply_rotation_y,
    ch,
    cx,
    h,
    init_network,
    projector,
    run_circuit,
    ry,
    trace_json_doc,
)
from .foliation import (
    BranchTree,
    EntanglementWitness,
    FoliationReport,
    build_branch_tree,
    conditional_expectation,
    default_watch_pairs,
    entangled,
    relative_descriptor,
    report_rows,
    sharp_foliation,
    tree_json_doc,
    tree_to_dot,
)
from .lang import CircuitSyntaxError, parse_circuit, serialize_circuit
from .oracle import conjugate_descriptor, cross_check, evolve_state, expand, gate_unitary
from .pauli import (
    DEFAULT_TOLERANCE,
    DROP_TOLERANCE,
    PauliString,
    PauliSum,
    allclose,
    canonicalize,
    letter_mul,
    linear_combine,
    string_mul,
    sum_mul,
    vacuum_expectation,
)
from .presets import FR_ANGLE, get_preset, preset_fr

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # pauli
    "PauliString",
    "PauliSum",
    "letter_mul",
    "string_mul",
    "sum_mul",
    "linear_combine",
    "canonicalize",
    "vacuum_expectation",
    "allclose",
    "DEFAULT_TOLERANCE",
    "DROP_TOLERANCE",
    # engine
    "Circuit",
    "GateStep",
    "Descriptor",
    "NetworkState",
    "ry",
    "h",
    "cx",
    "ch",
    "init_network",
    "apply_rotation_y",
    "apply_hadamard",
    "apply_cnot",
    "apply_controlled_hadamard",
    "run_circuit",
    "projector",
    "trace_json_doc",
    # foliation
    "EntanglementWitness",
    "FoliationReport",
    "BranchTree",
    "entangled",
    "sharp_foliation",
    "relative_descriptor",
    "conditional_expectation",
    "default_watch_pairs",
    "build_branch_tree",
    "report_rows",
    "tree_json_doc",
    "tree_to_dot",
    # oracle
    "expand",
    "gate_unitary",
    "evolve_state",
    "conjugate_descriptor",
    "cross_check",
    # lang / presets
    "parse_circuit",
    "serialize_circuit",
    "CircuitSyntaxError",
    "preset_fr",
    "get_preset",
    "FR_ANGLE",
]
