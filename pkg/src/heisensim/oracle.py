"""Dense-matrix validation route: state vectors and generic conjugation.

Everything here is the straightforward (exponentially sized) reference
implementation used to cross-check the sparse descriptor engine: Kronecker
expansion of operators, full gate unitaries, Schrodinger state evolution,
and descriptor construction by conjugating bare Pauli matrices with the
accumulated circuit unitary.

Bit convention, fixed project-wide: basis index bit k holds qubit k's value
(qubit 0 is the least significant bit), and bit value 0 is the +1
eigenstate of Z.  The dense route is capped at :data:`SIZE_CAP` qubits;
it exists for desk-scale validation, not performance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import Circuit, GateStep, Trace
from .pauli import PauliSum

__all__ = [
    "SIZE_CAP",
    "LETTER_MATRICES",
    "expand",
    "gate_unitary",
    "evolve_state",
    "conjugate_descriptor",
    "state_expectation",
    "CrossCheckReport",
    "cross_check",
]

SIZE_CAP = 12

LETTER_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_H2 = (LETTER_MATRICES["X"] + LETTER_MATRICES["Z"]) / math.sqrt(2)
# 4x4 blocks indexed by (control_bit * 2 + target_bit)
_CNOT4 = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_CH4 = np.block(
    [[np.eye(2, dtype=complex), np.zeros((2, 2))], [np.zeros((2, 2)), _H2]]
)


def _check_cap(n_qubits: int, cap: int):
    if n_qubits > cap:
        raise ValueError(f"dense route capped at {cap} qubits, got {n_qubits}")


def expand(a: PauliSum, cap: int = SIZE_CAP) -> np.ndarray:
    """Kronecker expansion of an operator to a dense 2^n x 2^n matrix."""
    _check_cap(a.n_qubits, cap)
    n = a.n_qubits
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    for term in a.terms:
        mat = np.array([[1]], dtype=complex)
        for k in range(n):
            mat = np.kron(LETTER_MATRICES[term.letter_at(k)], mat)
        out += term.coeff * mat
    return out


def _ry2(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _small_matrix(step: GateStep) -> np.ndarray:
    if step.kind == "ry":
        return _ry2(step.angle)
    if step.kind == "h":
        return _H2
    return _CNOT4 if step.kind == "cx" else _CH4


def _apply_small(small: np.ndarray, qubits: tuple[int, ...], array: np.ndarray, n: int) -> np.ndarray:
    """Apply a small unitary on ``qubits`` to states stacked as columns.

    ``qubits[0]`` owns the most significant bit of the small matrix index.
    Works on shape (2**n,) or (2**n, m).
    """
    single = array.ndim == 1
    mat = array.reshape(-1, 1) if single else array
    m = mat.shape[1]
    # axis for qubit k in the C-order [2]*n reshape is n-1-k
    tensor = mat.reshape([2] * n + [m])
    axes = [n - 1 - q for q in qubits]
    rest = [ax for ax in range(n + 1) if ax not in axes]
    k = len(qubits)
    moved = np.transpose(tensor, axes + rest)
    folded = moved.reshape(2 ** k, -1)
    folded = small @ folded
    moved = folded.reshape([2] * k + [moved.shape[i] for i in range(k, n + 1)])
    inverse = np.argsort(axes + rest)
    tensor = np.transpose(moved, inverse)
    out = tensor.reshape(2 ** n, m)
    return out[:, 0] if single else out


def gate_unitary(step: GateStep, n_qubits: int, cap: int = SIZE_CAP) -> np.ndarray:
    """Full 2^n x 2^n unitary of one gate."""
    _check_cap(n_qubits, cap)
    for q in step.qubits:
        if not 0 <= q < n_qubits:
            raise IndexError(f"qubit {q} out of range")
    eye = np.eye(2 ** n_qubits, dtype=complex)
    return _apply_small(_small_matrix(step), step.qubits, eye, n_qubits)


def _slot_groups(circuit: Circuit) -> list[list[GateStep]]:
    groups: list[list[GateStep]] = [[] for _ in range(circuit.max_slot + 1)]
    for step in circuit.steps:
        groups[step.slot].append(step)
    return groups


def evolve_state(circuit: Circuit, cap: int = SIZE_CAP) -> list[np.ndarray]:
    """State vector at every slot boundary, starting from the all-zeros state."""
    _check_cap(circuit.n_qubits, cap)
    n = circuit.n_qubits
    psi = np.zeros(2 ** n, dtype=complex)
    psi[0] = 1.0
    states = [psi.copy()]
    for group in _slot_groups(circuit):
        for step in group:
            psi = _apply_small(_small_matrix(step), step.qubits, psi, n)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-12:
            raise AssertionError(f"state norm drifted to {norm}")
        states.append(psi.copy())
    return states


def _accumulated_unitaries(circuit: Circuit, upto_slot: int, cap: int) -> np.ndarray:
    _check_cap(circuit.n_qubits, cap)
    n = circuit.n_qubits
    total = np.eye(2 ** n, dtype=complex)
    for group in _slot_groups(circuit)[:upto_slot]:
        for step in group:
            total = _apply_small(_small_matrix(step), step.qubits, total, n)
    return total


def conjugate_descriptor(
    circuit: Circuit, upto_slot: int, cap: int = SIZE_CAP
) -> list[dict[str, np.ndarray]]:
    """Dense descriptor triples at boundary ``upto_slot`` via conjugation.

    Returns one ``{"x": matrix, "y": ..., "z": ...}`` per qubit, each equal
    to U^dagger sigma U for the ordered product U of all gates in slots
    0..upto_slot-1.
    """
    n = circuit.n_qubits
    total = _accumulated_unitaries(circuit, upto_slot, cap)
    out = []
    for q in range(n):
        triple = {}
        for comp, letter in (("x", "X"), ("y", "Y"), ("z", "Z")):
            sigma = expand(PauliSum.single(n, q, letter), cap)
            triple[comp] = total.conj().T @ sigma @ total
        out.append(triple)
    return out


def state_expectation(psi: np.ndarray, qubit: int, letter: str) -> float:
    """<psi| sigma_letter(qubit) |psi> for a single-qubit Pauli."""
    n = int(round(math.log2(psi.size)))
    phi = _apply_small(LETTER_MATRICES[letter], (qubit,), psi, n)
    val = np.vdot(psi, phi)
    return float(val.real)


@dataclass(frozen=True)
class CrossCheckReport:
    max_expectation_dev: float
    max_matrix_dev: float
    worst_site: dict

    def to_json(self) -> dict:
        return {
            "format_version": 1,
            "max_expectation_dev": self.max_expectation_dev,
            "max_matrix_dev": self.max_matrix_dev,
            "worst_site": dict(self.worst_site),
        }


def cross_check(trace: Trace, circuit: Circuit, cap: int = SIZE_CAP) -> CrossCheckReport:
    """Compare the engine trace against both dense routes.

    For every slot, qubit, and component this measures the gap between the
    engine's vacuum expectation and the evolved state's expectation, and
    between the Kronecker-expanded engine operator and the conjugated bare
    Pauli.  Both maxima should sit at numerical noise.
    """
    states = evolve_state(circuit, cap)
    if len(states) != len(trace):
        raise ValueError("trace and circuit disagree on slot count")
    max_exp = 0.0
    max_mat = 0.0
    worst = {"slot": 0, "qubit": 0, "component": "x"}
    from .pauli import vacuum_expectation  # local import keeps module deps one-way

    for t, state in enumerate(trace):
        dense = conjugate_descriptor(circuit, t, cap)
        for q in range(circuit.n_qubits):
            d = state.descriptor(q)
            for comp, letter in (("x", "X"), ("y", "Y"), ("z", "Z")):
                engine_val = vacuum_expectation(d.component(comp))
                dev = abs(engine_val - state_expectation(states[t], q, letter))
                mat_dev = float(
                    np.max(np.abs(expand(d.component(comp), cap) - dense[q][comp]))
                )
                if max(dev, mat_dev) > max(max_exp, max_mat):
                    worst = {"slot": t, "qubit": q, "component": comp}
                max_exp = max(max_exp, dev)
                max_mat = max(max_mat, mat_dev)
    return CrossCheckReport(max_exp, max_mat, worst)
