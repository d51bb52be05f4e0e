"""Descriptor network: per-qubit Heisenberg observables evolved gate by gate.

Each qubit carries a descriptor, the triple (x, y, z) of operators that at
time 0 equals its local (sigma_x, sigma_y, sigma_z) and thereafter evolves
under the circuit while the global state stays pinned to the all-zeros
vector.  Gates act through closed-form update rules on the pre-gate
components (the generic conjugation route lives in :mod:`heisensim.oracle`
and serves as an independent cross-check):

* ``ry(phi)``:   x' = x cos(phi) + z sin(phi),  y' = y,
  z' = z cos(phi) - x sin(phi)
* ``h``:         (x, y, z) -> (z, -y, x)
* ``cx(c, t)``:  control (x t_x, y t_x, z); target (t_x, t_y c_z, t_z c_z)
* ``ch(c, t)``:  control (x u, y u, z) with u = (t_x + t_z)/sqrt(2);
  target (t_x P+ + t_z P-, t_y c_z, t_z P+ + t_x P-) where
  P+- = (I +- c_z)/2 are the branch projectors of the control.

Gates occupy integer time slots; a slot's gates act on disjoint qubits, so
their application order inside the slot is irrelevant.  A run produces one
network state per slot boundary t = 0..max_slot+1.  States are immutable;
untouched descriptors are shared between consecutive states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .pauli import PauliSum

__all__ = [
    "GATE_KINDS",
    "GateStep",
    "Circuit",
    "Descriptor",
    "NetworkState",
    "Trace",
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
]

GATE_KINDS = ("ry", "h", "cx", "ch")
COMPONENTS = ("x", "y", "z")

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class GateStep:
    """One gate occupying the time interval (slot, slot + 1)."""

    kind: str
    qubits: tuple[int, ...]
    slot: int
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 1 if self.kind in ("ry", "h") else 2
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} control and target must differ")
        if self.kind == "ry":
            if self.angle is None:
                raise ValueError("ry needs an angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")
        if self.slot < 0:
            raise ValueError("slot must be non-negative")

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[-1]


def ry(qubit: int, angle: float, slot: int = 0) -> GateStep:
    return GateStep("ry", (qubit,), slot, angle)


def h(qubit: int, slot: int = 0) -> GateStep:
    return GateStep("h", (qubit,), slot)


def cx(control: int, target: int, slot: int = 0) -> GateStep:
    return GateStep("cx", (control, target), slot)


def ch(control: int, target: int, slot: int = 0) -> GateStep:
    return GateStep("ch", (control, target), slot)


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on ``n_qubits``, with optional qubit labels."""

    n_qubits: int
    steps: tuple[GateStep, ...] = ()
    labels: Mapping[int, str] | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        held: dict[int, set[int]] = {}
        prev_slot = -1
        for step in self.steps:
            for q in step.qubits:
                if not 0 <= q < self.n_qubits:
                    raise IndexError(f"qubit {q} out of range for {self.n_qubits} qubits")
            if step.slot < prev_slot:
                raise ValueError(f"slots must be nondecreasing, got {step.slot} after {prev_slot}")
            prev_slot = step.slot
            used = held.setdefault(step.slot, set())
            if used & set(step.qubits):
                raise ValueError(f"slot {step.slot}: qubits {sorted(used & set(step.qubits))} already in use")
            used.update(step.qubits)
        if self.labels:
            for q in self.labels:
                if not 0 <= q < self.n_qubits:
                    raise IndexError(f"label for qubit {q} out of range")

    @property
    def max_slot(self) -> int:
        return max((s.slot for s in self.steps), default=-1)

    def label(self, qubit: int) -> str:
        if self.labels and qubit in self.labels:
            return self.labels[qubit]
        return f"q{qubit}"

    def gate_text(self, step: GateStep) -> str:
        """Human-readable gate description, e.g. ``Rotation on R``."""
        if step.kind == "ry":
            return f"Rotation on {self.label(step.qubits[0])}"
        if step.kind == "h":
            return f"Hadamard on {self.label(step.qubits[0])}"
        return "Controlled-not" if step.kind == "cx" else "Controlled-H"


@dataclass(frozen=True)
class Descriptor:
    """The (x, y, z) observable triple attached to one qubit.

    ``time`` records the slot boundary at which the components were last
    updated; states share untouched descriptors, so it can lag the state's
    own clock.
    """

    qubit: int
    time: int
    x: PauliSum
    y: PauliSum
    z: PauliSum

    def component(self, name: str) -> PauliSum:
        if name not in COMPONENTS:
            raise ValueError(f"no component {name!r}")
        return getattr(self, name)

    @property
    def triple(self) -> tuple[PauliSum, PauliSum, PauliSum]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class NetworkState:
    """All descriptors at one slot boundary."""

    time: int
    descriptors: tuple[Descriptor, ...]

    @property
    def n_qubits(self) -> int:
        return len(self.descriptors)

    def descriptor(self, qubit: int) -> Descriptor:
        if not 0 <= qubit < len(self.descriptors):
            raise IndexError(f"qubit {qubit} out of range")
        return self.descriptors[qubit]


Trace = list[NetworkState]


def init_network(n_qubits: int) -> NetworkState:
    """Fresh network: qubit k carries (X_k, Y_k, Z_k) at time 0."""
    if n_qubits < 1:
        raise ValueError("network needs at least one qubit")
    descriptors = tuple(
        Descriptor(
            qubit=q,
            time=0,
            x=PauliSum.single(n_qubits, q, "X"),
            y=PauliSum.single(n_qubits, q, "Y"),
            z=PauliSum.single(n_qubits, q, "Z"),
        )
        for q in range(n_qubits)
    )
    return NetworkState(0, descriptors)


def _identity(n: int) -> PauliSum:
    return PauliSum.identity(n)


def _rotated(d: Descriptor, angle: float, time: int) -> Descriptor:
    c, s = math.cos(angle), math.sin(angle)
    return Descriptor(d.qubit, time, d.x * c + d.z * s, d.y, d.z * c - d.x * s)


def _hadamarded(d: Descriptor, time: int) -> Descriptor:
    return Descriptor(d.qubit, time, d.z, -d.y, d.x)


def _cnotted(dc: Descriptor, dt: Descriptor, time: int) -> tuple[Descriptor, Descriptor]:
    control = Descriptor(dc.qubit, time, dc.x @ dt.x, dc.y @ dt.x, dc.z)
    target = Descriptor(dt.qubit, time, dt.x, dt.y @ dc.z, dt.z @ dc.z)
    return control, target


def _chadamarded(dc: Descriptor, dt: Descriptor, time: int) -> tuple[Descriptor, Descriptor]:
    u = (dt.x + dt.z) * _SQRT_HALF
    ident = _identity(dc.z.n_qubits)
    p_plus = (ident + dc.z) * 0.5
    p_minus = (ident - dc.z) * 0.5
    control = Descriptor(dc.qubit, time, dc.x @ u, dc.y @ u, dc.z)
    target = Descriptor(
        dt.qubit,
        time,
        dt.x @ p_plus + dt.z @ p_minus,
        dt.y @ dc.z,
        dt.z @ p_plus + dt.x @ p_minus,
    )
    return control, target


def _apply_step(descriptors: tuple[Descriptor, ...], step: GateStep, time: int) -> tuple[Descriptor, ...]:
    out = list(descriptors)
    if step.kind == "ry":
        q = step.qubits[0]
        out[q] = _rotated(descriptors[q], step.angle, time)
    elif step.kind == "h":
        q = step.qubits[0]
        out[q] = _hadamarded(descriptors[q], time)
    else:
        c, t = step.qubits
        rule = _cnotted if step.kind == "cx" else _chadamarded
        out[c], out[t] = rule(descriptors[c], descriptors[t], time)
    return tuple(out)


def _check_qubit(state: NetworkState, q: int):
    if not 0 <= q < state.n_qubits:
        raise IndexError(f"qubit {q} out of range for {state.n_qubits} qubits")


def apply_rotation_y(state: NetworkState, qubit: int, angle: float) -> NetworkState:
    """Rotate one qubit's descriptor about its y axis; time advances by 1."""
    _check_qubit(state, qubit)
    step = GateStep("ry", (qubit,), max(state.time, 0), angle)
    return NetworkState(state.time + 1, _apply_step(state.descriptors, step, state.time + 1))


def apply_hadamard(state: NetworkState, qubit: int) -> NetworkState:
    _check_qubit(state, qubit)
    step = GateStep("h", (qubit,), max(state.time, 0))
    return NetworkState(state.time + 1, _apply_step(state.descriptors, step, state.time + 1))


def apply_cnot(state: NetworkState, control: int, target: int) -> NetworkState:
    _check_qubit(state, control)
    _check_qubit(state, target)
    step = GateStep("cx", (control, target), max(state.time, 0))
    return NetworkState(state.time + 1, _apply_step(state.descriptors, step, state.time + 1))


def apply_controlled_hadamard(state: NetworkState, control: int, target: int) -> NetworkState:
    _check_qubit(state, control)
    _check_qubit(state, target)
    step = GateStep("ch", (control, target), max(state.time, 0))
    return NetworkState(state.time + 1, _apply_step(state.descriptors, step, state.time + 1))


def run_circuit(circuit: Circuit) -> Trace:
    """Evolve the network slot by slot; one state per slot boundary.

    ``trace[0]`` is the fresh network and ``trace[t]`` holds the
    descriptors after every gate in slots 0..t-1, so a circuit whose last
    gate sits in slot k yields k + 2 states.  Deterministic: within a slot
    gates act on disjoint qubits, so list order cannot matter.
    """
    by_slot: dict[int, list[GateStep]] = {}
    for step in circuit.steps:
        by_slot.setdefault(step.slot, []).append(step)
    state = init_network(circuit.n_qubits)
    trace = [state]
    for slot in range(circuit.max_slot + 1):
        time = slot + 1
        descriptors = state.descriptors
        for step in by_slot.get(slot, ()):
            try:
                descriptors = _apply_step(descriptors, step, time)
            except Exception as exc:
                raise type(exc)(f"slot {slot}: {exc}") from exc
        state = NetworkState(time, descriptors)
        trace.append(state)
    return trace


def projector(state: NetworkState, qubit: int, sign: int) -> PauliSum:
    """Branch projector (I + sign * q_z)/2 for one qubit's current z component."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_qubit(state, qubit)
    z = state.descriptor(qubit).z
    return (_identity(z.n_qubits) + z * sign) * 0.5


def trace_json_doc(circuit: Circuit, trace: Trace) -> dict:
    """JSON document for a trace; term order is canonical, output byte-stable."""
    return {
        "format_version": 1,
        "n_qubits": circuit.n_qubits,
        "labels": {str(q): circuit.labels[q] for q in sorted(circuit.labels)} if circuit.labels else {},
        "slots": [
            {
                "t": state.time,
                "descriptors": [
                    {
                        "qubit": d.qubit,
                        "x": d.x.to_json(),
                        "y": d.y.to_json(),
                        "z": d.z.to_json(),
                    }
                    for d in state.descriptors
                ],
            }
            for state in trace
        ],
    }
