"""Line-based circuit description language.

::

    # comment
    qubits 8
    label 0 R
    label 1 A
    @0 ry 0 2*arcsin(sqrt(2/3))
    @1 cx 0 1
    h 0                 # no @slot: previous slot + 1

* ``qubits <n>`` must come first; ``label <idx> <name>`` lines may follow
  before any gate.
* Gate lines are ``ry <q> <angle-expr>``, ``h <q>``, ``cx <c> <t>``,
  ``ch <c> <t>``, optionally prefixed with ``@<slot>``.  Without a prefix a
  gate occupies the slot after the previous gate's; an explicit ``@<slot>``
  may repeat the current slot to run gates in parallel (on disjoint
  qubits) but may not go backwards.
* Angle expressions allow numbers, ``pi``, arithmetic (+ - * / **), and
  ``sqrt``, ``arcsin``, ``arccos``, ``arctan``, ``sin``, ``cos``, ``tan``.

Every diagnostic carries the offending line number.
"""
from __future__ import annotations

import ast
import math

from .engine import Circuit, GateStep

__all__ = ["CircuitSyntaxError", "parse_circuit", "serialize_circuit"]


class CircuitSyntaxError(ValueError):
    """Parse failure, addressed by line (and column where available)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        at = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{at}: {message}")
        self.line = line
        self.column = column


_ANGLE_FUNCS = {
    "sqrt": math.sqrt,
    "arcsin": math.asin,
    "arccos": math.acos,
    "arctan": math.atan,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
}
_ANGLE_NAMES = {"pi": math.pi}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


def _eval_angle(expr: str, line: int) -> float:
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise CircuitSyntaxError(f"malformed expression {expr!r}", line, exc.offset) from None

    def walk(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id in _ANGLE_NAMES:
                return _ANGLE_NAMES[node.id]
            raise CircuitSyntaxError(f"unknown name {node.id!r}", line, node.col_offset + 1)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = walk(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            if node.func.id not in _ANGLE_FUNCS:
                raise CircuitSyntaxError(
                    f"unknown function {node.func.id!r}", line, node.col_offset + 1
                )
            if len(node.args) != 1 or node.keywords:
                raise CircuitSyntaxError(
                    f"{node.func.id} takes one positional argument", line, node.col_offset + 1
                )
            return _ANGLE_FUNCS[node.func.id](walk(node.args[0]))
        raise CircuitSyntaxError(
            f"unsupported syntax in expression {expr!r}", line, getattr(node, "col_offset", 0) + 1
        )

    try:
        return walk(tree)
    except CircuitSyntaxError:
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise CircuitSyntaxError(f"cannot evaluate {expr!r}: {exc}", line) from None


def _parse_index(token: str, n_qubits: int, line: int) -> int:
    try:
        q = int(token)
    except ValueError:
        raise CircuitSyntaxError(f"bad qubit index {token!r}", line) from None
    if not 0 <= q < n_qubits:
        raise CircuitSyntaxError(f"qubit {q} out of range (0..{n_qubits - 1})", line)
    return q


def parse_circuit(text: str) -> Circuit:
    """Parse a circuit document into a :class:`~heisensim.engine.Circuit`."""
    n_qubits: int | None = None
    labels: dict[int, str] = {}
    steps: list[GateStep] = []
    slot = -1
    slot_qubits: dict[int, set[int]] = {}
    gates_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "qubits":
            if n_qubits is not None:
                raise CircuitSyntaxError("duplicate qubits directive", lineno)
            if gates_seen or labels:
                raise CircuitSyntaxError("qubits must come first", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise CircuitSyntaxError("expected: qubits <positive integer>", lineno)
            n_qubits = int(tokens[1])
            continue

        if n_qubits is None:
            raise CircuitSyntaxError("qubits directive must come before anything else", lineno)

        if head == "label":
            if gates_seen:
                raise CircuitSyntaxError("labels must come before gates", lineno)
            if len(tokens) != 3:
                raise CircuitSyntaxError("expected: label <index> <name>", lineno)
            q = _parse_index(tokens[1], n_qubits, lineno)
            labels[q] = tokens[2]
            continue

        # gate line, with optional @slot prefix
        explicit = None
        if head.startswith("@"):
            try:
                explicit = int(head[1:])
            except ValueError:
                raise CircuitSyntaxError(f"bad slot {head!r}", lineno) from None
            if explicit < 0:
                raise CircuitSyntaxError("slots are non-negative", lineno)
            tokens = tokens[1:]
            if not tokens:
                raise CircuitSyntaxError("slot prefix without a gate", lineno)
            head = tokens[0]

        if head not in ("ry", "h", "cx", "ch"):
            raise CircuitSyntaxError(f"unknown gate {head!r}", lineno)

        if explicit is not None:
            if explicit < slot:
                raise CircuitSyntaxError(
                    f"slot {explicit} goes backwards (current slot is {slot})", lineno
                )
            slot = explicit
        else:
            slot += 1

        if head == "ry":
            if len(tokens) < 3:
                raise CircuitSyntaxError("expected: ry <q> <angle-expr>", lineno)
            q = _parse_index(tokens[1], n_qubits, lineno)
            angle = _eval_angle(" ".join(tokens[2:]), lineno)
            qubits: tuple[int, ...] = (q,)
            step = GateStep("ry", qubits, slot, angle)
        elif head == "h":
            if len(tokens) != 2:
                raise CircuitSyntaxError("expected: h <q>", lineno)
            qubits = (_parse_index(tokens[1], n_qubits, lineno),)
            step = GateStep("h", qubits, slot)
        else:
            if len(tokens) != 3:
                raise CircuitSyntaxError(f"expected: {head} <control> <target>", lineno)
            c = _parse_index(tokens[1], n_qubits, lineno)
            t = _parse_index(tokens[2], n_qubits, lineno)
            if c == t:
                raise CircuitSyntaxError(f"{head} control and target must differ", lineno)
            qubits = (c, t)
            step = GateStep(head, qubits, slot)

        used = slot_qubits.setdefault(slot, set())
        clash = used & set(qubits)
        if clash:
            raise CircuitSyntaxError(
                f"slot {slot} already uses qubit(s) {sorted(clash)}", lineno
            )
        used.update(qubits)
        steps.append(step)
        gates_seen = True

    if n_qubits is None:
        raise CircuitSyntaxError("missing qubits directive", 1)
    return Circuit(n_qubits, tuple(steps), labels or None)


def serialize_circuit(circuit: Circuit) -> str:
    """Textual form that parses back to an equal circuit (angles via repr)."""
    lines = [f"qubits {circuit.n_qubits}"]
    if circuit.labels:
        for q in sorted(circuit.labels):
            lines.append(f"label {q} {circuit.labels[q]}")
    for step in circuit.steps:
        args = " ".join(str(q) for q in step.qubits)
        if step.kind == "ry":
            lines.append(f"@{step.slot} ry {args} {step.angle!r}")
        else:
            lines.append(f"@{step.slot} {step.kind} {args}")
    return "\n".join(lines) + "\n"
