"""Entanglement tests, sharp/non-sharp foliation verdicts, branching trees.

Two qubits count as entangled when some pair of their descriptor
components violates expectation factorisation,
``<q_i q'_j> != <q_i><q'_j>`` over the nine component pairs.

A control/target pair admits a sharp foliation when the product of their z
components is sharp, ``<q_Cz q_Tz> = +1`` (or -1, reported as anti-sharp
with the branch pairing swapped), *and* the pair is genuinely correlated
rather than trivially aligned.  Correlation is certified by either the
(z, z) factorisation violation or by an operator-level record: one
partner's z component acting on the other's qubit.  The record clause is
what recognises a deterministic measurement -- a copy gate whose control
is already sharp -- as the single-branch foliation it creates (branch
weights (1, 0)); without it such a pair is indistinguishable from two
fresh qubits.

Verdicts for a pair, in order:

* ``sharp`` / ``anti-sharp`` -- conditions above; the report carries the
  branch projector weights, the relative descriptors, and per-branch
  conditional expectations (branches of non-negligible weight only).
* ``non-sharp`` -- no sharp z-z product, but the pair is inside one
  interference bubble: entangled, or their descriptor supports meet.
* ``unentangled`` -- everything else.

The instantaneous verdict cannot see history: after a foliation diffuses
(a later interaction destroys the sharp product) the pair may look
componentwise uncorrelated again, yet its branches have merely blurred
into the bubble.  The bookkeeping layer used by the report table and the
branching tree therefore runs a per-pair status machine over the trace --
trunk, sharp, bubble -- in which leaving ``sharp`` always lands in
``bubble``.  That diffusion rule is this library's own convention; the
instantaneous verdict function stays pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

from .engine import Circuit, Descriptor, NetworkState, Trace, projector
from .pauli import DEFAULT_TOLERANCE, vacuum_expectation

__all__ = [
    "SHARP",
    "ANTI_SHARP",
    "NON_SHARP",
    "UNENTANGLED",
    "EntanglementWitness",
    "FoliationReport",
    "ZeroWeightBranch",
    "FoliationPrecondition",
    "entangled",
    "sharp_foliation",
    "relative_descriptor",
    "conditional_expectation",
    "default_watch_pairs",
    "PairEvent",
    "foliation_timeline",
    "TreeNode",
    "TreeEdge",
    "BranchTree",
    "build_branch_tree",
    "tree_json_doc",
    "tree_to_dot",
    "ReportRow",
    "report_rows",
    "format_weight",
]

SHARP = "sharp"
ANTI_SHARP = "anti-sharp"
NON_SHARP = "non-sharp"
UNENTANGLED = "unentangled"

_COMPONENTS = ("x", "y", "z")


class ZeroWeightBranch(ValueError):
    """Conditioning on a branch whose projector weight is negligible."""


class FoliationPrecondition(ValueError):
    """Relative descriptors requested for a pair without a sharp foliation."""


@dataclass(frozen=True)
class EntanglementWitness:
    """First component pair violating expectation factorisation, if any."""

    pair: tuple[int, int]
    component_pair: tuple[str, str]
    joint: float
    product: float
    entangled: bool


def entangled(
    state: NetworkState, q1: int, q2: int, tol: float = DEFAULT_TOLERANCE
) -> EntanglementWitness:
    """Scan the nine component pairs of (q1, q2) for a factorisation violation.

    Pairs are scanned in (x, y, z) x (x, y, z) order and the first
    violation is returned as the witness; when all nine factorise the
    witness records the (z, z) values with ``entangled=False``.
    """
    if q1 == q2:
        raise ValueError("entanglement test needs two distinct qubits")
    d1, d2 = state.descriptor(q1), state.descriptor(q2)
    zz_joint = zz_product = 0.0
    for i, j in _cartesian(_COMPONENTS, repeat=2):
        a, b = d1.component(i), d2.component(j)
        joint = vacuum_expectation(a @ b)
        prod = vacuum_expectation(a) * vacuum_expectation(b)
        if i == j == "z":
            zz_joint, zz_product = joint, prod
        if abs(joint - prod) > tol:
            return EntanglementWitness((q1, q2), (i, j), joint, prod, True)
    return EntanglementWitness((q1, q2), ("z", "z"), zz_joint, zz_product, False)


@dataclass(frozen=True)
class FoliationReport:
    """Verdict and branch data for an ordered (control, target) pair."""

    pair: tuple[int, int]
    slot: int
    verdict: str
    proj_plus: float
    proj_minus: float
    zz_product: float
    witness: EntanglementWitness
    relatives: dict[int, Descriptor] | None = None
    conditionals: dict[int, float] | None = None


def _z_record(state: NetworkState, control: int, target: int) -> bool:
    zc = state.descriptor(control).z
    zt = state.descriptor(target).z
    return control in zt.support or target in zc.support


def _supports_meet(state: NetworkState, q1: int, q2: int) -> bool:
    s1 = frozenset().union(*(c.support for c in state.descriptor(q1).triple))
    s2 = frozenset().union(*(c.support for c in state.descriptor(q2).triple))
    return bool(s1 & s2)


def sharp_foliation(
    state: NetworkState, control: int, target: int, tol: float = DEFAULT_TOLERANCE
) -> FoliationReport:
    """Instantaneous foliation verdict for an ordered pair.

    The reported projector weights are the control-side branch weights
    ``<P_+1[q_Cz]>`` and ``<P_-1[q_Cz]>``.
    """
    if control == target:
        raise ValueError("foliation test needs two distinct qubits")
    dc = state.descriptor(control)
    dt = state.descriptor(target)
    zz = vacuum_expectation(dc.z @ dt.z, tol)
    z_mean_c = vacuum_expectation(dc.z, tol)
    z_mean_t = vacuum_expectation(dt.z, tol)
    proj_plus = (1.0 + z_mean_c) / 2.0
    proj_minus = (1.0 - z_mean_c) / 2.0
    witness = entangled(state, control, target, tol)

    correlated = abs(zz - z_mean_c * z_mean_t) > tol or _z_record(state, control, target)
    verdict = UNENTANGLED
    if abs(zz - 1.0) <= tol and correlated:
        verdict = SHARP
    elif abs(zz + 1.0) <= tol and correlated:
        verdict = ANTI_SHARP
    elif witness.entangled or _supports_meet(state, control, target):
        verdict = NON_SHARP

    relatives = conditionals = None
    if verdict in (SHARP, ANTI_SHARP):
        relatives = {
            sign: _relative(state, target, control, sign) for sign in (1, -1)
        }
        conditionals = {}
        for sign, weight in ((1, proj_plus), (-1, proj_minus)):
            if weight > tol:
                conditionals[sign] = conditional_expectation(
                    state, target, "z", control, sign, tol
                )
    return FoliationReport(
        pair=(control, target),
        slot=state.time,
        verdict=verdict,
        proj_plus=proj_plus,
        proj_minus=proj_minus,
        zz_product=zz,
        witness=witness,
        relatives=relatives,
        conditionals=conditionals,
    )


def _relative(state: NetworkState, target: int, control: int, sign: int) -> Descriptor:
    p = projector(state, control, sign)
    d = state.descriptor(target)
    return Descriptor(d.qubit, d.time, d.x @ p, d.y @ p, d.z @ p)


def relative_descriptor(
    state: NetworkState, target: int, control: int, sign: int, tol: float = DEFAULT_TOLERANCE
) -> Descriptor:
    """Target descriptor restricted to one branch of the control.

    Each component is right-multiplied by (I + sign*q_Cz)/2; the triple
    obeys the Pauli algebra with the projector in place of the identity.
    Only defined on pairs whose instantaneous verdict is sharp or
    anti-sharp.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    report = sharp_foliation(state, control, target, tol)
    if report.verdict not in (SHARP, ANTI_SHARP):
        raise FoliationPrecondition(
            f"pair ({control}, {target}) is {report.verdict} at t={state.time}"
        )
    return _relative(state, target, control, sign)


def conditional_expectation(
    state: NetworkState,
    target: int,
    component: str,
    control: int,
    sign: int,
    tol: float = DEFAULT_TOLERANCE,
) -> float:
    """Branch expectation <q_T P_sign>/<P_sign> of one target component."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    p = projector(state, control, sign)
    weight = vacuum_expectation(p, tol)
    if weight <= tol:
        raise ZeroWeightBranch(
            f"branch {sign:+d} of qubit {control} has weight {weight:g}"
        )
    value = vacuum_expectation(state.descriptor(target).component(component) @ p, tol)
    return value / weight


# ---------------------------------------------------------------------------
# Bookkeeping over a trace: status machine, report rows, branching tree.
# ---------------------------------------------------------------------------

_TRUNK = "trunk"
_STATUS_SHARP = "sharp"
_BUBBLE = "bubble"


def default_watch_pairs(circuit: Circuit) -> tuple[tuple[int, int], ...]:
    """All (control, target) pairs sharing a two-qubit gate, in first-use order."""
    seen: list[tuple[int, int]] = []
    for step in circuit.steps:
        if len(step.qubits) == 2:
            pair = (step.control, step.target)
            if pair not in seen and (pair[1], pair[0]) not in seen:
                seen.append(pair)
    return tuple(seen)


@dataclass(frozen=True)
class PairEvent:
    """A status transition of one watch pair at one slot boundary."""

    slot: int
    pair: tuple[int, int]
    kind: str  # "created-sharp" | "diffused" | "non-sharp-bubble"
    report: FoliationReport


def foliation_timeline(
    trace: Trace,
    watch: tuple[tuple[int, int], ...],
    tol: float = DEFAULT_TOLERANCE,
) -> tuple[list[dict[tuple[int, int], str]], list[PairEvent], list[dict[tuple[int, int], FoliationReport]]]:
    """Fold the status machine over every slot boundary.

    Returns per-slot statuses, the transition events, and the per-slot
    instantaneous reports.  Statuses: ``trunk`` (never foliated), ``sharp``,
    ``bubble`` (non-sharp, or sharp in the past and since diffused).
    """
    status = {pair: _TRUNK for pair in watch}
    statuses: list[dict[tuple[int, int], str]] = []
    reports: list[dict[tuple[int, int], FoliationReport]] = []
    events: list[PairEvent] = []
    for state in trace:
        slot_reports = {}
        for pair in watch:
            report = sharp_foliation(state, pair[0], pair[1], tol)
            slot_reports[pair] = report
            prev = status[pair]
            if report.verdict in (SHARP, ANTI_SHARP):
                if prev != _STATUS_SHARP:
                    events.append(PairEvent(state.time, pair, "created-sharp", report))
                status[pair] = _STATUS_SHARP
            elif report.verdict == NON_SHARP:
                if prev == _STATUS_SHARP:
                    events.append(PairEvent(state.time, pair, "diffused", report))
                elif prev == _TRUNK:
                    events.append(PairEvent(state.time, pair, "non-sharp-bubble", report))
                status[pair] = _BUBBLE
            else:  # unentangled now; sharp history still means the pair diffused
                if prev == _STATUS_SHARP:
                    events.append(PairEvent(state.time, pair, "diffused", report))
                    status[pair] = _BUBBLE
        statuses.append(dict(status))
        reports.append(slot_reports)
    return statuses, events, reports


@dataclass(frozen=True)
class TreeNode:
    id: str
    kind: str  # "trunk" | "created-sharp" | "diffused" | "non-sharp-bubble"
    slot: int
    pair: tuple[int, int] | None
    labels: tuple[str, ...]
    weights: tuple[float, float] | None = None


@dataclass(frozen=True)
class TreeEdge:
    src: str
    dst: str
    sign: int | None
    weight: float


@dataclass(frozen=True)
class BranchTree:
    nodes: tuple[TreeNode, ...]
    edges: tuple[TreeEdge, ...]

    def node(self, node_id: str) -> TreeNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)


def _branch_labels(report: FoliationReport, names: tuple[str, str], tol: float) -> tuple[str, ...]:
    cname, tname = names
    labels = []
    pairing = {1: 1, -1: -1} if report.verdict != ANTI_SHARP else {1: -1, -1: 1}
    for sign, weight in ((1, report.proj_plus), (-1, report.proj_minus)):
        if weight > tol:
            labels.append(f"{cname}{sign:+d}/{tname}{pairing[sign]:+d}")
    return tuple(labels)


def build_branch_tree(
    trace: Trace,
    watch: tuple[tuple[int, int], ...],
    tol: float = DEFAULT_TOLERANCE,
    labels: dict[int, str] | None = None,
) -> BranchTree:
    """Event graph of foliation creation and diffusion across the trace.

    Each watch pair's transitions become nodes; a node hangs off the
    pair's previous event when it has one (a creation feeding its own
    diffusion contributes one signed edge per branch, weighted by the
    creation's projector values), and otherwise off the most recent event
    touching either qubit, or the trunk.  Node order is (slot, pair).
    """
    def name(q: int) -> str:
        return labels[q] if labels and q in labels else f"q{q}"

    _, events, _ = foliation_timeline(trace, watch, tol)
    events = sorted(events, key=lambda e: (e.slot, e.pair))

    trunk = TreeNode("trunk", "trunk", 0, None, ())
    nodes = [trunk]
    edges: list[TreeEdge] = []
    last_for_pair: dict[tuple[int, int], TreeNode] = {}
    last_report_for_pair: dict[tuple[int, int], FoliationReport] = {}
    last_for_qubit: dict[int, tuple[int, TreeNode]] = {}

    for seq, event in enumerate(events):
        pair = event.pair
        names = (name(pair[0]), name(pair[1]))
        node_id = f"{event.kind}:{names[0]}-{names[1]}@t{event.slot}"
        if event.kind == "created-sharp":
            node_labels = _branch_labels(event.report, names, tol)
        else:
            node_labels = (f"{names[0]}/{names[1]}",)
        node = TreeNode(
            node_id,
            event.kind,
            event.slot,
            pair,
            node_labels,
            (event.report.proj_plus, event.report.proj_minus),
        )
        nodes.append(node)

        pred = last_for_pair.get(pair)
        if pred is None:
            shared = [last_for_qubit[q] for q in pair if q in last_for_qubit]
            pred = max(shared, key=lambda item: item[0])[1] if shared else trunk
        if pred.kind == "created-sharp" and pred.pair == pair:
            creation = last_report_for_pair[pair]
            for sign, weight in ((1, creation.proj_plus), (-1, creation.proj_minus)):
                if weight > tol:
                    edges.append(TreeEdge(pred.id, node.id, sign, weight))
        else:
            edges.append(TreeEdge(pred.id, node.id, None, 1.0))

        last_for_pair[pair] = node
        last_report_for_pair[pair] = event.report
        for q in pair:
            last_for_qubit[q] = (seq, node)

    return BranchTree(tuple(nodes), tuple(edges))


def tree_json_doc(tree: BranchTree) -> dict:
    return {
        "format_version": 1,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "slot": n.slot,
                "pair": list(n.pair) if n.pair else None,
                "labels": list(n.labels),
                "weights": list(n.weights) if n.weights else None,
            }
            for n in tree.nodes
        ],
        "edges": [
            {"from": e.src, "to": e.dst, "sign": e.sign, "weight": e.weight}
            for e in tree.edges
        ],
    }


def format_weight(value: float, tol: float = DEFAULT_TOLERANCE) -> str:
    """Sixths and thirds print as exact fractions, everything else as 6 digits."""
    scaled = round(value * 6)
    if abs(value - scaled / 6) <= tol:
        frac = Fraction(int(scaled), 6)
        return str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"
    return f"{value:.6g}"


_DOT_SHAPES = {
    "trunk": "circle",
    "created-sharp": "box",
    "diffused": "diamond",
    "non-sharp-bubble": "ellipse",
}


def tree_to_dot(tree: BranchTree) -> str:
    """Graphviz source; edge width scales with branch weight."""
    lines = ["digraph foliations {", "  rankdir=LR;", "  node [fontsize=10];"]
    for n in tree.nodes:
        label = n.id if n.kind == "trunk" else f"t={n.slot}\\n" + "\\n".join(n.labels)
        style = ', style="dashed"' if n.kind == "non-sharp-bubble" else ""
        lines.append(
            f'  "{n.id}" [shape={_DOT_SHAPES[n.kind]}, label="{label}"{style}];'
        )
    for e in tree.edges:
        width = 1.0 + 4.0 * e.weight
        label = f"{e.sign:+d} ({format_weight(e.weight)})" if e.sign is not None else ""
        lines.append(
            f'  "{e.src}" -> "{e.dst}" [label="{label}", penwidth={width:.2f}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReportRow:
    """One gate's row in the foliation summary table."""

    interval: tuple[int, int]
    parties: str
    gate: str
    verdict: str
    proj: tuple[float, float] | None


_VERDICT_TEXT = {_STATUS_SHARP: "Sharp", _BUBBLE: "Non-sharp", _TRUNK: "-"}


def report_rows(
    circuit: Circuit,
    trace: Trace,
    watch: tuple[tuple[int, int], ...] | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> list[ReportRow]:
    """Summary table: one row per gate, tagged with the affected pair's status.

    Two-qubit gates report their own (control, target) pair.  A
    single-qubit gate reports the live (sharp or bubble) watch pairs led by
    its qubit -- the pairs whose printed projections it steers -- falling
    back to any live pair containing it, and carries no parties when the
    qubit sits in no live pair.  Projections are the first party's branch
    weights at the end of the interval.  Anti-sharp verdicts surface as
    ``Anti-sharp``.
    """
    if watch is None:
        watch = default_watch_pairs(circuit)
    statuses, _, reports = foliation_timeline(trace, watch, tol)

    def pair_verdict(pair: tuple[int, int], t: int) -> str:
        if reports[t][pair].verdict == ANTI_SHARP:
            return "Anti-sharp"
        return _VERDICT_TEXT[statuses[t][pair]]

    def first_party_proj(pair: tuple[int, int], t: int) -> tuple[float, float]:
        report = reports[t][pair]
        return (report.proj_plus, report.proj_minus)

    rows = []
    for step in circuit.steps:
        t_end = step.slot + 1
        interval = (step.slot, t_end)
        gate = circuit.gate_text(step)
        if len(step.qubits) == 2:
            pair = (step.control, step.target)
            if pair not in statuses[t_end]:
                key = (pair[1], pair[0])
                pair = key if key in statuses[t_end] else pair
            if pair in statuses[t_end]:
                rows.append(
                    ReportRow(
                        interval,
                        f"{circuit.label(pair[0])},{circuit.label(pair[1])}",
                        gate,
                        pair_verdict(pair, t_end),
                        first_party_proj(pair, t_end),
                    )
                )
            else:
                rows.append(ReportRow(interval, "-", gate, "-", None))
        else:
            q = step.qubits[0]
            live = [
                pair
                for pair in watch
                if q == pair[0] and statuses[t_end][pair] != _TRUNK
            ]
            if not live:
                # no live pair led by this qubit; fall back to any live pair holding it
                live = [
                    pair
                    for pair in watch
                    if q in pair and statuses[t_end][pair] != _TRUNK
                ]
            if not live:
                rows.append(ReportRow(interval, "-", gate, "-", None))
            for pair in live:
                rows.append(
                    ReportRow(
                        interval,
                        f"{circuit.label(pair[0])},{circuit.label(pair[1])}",
                        gate,
                        pair_verdict(pair, t_end),
                        first_party_proj(pair, t_end),
                    )
                )
    return rows
