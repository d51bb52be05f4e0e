"""Command-line driver: run a circuit, print reports, export trees.

Examples::

    heisensim run --preset fr --report table
    heisensim run --preset fr --check
    heisensim run --circuit mine.qc --tree out.dot --report json

The default verdict/check tolerance is 1e-9, overridable with
``--tolerance`` or the ``HEISENSIM_TOLERANCE`` environment variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .engine import Circuit, run_circuit, trace_json_doc
from .foliation import (
    ReportRow,
    build_branch_tree,
    default_watch_pairs,
    format_weight,
    report_rows,
    tree_json_doc,
    tree_to_dot,
)
from .lang import CircuitSyntaxError, parse_circuit
from .oracle import cross_check
from .pauli import DEFAULT_TOLERANCE
from .presets import PRESETS, get_preset

__all__ = ["main", "build_parser", "render_table"]

TOLERANCE_ENV = "HEISENSIM_TOLERANCE"


def _default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"bad {TOLERANCE_ENV} value: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisensim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a circuit and emit reports")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="bundled circuit")
    src.add_argument("--circuit", metavar="PATH", help="circuit description file")
    run.add_argument("--report", choices=("table", "json"), help="print the foliation table or the trace JSON")
    run.add_argument("--tree", metavar="PATH", help="write the branching tree (.dot or .json)")
    run.add_argument("--check", action="store_true", help="cross-check against the dense oracle")
    run.add_argument("--tolerance", type=float, default=None, help="verdict/check tolerance (default 1e-9)")
    run.add_argument(
        "--watch",
        default=None,
        help="pairs to analyse, e.g. 'R,A;S,B' (default: every pair sharing a gate)",
    )
    return parser


def _load_circuit(args) -> Circuit:
    if args.preset:
        return get_preset(args.preset)
    try:
        with open(args.circuit, encoding="utf-8") as fh:
            return parse_circuit(fh.read())
    except OSError as exc:
        raise SystemExit(f"cannot read {args.circuit}: {exc}")
    except CircuitSyntaxError as exc:
        raise SystemExit(f"{args.circuit}: {exc}")


def _resolve_watch(spec: str, circuit: Circuit) -> tuple[tuple[int, int], ...]:
    by_name = {circuit.label(q): q for q in range(circuit.n_qubits)}
    pairs = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        names = [p.strip() for p in chunk.split(",")]
        if len(names) != 2:
            raise SystemExit(f"bad watch pair {chunk!r} (expected 'C,T')")
        resolved = []
        for name in names:
            if name in by_name:
                resolved.append(by_name[name])
            elif name.isdigit() and int(name) < circuit.n_qubits:
                resolved.append(int(name))
            else:
                raise SystemExit(f"unknown qubit {name!r} in --watch")
        if resolved[0] == resolved[1]:
            raise SystemExit(f"watch pair {chunk!r} names one qubit twice")
        pairs.append(tuple(resolved))
    return tuple(pairs)


def render_table(rows: list[ReportRow]) -> str:
    header = ("Time", "Parties", "Gate", "Foliations", "Projections")
    cells = [header]
    for row in rows:
        proj = "-" if row.proj is None else f"{format_weight(row.proj[0])}, {format_weight(row.proj[1])}"
        cells.append((f"({row.interval[0]},{row.interval[1]})", row.parties, row.gate, row.verdict, proj))
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _write_text(path: str, text: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    tol = args.tolerance if args.tolerance is not None else _default_tolerance()

    circuit = _load_circuit(args)
    trace = run_circuit(circuit)
    watch = (
        _resolve_watch(args.watch, circuit)
        if args.watch
        else default_watch_pairs(circuit)
    )

    if args.report == "table":
        rows = report_rows(circuit, trace, watch, tol)
        sys.stdout.write(render_table(rows))
    elif args.report == "json":
        sys.stdout.write(json.dumps(trace_json_doc(circuit, trace), indent=2) + "\n")

    if args.tree:
        tree = build_branch_tree(trace, watch, tol, labels=dict(circuit.labels or {}))
        if args.tree.endswith(".json"):
            _write_text(args.tree, json.dumps(tree_json_doc(tree), indent=2) + "\n")
        else:
            _write_text(args.tree, tree_to_dot(tree))

    if args.check:
        report = cross_check(trace, circuit)
        ok = report.max_expectation_dev <= tol and report.max_matrix_dev <= tol
        site = report.worst_site
        sys.stdout.write(
            f"max expectation deviation: {report.max_expectation_dev:.3e}\n"
            f"max matrix deviation:      {report.max_matrix_dev:.3e}\n"
            f"worst site: slot {site['slot']}, qubit {site['qubit']}, component {site['component']}\n"
            f"{'OK' if ok else 'FAIL'}: tolerance {tol:g}\n"
        )
        if not ok:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
