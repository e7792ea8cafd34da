"""Command line front end.

Batch commands over a workspace file plus the self-contained check and demo
runners.  Exit codes: 0 success, 1 mismatch or check/calculus failure,
2 usage or parse error.  Output is deterministic; `--format structured`
emits the machine-readable JSON form of every report.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import conditioning, demos, valuation, verify, workspace
from .errors import (
    CalculusError,
    HigherDimension,
    RelativisationUnstable,
    TopIsZero,
    WorkspaceError,
)
from .lattice import Statement
from .valuation import PreProb, QuasiProb
from .values import SemValue, format_rational

USAGE_EXIT = 2
FAILURE_EXIT = 1


def _value_doc(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, SemValue):
        return value.to_mapping()
    return value


def _value_text(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, SemValue):
        return demos.format_semvalue(value)
    return str(value)


def _emit(payload: dict, lines: list[str], structured: bool) -> None:
    if structured:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _load(args) -> workspace.Workspace:
    return workspace.load(args.workspace)


def _statement(ws: workspace.Workspace, text: str) -> Statement:
    return workspace.parse_statement(ws.universe, text)


def _labels(ws: workspace.Workspace, s: Statement) -> list[str]:
    return ws.universe.labels_of(s)


def _cmd_eval(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    s = _statement(ws, args.on)
    value = pre(s)
    _emit(
        {"command": "eval", "statement": _labels(ws, s), "value": _value_doc(value)},
        [f"{args.valuation}({args.on}) = {_value_text(value)}"],
        args.format == "structured",
    )
    return 0


def _cmd_frames(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    frame = valuation.canonical_frame(pre, include_top=args.include_top)
    statements = []
    for s in frame.statements:
        statements.append("top" if s.is_top() else "+".join(_labels(ws, s)))
    lines = [f"canonical frame of {args.valuation}: [{', '.join(statements)}]"]
    for name, value in zip(statements, frame.values):
        lines.append(f"  {name} -> {_value_text(value)}")
    _emit(
        {
            "command": "frames",
            "statements": [_labels(ws, s) for s in frame.statements],
            "values": [_value_doc(v) for v in frame.values],
            "dimension": valuation.semantic_dimension(pre),
        },
        lines,
        args.format == "structured",
    )
    return 0


def _cmd_split(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    if args.mode == "basis":
        components = valuation.components_basis(pre)
        payload = {
            "command": "split",
            "mode": "basis-direction",
            "components": [c.to_mapping() for c in components],
        }
        lines = [f"basis-direction split of {args.valuation}"]
        for symbol, component in zip(ws.basis.symbols, components):
            lines.append(f"  along {symbol}:")
            for label, value in zip(ws.universe.atom_labels, component.atomic):
                lines.append(f"    {label} -> {_value_text(value)}")
        _emit(payload, lines, args.format == "structured")
        return 0
    quasi, rest = valuation.canonical_split(pre)
    payload = {
        "command": "split",
        "mode": "canonical-frame",
        "quasi": quasi.to_mapping(),
        "residuals": [c.to_mapping() for c in rest],
    }
    lines = [f"canonical split of {args.valuation} (top-first frame)"]
    lines.append("  quasi part:")
    for label, q in zip(ws.universe.atom_labels, quasi.atomic):
        lines.append(f"    {label} -> {format_rational(q)}")
    for k, component in enumerate(rest, start=2):
        lines.append(f"  top-zero component {k}:")
        for label, value in zip(ws.universe.atom_labels, component.atomic):
            lines.append(f"    {label} -> {_value_text(value)}")
    _emit(payload, lines, args.format == "structured")
    return 0


def _as_quasi(pre: PreProb) -> QuasiProb:
    return valuation.to_quasi(pre)


def _cmd_condition(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    t = _statement(ws, args.on)
    if args.as_kind == "preprob":
        local = conditioning.relative_preprob(pre, t)
        atoms = [ws.universe.atom_labels[i] for i in local.atom_indices]
        payload = {
            "command": "condition",
            "kind": "preprob",
            "on": _labels(ws, t),
            "values": {
                label: _value_doc(v) for label, v in zip(atoms, local.values)
            },
        }
        lines = [f"relative pre-probability of {args.valuation} at {args.on}"]
        for label, v in zip(atoms, local.values):
            lines.append(f"  {label} -> {_value_text(v)}")
        _emit(payload, lines, args.format == "structured")
        return 0
    try:
        relative = conditioning.relative_quasi(_as_quasi(pre), t)
    except RelativisationUnstable as exc:
        print(f"error: RelativisationUnstable: {exc}", file=sys.stderr)
        print("hint: use --as preprob", file=sys.stderr)
        return FAILURE_EXIT
    payload = {
        "command": "condition",
        "kind": "quasi",
        "on": _labels(ws, t),
        "values": relative.to_mapping(),
    }
    lines = [f"relative quasi-probability of {args.valuation} at {args.on}"]
    for label, q in zip(relative.universe.atom_labels, relative.atomic):
        lines.append(f"  {label} -> {format_rational(q)}")
    _emit(payload, lines, args.format == "structured")
    return 0


def _cmd_bayes(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    target = _statement(ws, args.target)
    given = _statement(ws, args.on)
    result = conditioning.bayes_stable(_as_quasi(pre), given, target)
    _emit(
        {
            "command": "bayes",
            "target": _labels(ws, target),
            "given": _labels(ws, given),
            "value": format_rational(result),
        },
        [f"{args.valuation}({args.target} | {args.on}) = {format_rational(result)}"],
        args.format == "structured",
    )
    return 0


def _cmd_total(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    cells = ws.partition(args.partition)
    s = _statement(ws, args.on)
    expected = pre(s)
    try:
        quasi = _as_quasi(pre)
    except (HigherDimension, TopIsZero):
        quasi = None
    cases = []
    if quasi is None:
        locals_frames = []
        for cell in cells.cells:
            local = conditioning.relative_preprob(pre, cell)
            locals_frames.append((local, conditioning.identity_assignment(local)))
            cases.append("preprob")
        total = conditioning.total_preprob(cells, locals_frames, s)
    else:
        data = []
        for cell in cells.cells:
            weight = quasi(cell)
            if weight != 0:
                data.append(conditioning.StableCell(
                    conditioning.relative_quasi(quasi, cell), weight
                ))
                cases.append("stable")
            else:
                local = conditioning.relative_preprob(pre, cell)
                if local.is_invariant():
                    data.append(conditioning.InvariantCell())
                    cases.append("invariant")
                else:
                    anchor = next(
                        ws.universe.atom(i)
                        for i in cell.atoms()
                        if not pre.atomic[i].is_zero()
                    )
                    data.append(conditioning.UnstableCell(
                        local, anchor, quasi(anchor)
                    ))
                    cases.append("unstable")
        total = conditioning.total_quasi(cells, data, s)
        total = ws.basis.from_rational(total)
    agrees = total == expected
    payload = {
        "command": "total",
        "statement": _labels(ws, s),
        "cells": [_labels(ws, c) for c in cells.cells],
        "cases": cases,
        "total": _value_doc(total),
        "direct": _value_doc(expected),
        "agrees": agrees,
    }
    lines = [
        f"total rule for {args.valuation} over {args.partition} at {args.on}",
        f"  cell cases: {', '.join(cases)}",
        f"  total  = {_value_text(total)}",
        f"  direct = {_value_text(expected)}",
        f"  agrees: {'yes' if agrees else 'NO'}",
    ]
    _emit(payload, lines, args.format == "structured")
    return 0 if agrees else FAILURE_EXIT


def _cmd_classify(args) -> int:
    ws = _load(args)
    pre = ws.valuation(args.valuation)
    kind, dimension = valuation.classify(pre)
    _emit(
        {"command": "classify", "kind": kind, "dimension": dimension},
        [f"{args.valuation}: {kind}, semantic dimension {dimension}"],
        args.format == "structured",
    )
    return 0


def _cmd_check(args) -> int:
    reports = verify.run_suite(args.seed)
    if args.format == "structured":
        print(json.dumps(verify.render_structured(reports), indent=2, sort_keys=True))
    else:
        print(verify.render_text(reports))
    return 0 if all(r.passed for r in reports) else FAILURE_EXIT


def _cmd_demo(args) -> int:
    try:
        runner = demos.DEMOS[args.name]
    except KeyError:
        print(
            f"error: unknown demo {args.name!r}; available: "
            + ", ".join(sorted(demos.DEMOS)),
            file=sys.stderr,
        )
        return USAGE_EXIT
    if args.name.startswith("printer") and args.horizon is not None:
        report = _printer_with_horizon(args)
    else:
        report = runner()
    if args.format == "structured":
        print(json.dumps(report.to_mapping(), indent=2, sort_keys=True))
    else:
        print("\n".join(report.table_lines()))
    return 0 if report.ok else FAILURE_EXIT


def _printer_with_horizon(args):
    if args.name == "printer-single":
        return demos.demo_printer_single(args.horizon)
    return demos.demo_printer_joint(args.horizon)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprob",
        description="exact finite quasi-probability calculus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_workspace=True):
        if with_workspace:
            p.add_argument("-w", "--workspace", required=True, help="workspace file")
        p.add_argument(
            "--format", choices=("table", "structured"), default="table"
        )

    p = sub.add_parser("eval", help="evaluate a valuation at a statement")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--on", required=True, help="statement (labels or event)")
    p.set_defaults(run=_cmd_eval)

    p = sub.add_parser("frames", help="the canonical semantic frame")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--include-top", action="store_true")
    p.set_defaults(run=_cmd_frames)

    p = sub.add_parser("split", help="canonical or basis-direction split")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--mode", choices=("canonical", "basis"), default="canonical")
    p.set_defaults(run=_cmd_split)

    p = sub.add_parser("condition", help="relativise a valuation")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--on", required=True)
    p.add_argument(
        "--as", dest="as_kind", choices=("quasi", "preprob"), default="quasi"
    )
    p.set_defaults(run=_cmd_condition)

    p = sub.add_parser("bayes", help="invert a conditional")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--on", required=True)
    p.set_defaults(run=_cmd_bayes)

    p = sub.add_parser("total", help="the rule of total (quasi-)probability")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--on", required=True)
    p.set_defaults(run=_cmd_total)

    p = sub.add_parser("classify", help="name the class of a valuation")
    add_common(p)
    p.add_argument("--valuation", required=True)
    p.set_defaults(run=_cmd_classify)

    p = sub.add_parser("check", help="run the verification suite")
    add_common(p, with_workspace=False)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("demo", help="run a named demo")
    add_common(p, with_workspace=False)
    p.add_argument("name")
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(run=_cmd_demo)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except WorkspaceError as exc:
        print(f"error: WorkspaceError: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CalculusError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILURE_EXIT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
