"""Command-line interface.

Verbs: ``new``, ``apply``, ``run``, ``recipe``, ``export-dot``, ``verify``,
``serve``.  Engine and file errors print one machine-readable JSON object to
stderr and exit nonzero; ``run`` additionally reports the failing step index.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decompose import multi_target_recipe, order_raise_demo, toffoli_recipe
from .engine import apply_circuit, apply_op, new_state
from .errors import HyperforgeError
from .fileio import (
    CircuitFile,
    canonical_json,
    decomposition_text,
    export_dot,
    poly_to_json,
    recipe_to_circuit,
    report_table,
    report_to_json,
    state_from_json,
    state_to_text,
)
from .ops import parse_op
from .oracle import default_cutoff, default_squeezing, standard_rule_battery


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise HyperforgeError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise HyperforgeError(f"not valid JSON: {path}: {exc}")


def _load_state(path: str):
    return state_from_json(_read_json(path))


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_new(args) -> int:
    st = new_state([m.strip() for m in args.modes.split(",") if m.strip()])
    _write(args.output, state_to_text(st))
    if args.output:
        print(decomposition_text(st), end="")
    return 0


def _cmd_apply(args) -> int:
    st = _load_state(args.state)
    st = apply_op(st, parse_op(args.op))
    _write(args.output, state_to_text(st))
    print(decomposition_text(st), end="")
    return 0


def _cmd_run(args) -> int:
    circuit = CircuitFile.from_json(_read_json(args.circuit))
    ops = circuit.ops if args.steps is None else circuit.ops[: args.steps]
    st = apply_circuit(circuit.initial_state(), ops)
    if args.output:
        _write(args.output, state_to_text(st))
    print(decomposition_text(st), end="")
    return 0


def _cmd_recipe(args) -> int:
    controls = tuple(m.strip() for m in args.controls.split(","))
    if len(controls) != 2:
        raise HyperforgeError("exactly two control modes required")
    leftover = None
    if args.kind == "toffoli":
        rec = toffoli_recipe(args.ancilla, controls, args.target,
                             weight=args.weight, shear=args.shear)
        circuit = recipe_to_circuit(rec)
    elif args.kind == "multi-target":
        targets = [m.strip() for m in args.targets.split(",") if m.strip()]
        rec, leftover = multi_target_recipe(args.ancilla, controls, targets,
                                            literal=args.paper_literal)
        extra = {}
        if args.paper_literal:
            extra["leftover_terms"] = poly_to_json(leftover)
        circuit = recipe_to_circuit(rec, extra)
    else:
        circuit = recipe_to_circuit(order_raise_demo())
    _write(args.output, circuit.to_text())
    if args.paper_literal and leftover is not None:
        print("leftover terms after the literal sequence:")
        for m, c in leftover.sorted_terms():
            print(f"  {m}  coeff {c:g}")
        if not leftover.terms:
            print("  (none)")
    return 0


def _cmd_export_dot(args) -> int:
    st = _load_state(args.state)
    _write(args.output, export_dot(st))
    return 0


def _cmd_verify(args) -> int:
    checks = standard_rule_battery(r=args.r, cutoff=args.cutoff)
    if args.json:
        _write(args.json, canonical_json(report_to_json(checks)))
    print(report_table(checks), end="")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperforge",
        description="Symbolic rewrite engine for CV hypergraph states "
                    "with a truncated-Fock verification oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("new", help="create an empty state on the given modes")
    p.add_argument("--modes", required=True, help="comma-separated mode labels")
    p.add_argument("-o", "--output", help="state file to write (default stdout)")
    p.set_defaults(fn=_cmd_new)

    p = sub.add_parser("apply", help="apply one op to a state file")
    p.add_argument("state", help="input state file")
    p.add_argument("--op", required=True, help='op text, e.g. "Dp(A,1)" or "CZ(A,D,-2)"')
    p.add_argument("-o", "--output", required=True, help="state file to write")
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("run", help="replay a circuit file")
    p.add_argument("circuit")
    p.add_argument("--steps", type=int, help="replay only the first N ops")
    p.add_argument("-o", "--output", help="write the final state file")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("recipe", help="emit a recipe as a circuit file")
    p.add_argument("kind", choices=["toffoli", "multi-target", "order-raise"])
    p.add_argument("--ancilla", default="A")
    p.add_argument("--controls", default="B,C")
    p.add_argument("--target", default="D")
    p.add_argument("--targets", default="D1,D2")
    p.add_argument("--weight", type=float, default=2.0)
    p.add_argument("--shear", type=float, default=1.0)
    p.add_argument("--paper-literal", action="store_true",
                   help="omit the pairwise cleanup gates and report leftovers")
    p.add_argument("-o", "--output", help="circuit file to write (default stdout)")
    p.set_defaults(fn=_cmd_recipe)

    p = sub.add_parser("export-dot", help="render a state file as Graphviz DOT")
    p.add_argument("state")
    p.add_argument("-o", "--output", help="DOT file to write (default stdout)")
    p.set_defaults(fn=_cmd_export_dot)

    p = sub.add_parser("verify", help="run the oracle rule battery")
    p.add_argument("--rules", default="all", choices=["all"])
    p.add_argument("--r", type=float, default=default_squeezing(),
                   help="squeezing for the finitely squeezed register")
    p.add_argument("--cutoff", type=int, default=default_cutoff(),
                   help="Fock levels per mode")
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("serve", help="start the JSON-over-HTTP session service")
    p.add_argument("--port", type=int, default=8791)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except HyperforgeError as exc:
        sys.stderr.write(canonical_json(exc.as_dict()))
        return 2


if __name__ == "__main__":
    sys.exit(main())
