"""File formats, graph export, and report rendering.

All JSON output goes through :func:`canonical_json` (sorted keys, two-space
indent, trailing newline), so byte-identical round trips hold for any file
this module wrote itself, and the CLI and HTTP service produce comparable
exports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .decompose import Recipe
from .engine import EngineState, HistoryEntry, MeasurementRecord, MeasureResidual, new_state
from .errors import HyperforgeError, MalformedFileError
from .hypergraph import decompose_graph
from .ops import GaussianOp
from .phasepoly import Monomial, PhasePolynomial

FILE_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


# -- polynomials ---------------------------------------------------------------

def poly_to_json(poly: PhasePolynomial) -> dict:
    return {
        "terms": [{"monomial": {l: e for l, e in m.powers}, "coeff": c}
                  for m, c in poly.sorted_terms()],
        "constant": poly.constant,
    }


def poly_from_json(data) -> PhasePolynomial:
    try:
        terms = {}
        for entry in data.get("terms", []):
            m = Monomial(dict(entry["monomial"]))
            terms[m] = terms.get(m, 0.0) + float(entry["coeff"])
        return PhasePolynomial(terms, float(data.get("constant", 0.0)))
    except HyperforgeError:
        raise
    except Exception as exc:
        raise MalformedFileError(f"bad polynomial: {exc}")


# -- engine states ---------------------------------------------------------------

def state_to_json(st: EngineState) -> dict:
    data = {
        "version": FILE_VERSION,
        "modes": list(st.modes),
        "phase": poly_to_json(st.phase),
        "measurements": [{"mode": m.mode, "basis": m.basis, "outcome": m.outcome}
                         for m in st.measurements],
        "history": [{"op": h.op.to_json(), "hash": h.phase_hash} for h in st.history],
        "residual": None,
    }
    if st.residual is not None:
        data["residual"] = {
            "mode": st.residual.mode,
            "outcome": st.residual.outcome,
            "linear": poly_to_json(st.residual.linear),
            "tail": poly_to_json(st.residual.tail),
        }
    return data


def state_from_json(data) -> EngineState:
    try:
        if data.get("version") != FILE_VERSION:
            raise MalformedFileError(f"unsupported state version {data.get('version')!r}")
        modes = tuple(data["modes"])
        phase = poly_from_json(data["phase"])
        measurements = tuple(
            MeasurementRecord(m["mode"], m["basis"], float(m["outcome"]))
            for m in data.get("measurements", ()))
        history = tuple(
            HistoryEntry(GaussianOp.from_json(h["op"]), h["hash"])
            for h in data.get("history", ()))
        residual = None
        raw = data.get("residual")
        if raw is not None:
            residual = MeasureResidual(raw["mode"], float(raw["outcome"]),
                                       poly_from_json(raw["linear"]),
                                       poly_from_json(raw["tail"]))
    except HyperforgeError:
        raise
    except Exception as exc:
        raise MalformedFileError(f"bad state file: {exc}")
    return EngineState(modes, phase, measurements, residual, history)


def state_to_text(st: EngineState) -> str:
    return canonical_json(state_to_json(st))


# -- circuit files -----------------------------------------------------------------

@dataclass(frozen=True)
class CircuitFile:
    """Replayable description: register, starting phase, op list, metadata."""

    modes: tuple[str, ...]
    initial_phase: PhasePolynomial
    ops: tuple[GaussianOp, ...]
    metadata: dict = field(default_factory=dict)
    version: int = FILE_VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "modes": list(self.modes),
            "initial_phase": poly_to_json(self.initial_phase),
            "ops": [op.to_json() for op in self.ops],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data) -> "CircuitFile":
        try:
            if data.get("version") != FILE_VERSION:
                raise MalformedFileError(
                    f"unsupported circuit version {data.get('version')!r}")
            modes = tuple(data["modes"])
            phase = poly_from_json(data.get("initial_phase", {"terms": []}))
            ops = tuple(GaussianOp.from_json(o) for o in data.get("ops", ()))
            metadata = dict(data.get("metadata", {}))
        except HyperforgeError:
            raise
        except Exception as exc:
            raise MalformedFileError(f"bad circuit file: {exc}")
        return cls(modes, phase, ops, metadata)

    def initial_state(self) -> EngineState:
        return new_state(self.modes, self.initial_phase)

    def to_text(self) -> str:
        return canonical_json(self.to_json())


def recipe_to_circuit(recipe: Recipe, extra_metadata: dict | None = None) -> CircuitFile:
    meta = {
        "name": recipe.name,
        "assumptions": list(recipe.assumptions),
        "target_phase": poly_to_json(recipe.target),
    }
    meta.update(extra_metadata or {})
    return CircuitFile(recipe.modes, recipe.input_phase, recipe.ops, meta)


# -- decomposition view (shared by CLI printing and the HTTP API) --------------------

def decomposition_json(st: EngineState) -> dict:
    d = decompose_graph(st.phase)
    data = {
        "modes": list(st.modes),
        "edges": [{"modes": sorted(e.modes), "weight": e.weight} for e in d.edges],
        "decorations": [{"monomial": {l: e for l, e in m.powers}, "coeff": c}
                        for m, c in d.decorations.sorted_terms()],
        "constant": d.decorations.constant,
        "order": d.order,
        "is_standard": d.is_standard(),
        "terminal": st.terminal,
        "measurements": [{"mode": m.mode, "basis": m.basis, "outcome": m.outcome}
                         for m in st.measurements],
        "history_length": len(st.history),
        "hash": st.digest(),
    }
    if st.residual is not None:
        data["residual"] = {
            "mode": st.residual.mode,
            "outcome": st.residual.outcome,
            "linear": poly_to_json(st.residual.linear),
            "tail": poly_to_json(st.residual.tail),
        }
    return data


def decomposition_text(st: EngineState) -> str:
    d = decompose_graph(st.phase)
    lines = [f"modes: {' '.join(st.modes)}   order: {d.order}"
             f"   standard: {'yes' if d.is_standard() else 'no'}"]
    for e in d.edges:
        lines.append(f"  edge {{{','.join(sorted(e.modes))}}}  weight {e.weight:g}")
    for m, c in d.decorations.sorted_terms():
        lines.append(f"  decoration {m}  coeff {c:g}")
    if d.decorations.constant:
        lines.append(f"  global phase {d.decorations.constant:g}")
    for rec in st.measurements:
        lines.append(f"  measured {rec.mode} ({rec.basis})  outcome {rec.outcome:g}")
    if st.terminal:
        lines.append("  terminal: momentum-measurement residual attached")
    return "\n".join(lines) + "\n"


# -- DOT export -------------------------------------------------------------------

def export_dot(st: EngineState) -> str:
    """Graphviz rendering of the hypergraph view.

    DOT has no native hyperedges: order-2 edges become plain edges, larger
    hyperedges become diamond junction nodes wired to their members, weights
    ride along as labels, single-vertex edges become small satellite dots,
    and decorations become dashed boxes attached to the modes they mention.
    """
    d = decompose_graph(st.phase)
    lines = ["graph state {", "  node [shape=circle];"]
    for mode in sorted(st.modes):
        lines.append(f'  "{mode}";')
    unary = 0
    junction = 0
    for e in d.edges:
        members = sorted(e.modes)
        label = f"{e.weight:.6g}"
        if len(members) == 1:
            name = f"u{unary}"
            unary += 1
            lines.append(f'  "{name}" [shape=circle, width=0.25, style=filled, '
                         f'fillcolor=lightgray, label="{label}"];')
            lines.append(f'  "{members[0]}" -- "{name}";')
        elif len(members) == 2:
            lines.append(f'  "{members[0]}" -- "{members[1]}" [label="{label}"];')
        else:
            name = f"j{junction}"
            junction += 1
            lines.append(f'  "{name}" [shape=diamond, label="{label}"];')
            for m in members:
                lines.append(f'  "{name}" -- "{m}";')
    for idx, (m, c) in enumerate(d.decorations.sorted_terms()):
        name = f"k{idx}"
        lines.append(f'  "{name}" [shape=box, style=dashed, label="{c:.6g} * {m}"];')
        for mode in sorted(m.modes):
            lines.append(f'  "{name}" -- "{mode}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- verification reports ------------------------------------------------------------

def report_to_json(checks) -> dict:
    entries = [c.as_dict() for c in checks]
    return {
        "entries": entries,
        "summary": {
            "total": len(entries),
            "passed": sum(1 for e in entries if e["pass"]),
            "failed": sum(1 for e in entries if not e["pass"]),
        },
    }


def report_table(checks) -> str:
    header = (f"{'rule':6s} {'params':28s} {'r':>5s} {'cutoff':>6s} "
              f"{'fidelity':>10s} {'predicted':>10s} {'budget':>8s} {'ok':>3s}")
    lines = [header, "-" * len(header)]
    for c in checks:
        pred = "-" if c.predicted_fidelity is None else f"{c.predicted_fidelity:.6f}"
        lines.append(
            f"{c.rule:6s} {c.params:28s} {c.squeezing:5.2f} {c.cutoff:6d} "
            f"{c.fidelity:10.6f} {pred:>10s} {c.budget:8.0e} "
            f"{'yes' if c.passed else 'NO':>3s}")
    counts = report_to_json(checks)["summary"]
    lines.append(f"{counts['passed']}/{counts['total']} checks within budget")
    return "\n".join(lines) + "\n"
