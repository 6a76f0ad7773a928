"""Symbolic application of Gaussian operations and quadrature measurements.

The working object is an :class:`EngineState`: an ordered register of live
modes plus the phase polynomial of the unitary that produced the state from
zero-momentum eigenstates.  Every operation either rewrites the polynomial
exactly or refuses with a typed error; nothing is approximated here (the
numerical oracle owns approximation).

States are values: each operation returns a new state and appends one history
entry ``(op, hash of the new phase)`` for deterministic replay.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import (
    FourierUnsupportedError,
    CircuitReplayError,
    HyperforgeError,
    StateTerminatedError,
    UnknownModeError,
    UnsupportedCommutationError,
    UnsupportedDegreeError,
)
from .ops import GaussianOp, cphase, measure_p_op, measure_q_op, rotate, shear_p, shear_q
from .ops import squeeze as squeeze_op
from .ops import xdisp, zdisp
from .phasepoly import Monomial, PhasePolynomial, check_mode_label, square_half

#: tolerance for recognizing multiples of pi and pi/2 in rotation angles
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementRecord:
    mode: str
    basis: str  # "q" or "p"
    outcome: float


@dataclass(frozen=True)
class MeasureResidual:
    """Unevaluated remainder of a momentum measurement.

    ``linear`` is the polynomial that multiplied the measured variable and
    ``tail`` the part free of it; neither mentions the measured mode.  The
    state carrying one of these is terminal: it can be rendered and exported
    but accepts no further operations.
    """

    mode: str
    outcome: float
    linear: PhasePolynomial
    tail: PhasePolynomial


@dataclass(frozen=True)
class HistoryEntry:
    op: GaussianOp
    phase_hash: str


@dataclass(frozen=True)
class EngineState:
    modes: tuple[str, ...]
    phase: PhasePolynomial
    measurements: tuple[MeasurementRecord, ...] = ()
    residual: MeasureResidual | None = None
    history: tuple[HistoryEntry, ...] = ()

    @property
    def terminal(self) -> bool:
        return self.residual is not None

    def digest(self) -> str:
        """Content hash of the canonical state serialization."""
        blob = [",".join(self.modes), self.phase.to_text()]
        for rec in self.measurements:
            blob.append(f"meas {rec.mode} {rec.basis} {rec.outcome!r}")
        if self.residual is not None:
            blob.append(f"residual {self.residual.mode} {self.residual.outcome!r}")
            blob.append(self.residual.linear.to_text())
            blob.append(self.residual.tail.to_text())
        return hashlib.sha256("\n".join(blob).encode()).hexdigest()


def phase_digest(poly: PhasePolynomial) -> str:
    return hashlib.sha256(poly.to_text().encode()).hexdigest()


def new_state(modes, phase: PhasePolynomial | None = None) -> EngineState:
    """Fresh state on the given modes, optionally preloaded with a phase."""
    modes = tuple(modes)
    for m in modes:
        check_mode_label(m)
    if len(set(modes)) != len(modes):
        raise ValueError("duplicate mode labels")
    phase = phase if phase is not None else PhasePolynomial.zero()
    unknown = phase.modes - set(modes)
    if unknown:
        raise UnknownModeError(f"phase mentions unregistered modes {sorted(unknown)}")
    return EngineState(modes=modes, phase=phase)


def _require_live(st: EngineState):
    if st.terminal:
        raise StateTerminatedError(
            f"state is terminal after momentum measurement on {st.residual.mode}")


def _require_active(st: EngineState, mode: str):
    if mode not in st.modes:
        raise UnknownModeError(f"mode {mode!r} is not active")


def _advance(st: EngineState, op: GaussianOp, phase: PhasePolynomial, *,
             drop_mode: str | None = None,
             record: MeasurementRecord | None = None,
             residual: MeasureResidual | None = None) -> EngineState:
    modes = st.modes if drop_mode is None else tuple(m for m in st.modes if m != drop_mode)
    measurements = st.measurements + ((record,) if record else ())
    history = st.history + (HistoryEntry(op, phase_digest(phase)),)
    return EngineState(modes, phase, measurements, residual, history)


# -- Gaussian unitaries -------------------------------------------------------

def apply_z(st: EngineState, a: str, s: float) -> EngineState:
    """Momentum displacement: add weight ``s`` to the single-vertex edge."""
    _require_live(st)
    _require_active(st, a)
    return _advance(st, zdisp(a, s), st.phase.add_term(Monomial({a: 1}), s))


def apply_x(st: EngineState, a: str, s: float) -> EngineState:
    """Position displacement: shift the variable, ``q_a -> q_a - s``.

    On a multilinear phase this adds every adjacency edge with weight
    ``-s`` times the parent weight; decorations additionally shed their exact
    lower-order shift terms.
    """
    _require_live(st)
    _require_active(st, a)
    return _advance(st, xdisp(a, s), st.phase.substitute_affine(a, 1.0, -s))


def apply_shear_q(st: EngineState, a: str, s: float) -> EngineState:
    """Position shear: deposit the quadratic decoration ``(s/2) q_a^2``."""
    _require_live(st)
    _require_active(st, a)
    return _advance(st, shear_q(a, s), st.phase.add_term(Monomial({a: 2}), 0.5 * s))


def apply_shear_p(st: EngineState, a: str, s: float) -> EngineState:
    """Momentum shear: add ``(s/2) h^2`` where ``f = q_a h + g``.

    Requires the acted variable to appear at most linearly; a quadratic
    decoration on it has no polynomial-phase image, so the engine refuses.
    """
    _require_live(st)
    _require_active(st, a)
    h, _, deg = st.phase.linear_split(a)
    if deg >= 2:
        raise UnsupportedDegreeError(
            f"momentum shear on {a!r} requires degree <= 1, found {deg}")
    return _advance(st, shear_p(a, s), st.phase + square_half(h, s))


def apply_squeeze(st: EngineState, a: str, s: float) -> EngineState:
    """Squeeze: rescale the variable, ``q_a -> exp(-s) q_a``.

    A term of degree k in the mode scales by ``exp(-k s)``.  The scalar
    normalization prefactor is dropped; states are kept up to normalization.
    """
    _require_live(st)
    _require_active(st, a)
    return _advance(st, squeeze_op(a, s), st.phase.substitute_affine(a, math.exp(-s), 0.0))


def apply_rotation(st: EngineState, a: str, s: float) -> EngineState:
    """Phase-space rotation.

    Half-turn multiples act as the sign substitution ``q_a -> (-1)^n q_a``.
    Quarter-turn angles swap the quadratures and are rejected.  Any other
    angle is lowered to shear(q), squeeze, shear(p): on a mode the phase does
    not mention, the sequence collapses to the exact quadratic decoration
    ``tan(s)/2 q_a^2``; on a connected mode the momentum-shear step meets the
    quadratic just deposited and raises ``UnsupportedDegree``.
    """
    _require_live(st)
    _require_active(st, a)
    n = round(s / math.pi)
    if abs(s - n * math.pi) <= ANGLE_TOL:
        flipped = st.phase.substitute_affine(a, float((-1) ** n), 0.0)
        return _advance(st, rotate(a, s), flipped)
    n_half = round(s / math.pi - 0.5)
    if abs(s - (n_half + 0.5) * math.pi) <= ANGLE_TOL:
        raise FourierUnsupportedError(
            f"rotation by an odd multiple of pi/2 on {a!r} swaps quadratures")
    if st.phase.degree_of(a) == 0:
        return _advance(st, rotate(a, s),
                        st.phase.add_term(Monomial({a: 2}), 0.5 * math.tan(s)))
    # lowered sequence, rightmost factor first; the trailing half-turn
    # absorbs a negative cosine
    cos_s = math.cos(s)
    t = math.tan(s)
    r = math.log(1.0 / abs(cos_s))
    work = st.phase.add_term(Monomial({a: 2}), 0.5 * t)
    work = work.substitute_affine(a, math.exp(-r), 0.0)
    h, _, deg = work.linear_split(a)
    if deg >= 2:
        raise UnsupportedDegreeError(
            f"rotation by a general angle leaves mode {a!r} at degree {deg}; "
            "only disconnected modes admit a polynomial-phase image")
    work = work + square_half(h, t)
    if cos_s < 0:
        work = work.substitute_affine(a, -1.0, 0.0)
    return _advance(st, rotate(a, s), work)


def apply_cphase(st: EngineState, modes, t: float) -> EngineState:
    """Generalized controlled-Z: add weight ``t`` on the given hyperedge."""
    _require_live(st)
    op = cphase(modes, t)
    for m in op.modes:
        _require_active(st, m)
    return _advance(st, op, st.phase.add_term(Monomial.from_modes(*op.modes), t))


# -- measurements --------------------------------------------------------------

def measure_q(st: EngineState, a: str, m: float) -> EngineState:
    """Position measurement with outcome ``m``: evaluate ``q_a = m``.

    Edges through the mode reappear on their remainders with weight scaled by
    ``m``; decorations contribute their evaluated lower-order parts.  The mode
    leaves the register.
    """
    _require_live(st)
    _require_active(st, a)
    collapsed = st.phase.substitute_affine(a, 0.0, m)
    return _advance(st, measure_q_op(a, m), collapsed, drop_mode=a,
                    record=MeasurementRecord(a, "q", m))


def measure_p(st: EngineState, a: str, m: float) -> EngineState:
    """Momentum measurement: store the unevaluable residual and terminate.

    The post-measurement object is an integral over the measured variable
    that has no polynomial-phase form; the engine keeps the split
    ``f = q_a * linear + tail`` verbatim and marks the state terminal.
    """
    _require_live(st)
    _require_active(st, a)
    h, g, deg = st.phase.linear_split(a)
    if deg >= 2:
        raise UnsupportedDegreeError(
            f"momentum measurement on {a!r} requires degree <= 1, found {deg}")
    return _advance(st, measure_p_op(a, m), g, drop_mode=a,
                    record=MeasurementRecord(a, "p", m),
                    residual=MeasureResidual(a, m, h, g))


# -- residual transport --------------------------------------------------------

def commute_through(op: GaussianOp, f: PhasePolynomial) -> PhasePolynomial:
    """Move a position-only residual leftward past ``op``.

    Returns ``f'`` with ``op . exp(i f) == exp(i f') . op`` as operators.
    Position-generated gates (Z, Dq, CZ) commute outright; X shifts the
    variable by ``-s`` and squeezing rescales it by ``exp(-s)``, exactly as in
    the apply direction, because both sides conjugate by the same operator.
    Momentum shears and general rotations would substitute momentum into the
    residual and are rejected.
    """
    kind = op.kind
    if kind in ("Z", "Dq", "CZ"):
        return f
    if kind == "X":
        return f.substitute_affine(op.mode, 1.0, -op.param)
    if kind == "S":
        return f.substitute_affine(op.mode, math.exp(-op.param), 0.0)
    if kind == "R":
        n = round(op.param / math.pi)
        if abs(op.param - n * math.pi) <= ANGLE_TOL:
            return f.substitute_affine(op.mode, float((-1) ** n), 0.0)
        raise UnsupportedCommutationError(
            "general rotations substitute momentum into the residual")
    raise UnsupportedCommutationError(
        f"{kind} does not preserve position-only residuals")


# -- dispatch -------------------------------------------------------------------

def apply_op(st: EngineState, op: GaussianOp) -> EngineState:
    """Apply one descriptor to a state."""
    kind = op.kind
    if kind == "Z":
        return apply_z(st, op.mode, op.param)
    if kind == "X":
        return apply_x(st, op.mode, op.param)
    if kind == "Dq":
        return apply_shear_q(st, op.mode, op.param)
    if kind == "Dp":
        return apply_shear_p(st, op.mode, op.param)
    if kind == "S":
        return apply_squeeze(st, op.mode, op.param)
    if kind == "R":
        return apply_rotation(st, op.mode, op.param)
    if kind == "CZ":
        return apply_cphase(st, op.modes, op.param)
    if kind == "MeasQ":
        return measure_q(st, op.mode, op.param)
    if kind == "MeasP":
        return measure_p(st, op.mode, op.param)
    raise UnsupportedCommutationError(f"unhandled op kind {kind!r}")


def apply_circuit(st: EngineState, ops) -> EngineState:
    """Left-fold a sequence of ops; the first failure aborts with its step."""
    for step, op in enumerate(ops):
        try:
            st = apply_op(st, op)
        except HyperforgeError as exc:
            raise CircuitReplayError(step, exc) from exc
    return st


def replay_history(initial: EngineState, history) -> EngineState:
    """Re-run a recorded op sequence from a snapshot (determinism check)."""
    return apply_circuit(initial, [entry.op for entry in history])
