"""Lowering passes and Gaussian-only recipes for non-Gaussian targets.

Phase-space matrices act on the operator pair (q, p) in the convention where
composing unitaries multiplies the matrices in the same order.  In that
convention a rotation factors as shear(p) * squeeze * shear(q) with
``t = tan(s)`` and ``exp(r) = 1/cos(s)``; negative cosines are handled by
splitting off a half turn, which is just a sign flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import EngineState, apply_circuit, new_state
from .errors import (
    DegeneratePivotError,
    FourierUnsupportedError,
    ShapeMismatchError,
)
from .hypergraph import decompose_graph
from .ops import GaussianOp, cphase, rotate, shear_p, shear_q
from .ops import squeeze as squeeze_op
from .phasepoly import Monomial, PhasePolynomial

ANGLE_TOL = 1e-9
PIVOT_TOL = 1e-9
MATRIX_TOL = 1e-12


@dataclass(frozen=True)
class SymplecticMatrix2:
    """Real 2x2 matrix acting on (q, p); symplectic means unit determinant."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c - 1.0) > MATRIX_TOL:
            raise ValueError("matrix is not symplectic (determinant != 1)")

    @classmethod
    def from_array(cls, m) -> "SymplecticMatrix2":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @classmethod
    def rotation(cls, s: float) -> "SymplecticMatrix2":
        return cls(math.cos(s), -math.sin(s), math.sin(s), math.cos(s))

    @classmethod
    def shear_q(cls, t: float) -> "SymplecticMatrix2":
        return cls(1.0, 0.0, t, 1.0)

    @classmethod
    def shear_p(cls, t: float) -> "SymplecticMatrix2":
        return cls(1.0, -t, 0.0, 1.0)

    @classmethod
    def squeezing(cls, r: float) -> "SymplecticMatrix2":
        return cls(math.exp(r), 0.0, 0.0, math.exp(-r))


@dataclass(frozen=True)
class ShearSqueezeShear:
    """Factorization M = shear_p(t_out) * squeeze(r) * shear_q(t_in), with an
    optional trailing half-turn absorbing an overall sign."""

    t_in: float
    r: float
    t_out: float
    flip: bool = False

    def matrix(self) -> np.ndarray:
        m = (SymplecticMatrix2.shear_p(self.t_out).array
             @ SymplecticMatrix2.squeezing(self.r).array
             @ SymplecticMatrix2.shear_q(self.t_in).array)
        return -m if self.flip else m

    def ops(self, mode: str) -> list[GaussianOp]:
        """Gate sequence in application order (rightmost matrix factor first)."""
        seq = [shear_q(mode, self.t_in), squeeze_op(mode, self.r),
               shear_p(mode, self.t_out)]
        if self.flip:
            seq.append(rotate(mode, math.pi))
        return [op for op in seq if op.param != 0.0 or op.kind == "R"]


def rotation_factors(s: float) -> ShearSqueezeShear:
    """Express a rotation as shear(q), squeeze, shear(p).

    Valid away from quarter-turn angles.  For angles with negative cosine the
    remainder after a half turn is decomposed and the flip recorded.
    """
    n_half = round(s / math.pi - 0.5)
    if abs(s - (n_half + 0.5) * math.pi) <= ANGLE_TOL:
        raise FourierUnsupportedError(
            "rotation by an odd multiple of pi/2 has no shear-squeeze-shear form")
    cos_s = math.cos(s)
    t = math.tan(s)
    r = math.log(1.0 / abs(cos_s))
    return ShearSqueezeShear(t_in=t, r=r, t_out=t, flip=cos_s < 0)


def factor_symplectic(m: SymplecticMatrix2) -> ShearSqueezeShear:
    """Triangular-diagonal-triangular factorization of a one-mode Gaussian.

    The pivot is the (p, p) entry: it must exceed the pivot tolerance, since
    it becomes ``exp(-r)``.  A negative pivot is recoverable by pre-composing
    a half turn; see :func:`factor_symplectic_flip`.
    """
    if m.d <= PIVOT_TOL:
        raise DegeneratePivotError(
            f"pivot {m.d:.3e} is not positive; pre-compose a half turn and retry")
    return ShearSqueezeShear(t_in=m.c / m.d, r=-math.log(m.d), t_out=-m.b / m.d)


def factor_symplectic_flip(m: SymplecticMatrix2) -> ShearSqueezeShear:
    """Factor with automatic half-turn retry for negative pivots."""
    try:
        return factor_symplectic(m)
    except DegeneratePivotError:
        if abs(m.d) <= PIVOT_TOL:
            raise FourierUnsupportedError(
                "pivot vanishes even after a half turn; the matrix needs a "
                "quadrature swap")
        inner = factor_symplectic(SymplecticMatrix2(-m.a, -m.b, -m.c, -m.d))
        return ShearSqueezeShear(inner.t_in, inner.r, inner.t_out, flip=True)


# -- recipes -------------------------------------------------------------------

@dataclass(frozen=True)
class Recipe:
    """A Gaussian gate list with its declared input and expected output.

    Recipes are self-checking: :meth:`validate` replays the ops on the input
    phase and compares against the target term by term.
    """

    name: str
    modes: tuple[str, ...]
    ops: tuple[GaussianOp, ...]
    input_phase: PhasePolynomial
    target: PhasePolynomial
    assumptions: tuple[str, ...] = ()

    def initial_state(self) -> EngineState:
        return new_state(self.modes, self.input_phase)

    def replay(self) -> EngineState:
        return apply_circuit(self.initial_state(), self.ops)

    def validate(self, tol: float = 1e-12) -> bool:
        return self.replay().phase.allclose(self.target, tol)


def _cancellation_ops(surplus: PhasePolynomial) -> list[GaussianOp]:
    """One Gaussian gate per surplus term: position shears for single-mode
    squares, controlled-Z for multilinear terms.  Anything else has no
    single-gate cancellation and aborts."""
    shears: list[GaussianOp] = []
    czs: list[GaussianOp] = []
    for m, c in surplus.sorted_terms():
        if m.is_multilinear:
            czs.append(cphase(tuple(l for l, _ in m.powers), -c))
        elif len(m.powers) == 1 and m.powers[0][1] == 2:
            shears.append(shear_q(m.powers[0][0], -2.0 * c))
        else:
            raise ShapeMismatchError(
                f"surplus term {m} has no single-gate cancellation")
    return shears + czs


def _surplus(phase: PhasePolynomial, target: PhasePolynomial) -> PhasePolynomial:
    return phase + target.scale(-1.0)


def _check_fanout_shape(phase: PhasePolynomial, ancilla: str, controls, targets):
    """The recipes below require the two-control fan-out shape: one edge over
    (ancilla, c1, c2) and one (ancilla, target_i) edge per target, nothing
    else.  Returns (control weight, per-target weights)."""
    c1, c2 = controls
    want_ctrl = Monomial.from_modes(ancilla, c1, c2)
    seen = set(phase.terms)
    ctrl = phase.coefficient(want_ctrl)
    if ctrl == 0.0:
        raise ShapeMismatchError(f"missing control edge {want_ctrl}")
    expected = {want_ctrl}
    target_weights = {}
    for t in targets:
        m = Monomial.from_modes(ancilla, t)
        w = phase.coefficient(m)
        if w == 0.0:
            raise ShapeMismatchError(f"missing coupling edge {m}")
        target_weights[t] = w
        expected.add(m)
    if seen != expected or phase.constant != 0.0:
        raise ShapeMismatchError("state does not match the fan-out pattern")
    return ctrl, target_weights


def toffoli_recipe(ancilla: str, controls: tuple[str, str], target: str,
                   weight: float = 2.0, shear: float = 1.0,
                   input_phase: PhasePolynomial | None = None) -> Recipe:
    """Gaussian sequence with the effect of a three-mode controlled-Z.

    From an edge over (ancilla, c1, c2) and an (ancilla, target) edge of the
    given weight, emits momentum shears on the ancilla around an edge removal,
    plus the cleanup gates that cancel every decoration; the produced edge
    over (c1, c2, target) carries ``shear * weight`` times the control weight.
    """
    c1, c2 = controls
    if input_phase is None:
        input_phase = PhasePolynomial({
            Monomial.from_modes(ancilla, c1, c2): 1.0,
            Monomial.from_modes(ancilla, target): weight,
        })
    ctrl_w, target_ws = _check_fanout_shape(input_phase, ancilla, controls, [target])
    weight = target_ws[target]
    modes = (ancilla, c1, c2, target)
    head = [
        shear_p(ancilla, shear),
        cphase((ancilla, target), -weight),
        shear_p(ancilla, -shear),
    ]
    goal = PhasePolynomial({
        Monomial.from_modes(ancilla, c1, c2): ctrl_w,
        Monomial.from_modes(c1, c2, target): shear * ctrl_w * weight,
    })
    partial = apply_circuit(new_state(modes, input_phase), head)
    cleanup = _cancellation_ops(_surplus(partial.phase, goal))
    return Recipe(
        name="toffoli",
        modes=modes,
        ops=tuple(head + cleanup),
        input_phase=input_phase,
        target=goal,
        assumptions=(
            f"input carries exactly the edges ({ancilla},{c1},{c2}) and "
            f"({ancilla},{target})",
        ),
    )


def multi_target_recipe(ancilla: str, controls: tuple[str, str], targets,
                        literal: bool = False) -> tuple[Recipe, PhasePolynomial]:
    """Fan a third-order edge out to every target mode, unit weights.

    Returns ``(recipe, leftover)``.  The corrected sequence includes the
    pairwise controlled-Z cleanup between targets that exact expansion of the
    squared adjacency demands for two or more targets (leftover is then
    empty).  With ``literal=True`` those pairwise gates are omitted and the
    leftover polynomial reports exactly the terms that remain.
    """
    targets = tuple(targets)
    if not targets:
        raise ShapeMismatchError("need at least one target mode")
    c1, c2 = controls
    input_terms = {Monomial.from_modes(ancilla, c1, c2): 1.0}
    for t in targets:
        input_terms[Monomial.from_modes(ancilla, t)] = 1.0
    input_phase = PhasePolynomial(input_terms)
    modes = (ancilla, c1, c2) + targets

    head = [shear_p(ancilla, 1.0)]
    head += [cphase((ancilla, t), -1.0) for t in targets]
    head.append(shear_p(ancilla, -1.0))

    goal_terms = {Monomial.from_modes(ancilla, c1, c2): 1.0}
    for t in targets:
        goal_terms[Monomial.from_modes(c1, c2, t)] = 1.0
    goal = PhasePolynomial(goal_terms)

    partial = apply_circuit(new_state(modes, input_phase), head)
    cleanup = _cancellation_ops(_surplus(partial.phase, goal))
    if literal:
        cleanup = [op for op in cleanup if op.kind != "CZ"]
    ops = tuple(head + cleanup)
    final = apply_circuit(new_state(modes, input_phase), ops)
    leftover = _surplus(final.phase, goal)
    name = "multi-target" + ("-literal" if literal else "")
    recipe = Recipe(
        name=name,
        modes=modes,
        ops=ops,
        input_phase=input_phase,
        target=final.phase if literal else goal,
        assumptions=(
            f"input couples {ancilla} to every target with unit weight",
            f"control edge ({ancilla},{c1},{c2}) has unit weight",
        ),
    )
    return recipe, leftover


def order_raise_demo() -> Recipe:
    """Five-mode demonstration: two third-order edges sharing one mode turn
    into a fourth-order edge under a single momentum shear."""
    modes = ("A", "B", "C", "D", "E")
    ops = (
        cphase(("A", "B", "C"), 1.0),
        cphase(("A", "D", "E"), 1.0),
        shear_p("A", 1.0),
    )
    target = PhasePolynomial.build({
        ("A", "B", "C"): 1.0,
        ("A", "D", "E"): 1.0,
        ("B", "B", "C", "C"): 0.5,
        ("D", "D", "E", "E"): 0.5,
        ("B", "C", "D", "E"): 1.0,
    })
    return Recipe(
        name="order-raise",
        modes=modes,
        ops=ops,
        input_phase=PhasePolynomial.zero(),
        target=target,
        assumptions=("starts from the bare five-mode register",),
    )


# -- cubic phase gate factorization ---------------------------------------------

@dataclass(frozen=True)
class GateFactor:
    """One factor of an operator-product identity.

    Either a position-polynomial phase (``phase`` set) or a two-mode
    position-momentum coupling ``exp(i strength q_a p_b)`` (``coupling`` set).
    Only multilinear phase factors are symbolic, i.e. expressible as engine
    controlled-Z gates; coupling factors exist for the numerical oracle only.
    """

    phase: PhasePolynomial | None = None
    coupling: tuple[str, str] | None = None
    strength: float = 0.0

    def __post_init__(self):
        if (self.phase is None) == (self.coupling is None):
            raise ValueError("factor is either a phase or a coupling")

    @property
    def symbolic(self) -> bool:
        return self.phase is not None and all(m.is_multilinear for m in self.phase.terms)

    def inverse(self) -> "GateFactor":
        if self.phase is not None:
            return GateFactor(phase=self.phase.scale(-1.0))
        return GateFactor(coupling=self.coupling, strength=-self.strength)


def _qp(q_mode: str, p_mode: str, strength: float) -> GateFactor:
    return GateFactor(coupling=(q_mode, p_mode), strength=strength)


def _phase(edges, sign: float) -> GateFactor:
    return GateFactor(phase=PhasePolynomial.build({edges: sign}))


def cubic_phase_sequence(mode: str = "A", helper_b: str = "B",
                         helper_c: str = "C", expanded: bool = True) -> list[GateFactor]:
    """Factor ``exp(i q^3)`` on one mode into couplings and controlled-Z gates.

    Returned in product order (apply right to left).  The outer four-factor
    form needs one helper mode and keeps squared-variable phase factors; the
    expanded ten-factor form needs two helpers and reduces every phase factor
    to a three-mode controlled-Z, at the price of extra coupling factors.
    """
    a, b, c = mode, helper_b, helper_c
    if not expanded:
        return [
            _qp(a, c, 1.0),
            _phase((a, a, c), 1.0),
            _qp(a, c, -1.0),
            _phase((a, a, c), -1.0),
        ]

    def quadratic_factor(sign: float) -> list[GateFactor]:
        # exp(i sign q_a^2 q_c) via a coupling onto helper b and two Toffolis
        fwd = [_qp(a, b, 1.0), _phase((a, b, c), 1.0),
               _qp(a, b, -1.0), _phase((a, b, c), -1.0)]
        if sign > 0:
            return fwd
        return [f.inverse() for f in reversed(fwd)]

    return ([_qp(a, c, 1.0)] + quadratic_factor(1.0)
            + [_qp(a, c, -1.0)] + quadratic_factor(-1.0))


def cubic_phase_target(mode: str = "A") -> PhasePolynomial:
    return PhasePolynomial({Monomial({mode: 3}): 1.0})
