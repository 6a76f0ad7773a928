"""Truncated-Fock numerical oracle.

Realizes symbolic states at finite squeezing and checks every rewrite rule by
direct matrix mechanics, independently of the symbolic algebra.

Conventions (the single place they live):

* ``q = (a + a*)/sqrt(2)``, ``p = (a - a*)/(i sqrt(2))``, so ``[q, p] = i``
  and the vacuum has ``<q^2> = <p^2> = 1/2``.
* A zero-momentum eigenstate at squeezing ``r`` is ``exp(i r G)|0>`` with
  ``G = (qp + pq)/2``, giving ``<p^2> = exp(-2r)/2``.
* Gates generated by position polynomials (Z, Dq, CZ and every phase unitary)
  are applied as functions of the truncated position matrix, i.e. diagonally
  in its eigenbasis; momentum-generated gates (X, Dp) likewise in the momentum
  eigenbasis.  Within each family the truncated operators commute exactly, so
  rules that are diagonal identities hold to rounding even at small cutoffs.
* The rotation generator is written in its exact Fock matrix elements
  ``diag(n + 1/2)``; products of truncated factors would corrupt the top level.

Truncation is reported, never hidden: preparation refuses when the squeezed
vacuum visibly overflows the cutoff, and states expose the boundary mass.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .decompose import GateFactor, cubic_phase_sequence, cubic_phase_target
from .errors import (
    CutoffTooSmallError,
    DimensionOverflowError,
    UnknownModeError,
)
from .ops import GaussianOp
from .phasepoly import Monomial, PhasePolynomial


def default_cutoff() -> int:
    return int(os.environ.get("HYPERFORGE_CUTOFF", "20"))


def default_squeezing() -> float:
    return float(os.environ.get("HYPERFORGE_R", "2.0"))


# -- single-mode matrices (cached per cutoff) ----------------------------------

@lru_cache(maxsize=None)
def _ladder(d: int) -> np.ndarray:
    a = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        a[n - 1, n] = math.sqrt(n)
    return a


@lru_cache(maxsize=None)
def quadrature_q(d: int) -> np.ndarray:
    a = _ladder(d)
    return (a + a.conj().T) / math.sqrt(2.0)


@lru_cache(maxsize=None)
def quadrature_p(d: int) -> np.ndarray:
    a = _ladder(d)
    return (a - a.conj().T) / (1j * math.sqrt(2.0))


@lru_cache(maxsize=None)
def _q_basis(d: int):
    vals, vecs = np.linalg.eigh(quadrature_q(d))
    return vals, vecs


@lru_cache(maxsize=None)
def _p_basis(d: int):
    vals, vecs = np.linalg.eigh(quadrature_p(d))
    return vals, vecs


@lru_cache(maxsize=None)
def _squeeze_basis(d: int):
    q, p = quadrature_q(d), quadrature_p(d)
    gen = (q @ p + p @ q) / 2.0
    vals, vecs = np.linalg.eigh(gen)
    return vals, vecs


def squeeze_unitary(d: int, s: float) -> np.ndarray:
    """exp(-i s (qp+pq)/2) on the truncated space."""
    vals, vecs = _squeeze_basis(d)
    return (vecs * np.exp(-1j * s * vals)) @ vecs.conj().T


# -- configuration and state -----------------------------------------------------

@dataclass(frozen=True)
class FockConfig:
    modes: tuple[str, ...]
    cutoff: int = 0  # 0 means "use the environment default"
    squeezing: tuple[tuple[str, float], ...] = ()
    max_amplitudes: int = 10**7
    warn_leakage: float = 1e-4
    max_prepare_leakage: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(set(self.modes)) != len(self.modes) or not self.modes:
            raise ValueError("modes must be a nonempty set of distinct labels")
        cutoff = self.cutoff or default_cutoff()
        object.__setattr__(self, "cutoff", int(cutoff))
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        if self.cutoff ** len(self.modes) > self.max_amplitudes:
            raise DimensionOverflowError(
                f"{self.cutoff}^{len(self.modes)} amplitudes exceed the ceiling "
                f"{self.max_amplitudes}")
        if isinstance(self.squeezing, dict):
            object.__setattr__(self, "squeezing", tuple(sorted(self.squeezing.items())))
        rmap = dict(self.squeezing)
        unknown = set(rmap) - set(self.modes)
        if unknown:
            raise UnknownModeError(f"squeezing given for unknown modes {sorted(unknown)}")

    @classmethod
    def create(cls, modes, cutoff: int = 0, squeezing=None, **kw) -> "FockConfig":
        """Accepts a scalar squeezing (all modes) or a per-mode mapping."""
        modes = tuple(modes)
        if squeezing is None:
            squeezing = default_squeezing()
        if isinstance(squeezing, (int, float)):
            squeezing = {m: float(squeezing) for m in modes}
        return cls(modes=modes, cutoff=cutoff,
                   squeezing=tuple(sorted(squeezing.items())), **kw)

    def r(self, mode: str) -> float:
        return dict(self.squeezing).get(mode, default_squeezing())

    def axis(self, mode: str) -> int:
        try:
            return self.modes.index(mode)
        except ValueError:
            raise UnknownModeError(f"mode {mode!r} not in oracle register")

    def without(self, mode: str) -> "FockConfig":
        rest = tuple(m for m in self.modes if m != mode)
        rmap = {m: r for m, r in self.squeezing if m != mode}
        return FockConfig.create(rest, self.cutoff, rmap,
                                 max_amplitudes=self.max_amplitudes,
                                 warn_leakage=self.warn_leakage,
                                 max_prepare_leakage=self.max_prepare_leakage)

    def adjust_squeezing(self, mode: str, delta: float) -> "FockConfig":
        rmap = dict(self.squeezing)
        rmap[mode] = rmap.get(mode, default_squeezing()) + delta
        return FockConfig.create(self.modes, self.cutoff, rmap,
                                 max_amplitudes=self.max_amplitudes,
                                 warn_leakage=self.warn_leakage,
                                 max_prepare_leakage=self.max_prepare_leakage)


@dataclass(frozen=True)
class FockState:
    amps: np.ndarray
    config: FockConfig

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "FockState":
        return FockState(self.amps / self.norm(), self.config)

    def boundary_mass(self) -> float:
        """Probability of finding any mode in its top Fock level."""
        d = self.config.cutoff
        interior = self.amps[(slice(0, d - 1),) * len(self.config.modes)]
        total = float(np.vdot(self.amps, self.amps).real)
        kept = float(np.vdot(interior, interior).real)
        return max(0.0, 1.0 - kept / total)


def fidelity(x: FockState, y: FockState) -> float:
    """Squared overlap of the normalized states."""
    if x.amps.shape != y.amps.shape:
        raise ValueError("states live on different registers")
    inner = np.vdot(x.amps, y.amps)
    return float(abs(inner) ** 2 / (np.vdot(x.amps, x.amps).real
                                    * np.vdot(y.amps, y.amps).real))


# -- state preparation ------------------------------------------------------------

def ideal_tail_mass(r: float, d: int) -> float:
    """Photon-number mass of the exact squeezed vacuum beyond the cutoff.

    The exact state populates even levels with the known closed-form weights;
    this is the honest truncation-loss figure for squeezing ``r`` at ``d``
    kept levels, independent of how the truncated state is constructed.
    """
    t2 = math.tanh(r) ** 2
    prob = 1.0 / math.cosh(r)  # weight of |0>
    kept = 0.0
    n = 0
    while 2 * n <= d - 1:
        kept += prob
        prob *= t2 * (2 * n + 1) / (2 * n + 2)
        n += 1
    return max(0.0, 1.0 - kept)


def prepare_squeezed_vacuum(cfg: FockConfig) -> FockState:
    """Product of finitely squeezed vacua approximating zero-momentum modes.

    Each factor is the exponential of the truncated squeezing generator
    applied to the vacuum, with the sign fixed by the target variance
    ``<p^2> = exp(-2r)/2``.  Refuses when the exact state at this squeezing
    would lose more than the configured mass to truncation.
    """
    d = cfg.cutoff
    factors = []
    for mode in cfg.modes:
        r = cfg.r(mode)
        tail = ideal_tail_mass(r, d)
        if tail > cfg.max_prepare_leakage:
            raise CutoffTooSmallError(
                f"squeezing r={r} leaves {tail:.1%} of mode {mode!r} beyond "
                f"{d} levels")
        factors.append(squeeze_unitary(d, r)[:, 0])
    amps = reduce(np.multiply.outer, factors)
    return FockState(amps, cfg)


def exact_squeezed_amplitudes(r: float, d: int) -> np.ndarray:
    """Closed-form Fock amplitudes of the squeezed vacuum, hard-truncated.

    Norm falls short of one by exactly :func:`ideal_tail_mass`.  Useful as a
    cross-check on the generator-exponential construction; note the sharp
    truncation edge inflates quadratic moments near small cutoffs, which is
    why preparation does not use it.
    """
    c = np.zeros(d)
    coef = 1.0 / math.sqrt(math.cosh(r))
    n = 0
    while 2 * n <= d - 1:
        c[2 * n] = coef
        coef *= math.tanh(r) * math.sqrt((2 * n + 1) * (2 * n + 2)) / (2 * n + 2)
        n += 1
    return c


# -- generic axis machinery ---------------------------------------------------------

def _apply_axis_matrix(amps: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(m, amps, axes=(1, axis)), 0, axis)


def _grid_phase(st: FockState, poly: PhasePolynomial, vals_vecs) -> FockState:
    """Multiply by exp(i poly(lambda)) in the given per-mode eigenbasis."""
    cfg = st.config
    involved = sorted({cfg.axis(m) for m in poly.modes})
    lam, vecs = vals_vecs
    if not involved:
        return FockState(st.amps * np.exp(1j * poly.constant), cfg)
    amps = st.amps.astype(complex)
    for ax in involved:
        amps = _apply_axis_matrix(amps, vecs.conj().T, ax)
    d = cfg.cutoff
    grid = np.full((d,) * len(involved), float(poly.constant))
    mode_of_axis = {cfg.axis(m): m for m in poly.modes}
    for mono, coeff in poly.terms.items():
        vectors = []
        for ax in involved:
            e = mono.degree_of(mode_of_axis[ax])
            vectors.append(lam**e if e else np.ones(d))
        grid = grid + coeff * reduce(np.multiply.outer, vectors)
    shape = [1] * len(cfg.modes)
    for ax in involved:
        shape[ax] = d
    amps = amps * np.exp(1j * grid).reshape(shape)
    for ax in involved:
        amps = _apply_axis_matrix(amps, vecs, ax)
    return FockState(amps, cfg)


def apply_phase_unitary(st: FockState, poly: PhasePolynomial) -> FockState:
    """Apply exp(i f(q)) for a position polynomial f.

    Position matrices of distinct modes commute, and powers of one mode are
    powers of the same matrix, so the whole unitary is diagonal in the
    tensor-product position eigenbasis; this is exact on the truncated space.
    """
    unknown = poly.modes - set(st.config.modes)
    if unknown:
        raise UnknownModeError(f"polynomial mentions {sorted(unknown)}")
    return _grid_phase(st, poly, _q_basis(st.config.cutoff))


def _apply_momentum_phase(st: FockState, poly: PhasePolynomial) -> FockState:
    return _grid_phase(st, poly, _p_basis(st.config.cutoff))


def apply_qp_coupling(st: FockState, q_mode: str, p_mode: str, strength: float) -> FockState:
    """Apply exp(i strength q_a p_b) for distinct modes a != b."""
    cfg = st.config
    ax_q, ax_p = cfg.axis(q_mode), cfg.axis(p_mode)
    if ax_q == ax_p:
        raise ValueError("coupling needs two distinct modes")
    d = cfg.cutoff
    lam_q, vec_q = _q_basis(d)
    lam_p, vec_p = _p_basis(d)
    amps = _apply_axis_matrix(st.amps.astype(complex), vec_q.conj().T, ax_q)
    amps = _apply_axis_matrix(amps, vec_p.conj().T, ax_p)
    grid = np.exp(1j * strength * np.multiply.outer(lam_q, lam_p))
    shape = [1] * len(cfg.modes)
    shape[ax_q] = d
    shape[ax_p] = d
    if ax_q < ax_p:
        amps = amps * grid.reshape(shape)
    else:
        amps = amps * grid.T.reshape(shape)
    amps = _apply_axis_matrix(amps, vec_q, ax_q)
    amps = _apply_axis_matrix(amps, vec_p, ax_p)
    return FockState(amps, cfg)


def numeric_measure(st: FockState, mode: str, basis: str, outcome: float,
                    sigma: float = 0.05) -> FockState:
    """Project with a narrow Gaussian acceptance window and renormalize.

    Exact quadrature eigenstates do not exist at finite cutoff; tests
    extrapolate the window width to zero.  The measured mode stays in the
    register (collapsed near the outcome).
    """
    cfg = st.config
    ax = cfg.axis(mode)
    d = cfg.cutoff
    lam, vecs = _q_basis(d) if basis == "q" else _p_basis(d)
    amps = _apply_axis_matrix(st.amps.astype(complex), vecs.conj().T, ax)
    window = np.exp(-((lam - outcome) ** 2) / (4.0 * sigma**2))
    shape = [1] * len(cfg.modes)
    shape[ax] = d
    amps = amps * window.reshape(shape)
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise CutoffTooSmallError("measurement window annihilated the state")
    amps = _apply_axis_matrix(amps / norm, vecs, ax)
    return FockState(amps, cfg)


def apply_gaussian_numeric(st: FockState, op: GaussianOp, sigma: float = 0.05) -> FockState:
    """Apply one Gaussian op (or windowed measurement) by direct numerics."""
    d = st.config.cutoff
    kind, s = op.kind, op.param
    if kind == "Z":
        return apply_phase_unitary(st, PhasePolynomial({Monomial({op.mode: 1}): s}))
    if kind == "Dq":
        return apply_phase_unitary(st, PhasePolynomial({Monomial({op.mode: 2}): s / 2.0}))
    if kind == "CZ":
        return apply_phase_unitary(st, PhasePolynomial({Monomial.from_modes(*op.modes): s}))
    if kind == "X":
        return _apply_momentum_phase(st, PhasePolynomial({Monomial({op.mode: 1}): -s}))
    if kind == "Dp":
        return _apply_momentum_phase(st, PhasePolynomial({Monomial({op.mode: 2}): s / 2.0}))
    if kind == "S":
        u = squeeze_unitary(d, s)
        return FockState(_apply_axis_matrix(st.amps.astype(complex), u,
                                            st.config.axis(op.mode)), st.config)
    if kind == "R":
        phases = np.exp(1j * s * (np.arange(d) + 0.5))
        shape = [1] * len(st.config.modes)
        shape[st.config.axis(op.mode)] = d
        return FockState(st.amps * phases.reshape(shape), st.config)
    if kind == "MeasQ":
        return numeric_measure(st, op.mode, "q", s, sigma)
    if kind == "MeasP":
        return numeric_measure(st, op.mode, "p", s, sigma)
    raise ValueError(f"no numeric form for op kind {kind!r}")


# -- moments ------------------------------------------------------------------------

def moment(st: FockState, factors) -> complex:
    """Expectation of an operator string, e.g. ``[("A","q"),("A","q")]``.

    Factors are written left to right as in the operator product (the
    rightmost acts first).  Same-mode mixed strings should keep q factors to
    the left of p factors to match the canonical ordering.
    """
    cfg = st.config
    d = cfg.cutoff
    ket = st.normalized()
    amps = ket.amps.astype(complex)
    for mode, kind in reversed(list(factors)):
        mat = quadrature_q(d) if kind == "q" else quadrature_p(d)
        amps = _apply_axis_matrix(amps, mat, cfg.axis(mode))
    return complex(np.vdot(ket.amps, amps))


# -- rule verification ----------------------------------------------------------------

@dataclass(frozen=True)
class RuleCheck:
    rule: str
    params: str
    squeezing: float
    cutoff: int
    fidelity: float
    budget: float
    predicted_fidelity: float | None
    leakage: float

    @property
    def passed(self) -> bool:
        """Within budget of the closed-form prediction when one exists,
        within budget of unity otherwise."""
        target = 1.0 if self.predicted_fidelity is None else self.predicted_fidelity
        return abs(self.fidelity - target) <= self.budget

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "params": self.params,
            "squeezing": self.squeezing,
            "cutoff": self.cutoff,
            "fidelity": self.fidelity,
            "budget": self.budget,
            "predicted_fidelity": self.predicted_fidelity,
            "leakage": self.leakage,
            "pass": self.passed,
        }


#: rules that are diagonal identities for the oracle (no finite-squeezing error)
EXACT_KINDS = ("Z", "Dq", "CZ")


def displacement_fidelity_prediction(s: float, r: float) -> float:
    """Closed-form fidelity of the position-displacement rule at squeezing r."""
    return math.exp(-0.5 * s * s * math.exp(-2.0 * r))


def predicted_fidelity(op: GaussianOp, cfg: FockConfig) -> float | None:
    if op.kind in EXACT_KINDS:
        return 1.0
    if op.kind == "X":
        return displacement_fidelity_prediction(op.param, cfg.r(op.mode))
    if op.kind == "R":
        n = round(op.param / math.pi)
        if abs(op.param - n * math.pi) <= 1e-9:
            return 1.0
    return None


def _predict_config(op: GaussianOp, cfg: FockConfig) -> FockConfig:
    # squeezing composes with the preparation squeeze on the acted mode, so
    # the symbolic post-state is realized at the shifted squeezing
    if op.kind == "S":
        return cfg.adjust_squeezing(op.mode, op.param)
    return cfg


def verify_rule(op: GaussianOp, f_before: PhasePolynomial,
                f_after: PhasePolynomial, cfg: FockConfig,
                budget: float = 5e-3) -> RuleCheck:
    """Compare the symbolic post-state of a unitary rule against direct numerics."""
    if op.is_measurement:
        raise ValueError("use verify_measurement for measurement rules")
    prep = prepare_squeezed_vacuum(cfg)
    actual = apply_gaussian_numeric(apply_phase_unitary(prep, f_before), op)
    predict = apply_phase_unitary(prepare_squeezed_vacuum(_predict_config(op, cfg)),
                                  f_after)
    fid = fidelity(predict, actual)
    leak = max(actual.boundary_mass(), predict.boundary_mass())
    r_ref = cfg.r(op.modes[0])
    return RuleCheck(
        rule=op.kind,
        params=str(op),
        squeezing=r_ref,
        cutoff=cfg.cutoff,
        fidelity=fid,
        budget=budget,
        predicted_fidelity=predicted_fidelity(op, cfg),
        leakage=leak,
    )


def verify_measurement(op: GaussianOp, f_before: PhasePolynomial,
                       f_after: PhasePolynomial, cfg: FockConfig,
                       sigma: float = 0.05, budget: float = 5e-3) -> RuleCheck:
    """Check the position-measurement rule through a narrow-window projection.

    The filtered register still contains the measured mode; the fidelity is
    the overlap of the predicted post-state with the reduced state of the
    remaining modes.
    """
    if op.kind != "MeasQ":
        raise ValueError("only position measurements have a symbolic post-state")
    mode = op.mode
    prep = prepare_squeezed_vacuum(cfg)
    before = apply_phase_unitary(prep, f_before)
    filtered = numeric_measure(before, mode, "q", op.param, sigma)
    predict = apply_phase_unitary(prepare_squeezed_vacuum(cfg.without(mode)), f_after)
    ax = cfg.axis(mode)
    slices = np.moveaxis(filtered.amps, ax, 0)
    pred = predict.amps / np.linalg.norm(predict.amps)
    total = float(np.vdot(filtered.amps, filtered.amps).real)
    overlap = np.tensordot(pred.conj(), slices,
                           axes=(range(pred.ndim), range(1, slices.ndim)))
    fid = float(np.sum(np.abs(overlap) ** 2) / total)
    return RuleCheck(
        rule=op.kind,
        params=f"{op} sigma={sigma:g}",
        squeezing=cfg.r(mode),
        cutoff=cfg.cutoff,
        fidelity=fid,
        budget=budget,
        predicted_fidelity=1.0,
        leakage=filtered.boundary_mass(),
    )


def verify_cubic_identity(cfg: FockConfig, test_state: FockState | None = None,
                          expanded: bool = False) -> float:
    """Fidelity between the factored cubic-phase sequence and the direct gate."""
    need = 3 if expanded else 2
    if len(cfg.modes) < need:
        raise ValueError(f"need at least {need} modes")
    if expanded:
        mode, helper_b, helper_c = cfg.modes[:3]
    else:
        mode, helper_c = cfg.modes[:2]
        helper_b = "UNUSED_HELPER"
    factors = cubic_phase_sequence(mode, helper_b, helper_c, expanded=expanded)
    state = test_state if test_state is not None else prepare_squeezed_vacuum(cfg)
    seq = state
    for f in reversed(factors):
        if f.coupling is not None:
            seq = apply_qp_coupling(seq, f.coupling[0], f.coupling[1], f.strength)
        else:
            seq = apply_phase_unitary(seq, f.phase)
    direct = apply_phase_unitary(state, cubic_phase_target(mode))
    return fidelity(seq, direct)


def commute_check(op: GaussianOp, residual: PhasePolynomial, cfg: FockConfig) -> float:
    """Fidelity of op . exp(i f) against exp(i f') . op on a squeezed register."""
    from .engine import commute_through

    f_prime = commute_through(op, residual)
    prep = prepare_squeezed_vacuum(cfg)
    lhs = apply_gaussian_numeric(apply_phase_unitary(prep, residual), op)
    rhs = apply_phase_unitary(apply_gaussian_numeric(prep, op), f_prime)
    return fidelity(lhs, rhs)


def nearest_grid_outcome(value: float, cutoff: int) -> float:
    """Snap a position-measurement outcome to the truncated-space spectrum.

    The acceptance window of :func:`numeric_measure` selects whole grid nodes
    once it is narrower than their spacing, so only node outcomes admit the
    window-to-zero extrapolation.
    """
    lam, _ = _q_basis(cutoff)
    return float(lam[np.argmin(np.abs(lam - value))])


def standard_rule_battery(r: float = 0.0, cutoff: int = 0,
                          sigma: float = 0.05) -> list[RuleCheck]:
    """Run every rewrite rule once on the four-mode reference state.

    Exact rules (position-generated gates and half-turn rotations) carry a
    rounding-level budget at any squeezing or cutoff.  Rules with genuine
    finite-squeezing content carry looser budgets and additionally need a
    cutoff generous enough for the register's position spread; with small
    cutoffs their rows report honest failures rather than hiding them.
    """
    from .engine import apply_op, measure_q, new_state
    from .ops import cphase, measure_q_op, rotate, shear_p, shear_q, squeeze, xdisp, zdisp

    r = r or default_squeezing()
    cutoff = cutoff or default_cutoff()
    ref = PhasePolynomial.build({("A", "B", "C"): 1.0, ("A", "D"): 2.0})
    st = new_state("ABCD", ref)
    cfg = FockConfig.create(("A", "B", "C", "D"), cutoff=cutoff, squeezing=r)
    cases = [
        (zdisp("B", -2.0), 1e-8),
        (shear_q("B", 2.0), 1e-8),
        (cphase(("A", "D"), 0.5), 1e-8),
        (cphase(("A", "B", "C"), 0.8), 1e-8),
        (rotate("D", math.pi), 1e-8),
        (xdisp("A", 0.25), 5e-3),
        (shear_p("A", 0.1), 5e-2),
        (squeeze("A", 0.3), 5e-2),
    ]
    checks = []
    for op, budget in cases:
        out = apply_op(st, op)
        checks.append(verify_rule(op, ref, out.phase, cfg, budget=budget))
    m = nearest_grid_outcome(0.8, cutoff)
    out = measure_q(st, "A", m)
    checks.append(verify_measurement(measure_q_op("A", m), ref, out.phase, cfg,
                                     sigma=sigma, budget=1e-3))
    return checks
