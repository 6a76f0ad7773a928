"""Symbolic rewrite engine for continuous-variable hypergraph states.

The engine (:mod:`hyperforge.engine`) applies Gaussian operations and
quadrature measurements to states held as position phase polynomials
(:mod:`hyperforge.phasepoly`), read graphically through
:mod:`hyperforge.hypergraph`.  :mod:`hyperforge.decompose` supplies lowering
passes and Gaussian-only recipes for non-Gaussian targets, and
:mod:`hyperforge.oracle` verifies every rule numerically in truncated Fock
space.  File formats, the CLI, and the HTTP session service live in
:mod:`hyperforge.fileio`, :mod:`hyperforge.cli`, and
:mod:`hyperforge.service`.
"""

from .engine import EngineState, apply_circuit, apply_op, new_state
from .hypergraph import HypergraphDecomposition, decompose_graph
from .ops import GaussianOp, parse_op
from .phasepoly import Monomial, PhasePolynomial

__all__ = [
    "EngineState",
    "GaussianOp",
    "HypergraphDecomposition",
    "Monomial",
    "PhasePolynomial",
    "apply_circuit",
    "apply_op",
    "decompose_graph",
    "new_state",
    "parse_op",
]

__version__ = "0.1.0"
