"""Sparse real polynomials in position-quadrature variables.

A state is held as ``exp(i f(q_1, ..., q_n))`` acting on a product of
zero-momentum eigenstates; ``f`` is the :class:`PhasePolynomial`.  Multilinear
monomials are the hyperedges of the graph picture, monomials with any exponent
above one are the "decorations" that fall outside it, and the scalar part is
an accumulated global phase.

All values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

#: coefficients with magnitude below this are pruned during canonicalization
DEFAULT_EPS = 1e-12

_TWO_PI = 2.0 * math.pi

_LABEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def check_mode_label(label: str) -> str:
    """Validate a mode label (nonempty identifier, safe for all file formats)."""
    if not isinstance(label, str) or not _LABEL_RE.match(label):
        raise ValueError(f"invalid mode label {label!r}")
    return label


@dataclass(frozen=True)
class Monomial:
    """Product of position variables, stored as sorted (label, exponent) pairs.

    Exponents are positive; the empty product (a pure constant) is not a
    monomial — constants live in :attr:`PhasePolynomial.constant`.
    """

    powers: tuple[tuple[str, int], ...]

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]]):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[str, int] = {}
        for label, exp in items:
            check_mode_label(label)
            if exp != int(exp):
                raise ValueError(f"non-integer exponent {exp!r} for {label}")
            merged[label] = merged.get(label, 0) + int(exp)
        for label, exp in merged.items():
            if exp < 0:
                raise ValueError(f"negative exponent for {label}")
        powers = tuple(sorted((l, e) for l, e in merged.items() if e > 0))
        if not powers:
            raise ValueError("empty monomial; constants belong to PhasePolynomial.constant")
        object.__setattr__(self, "powers", powers)

    @classmethod
    def from_modes(cls, *labels: str) -> "Monomial":
        """Multilinear monomial on the given modes; repeats raise the power."""
        counts: dict[str, int] = {}
        for l in labels:
            counts[l] = counts.get(l, 0) + 1
        return cls(counts)

    @property
    def modes(self) -> frozenset[str]:
        return frozenset(l for l, _ in self.powers)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def degree_of(self, mode: str) -> int:
        for l, e in self.powers:
            if l == mode:
                return e
        return 0

    @property
    def is_multilinear(self) -> bool:
        return all(e == 1 for _, e in self.powers)

    def without(self, mode: str) -> "Monomial | None":
        """Drop the given variable entirely; None if nothing remains."""
        rest = [(l, e) for l, e in self.powers if l != mode]
        return Monomial(rest) if rest else None

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(self.powers) + tuple(other.powers))

    def __str__(self) -> str:
        return "*".join(f"{l}^{e}" for l, e in self.powers)

    def sort_key(self):
        return self.powers


def _parse_monomial(text: str) -> Monomial:
    pairs = []
    for factor in text.split("*"):
        label, _, exp = factor.partition("^")
        if not exp:
            raise ValueError(f"malformed monomial factor {factor!r}")
        pairs.append((label.strip(), int(exp)))
    return Monomial(pairs)


@dataclass(frozen=True)
class PhasePolynomial:
    """Real multivariate polynomial ``f`` describing the unitary ``exp(i f)``.

    ``terms`` maps monomials to nonzero float coefficients; ``constant`` is the
    accumulated scalar (a global phase in radians, compared modulo 2*pi but
    stored unreduced so intermediate algebra stays exact).
    """

    terms: dict[Monomial, float]
    constant: float = 0.0

    def __init__(self, terms: Mapping[Monomial, float] | None = None,
                 constant: float = 0.0, eps: float = DEFAULT_EPS):
        pruned = {}
        for m, c in (terms or {}).items():
            if not isinstance(m, Monomial):
                raise TypeError(f"term key {m!r} is not a Monomial")
            c = float(c)
            if not math.isfinite(c):
                raise ValueError(f"non-finite coefficient for {m}")
            if abs(c) >= eps:
                pruned[m] = c
        if not math.isfinite(constant):
            raise ValueError("non-finite constant")
        object.__setattr__(self, "terms", pruned)
        object.__setattr__(self, "constant", float(constant))

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls) -> "PhasePolynomial":
        return cls({})

    @classmethod
    def build(cls, edges: Mapping[tuple[str, ...], float],
              constant: float = 0.0) -> "PhasePolynomial":
        """Build from ``{("A","B"): w, ...}``; repeated labels raise powers."""
        return cls({Monomial.from_modes(*modes): w for modes, w in edges.items()},
                   constant)

    # -- inspection ----------------------------------------------------------

    @property
    def modes(self) -> frozenset[str]:
        out: set[str] = set()
        for m in self.terms:
            out |= m.modes
        return frozenset(out)

    def degree_of(self, mode: str) -> int:
        """Highest exponent the variable carries across all terms."""
        return max((m.degree_of(mode) for m in self.terms), default=0)

    def coefficient(self, m: Monomial) -> float:
        return self.terms.get(m, 0.0)

    def is_zero(self, eps: float = DEFAULT_EPS) -> bool:
        return not self.terms and abs(_angle_distance(self.constant, 0.0)) <= eps

    def sorted_terms(self) -> list[tuple[Monomial, float]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def evaluate(self, values: Mapping[str, float]) -> float:
        """Evaluate at a real point (missing variables default to 0)."""
        total = self.constant
        for m, c in self.terms.items():
            prod = c
            for label, exp in m.powers:
                prod *= values.get(label, 0.0) ** exp
            total += prod
        return total

    # -- algebra -------------------------------------------------------------

    def add_term(self, m: Monomial, t: float, eps: float = DEFAULT_EPS) -> "PhasePolynomial":
        """Add weight ``t`` to monomial ``m`` (weights on a shared edge sum)."""
        if not math.isfinite(t):
            raise ValueError("non-finite weight")
        terms = dict(self.terms)
        terms[m] = terms.get(m, 0.0) + t
        return PhasePolynomial(terms, self.constant, eps)

    def add_constant(self, c: float) -> "PhasePolynomial":
        return PhasePolynomial(self.terms, self.constant + c)

    def __add__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0.0) + c
        return PhasePolynomial(terms, self.constant + other.constant)

    def scale(self, factor: float) -> "PhasePolynomial":
        return PhasePolynomial({m: c * factor for m, c in self.terms.items()},
                               self.constant * factor)

    def __mul__(self, other: "PhasePolynomial") -> "PhasePolynomial":
        terms: dict[Monomial, float] = {}
        constant = self.constant * other.constant
        for m, c in self.terms.items():
            if other.constant:
                terms[m] = terms.get(m, 0.0) + c * other.constant
        for m, c in other.terms.items():
            if self.constant:
                terms[m] = terms.get(m, 0.0) + c * self.constant
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = m1 * m2
                terms[prod] = terms.get(prod, 0.0) + c1 * c2
        return PhasePolynomial(terms, constant)

    def substitute_affine(self, mode: str, alpha: float, beta: float,
                          eps: float = DEFAULT_EPS) -> "PhasePolynomial":
        """Replace the variable by ``alpha*q + beta`` and expand.

        ``alpha=1, beta=0`` returns self unchanged (bit-exact); ``alpha=0``
        evaluates the variable at ``beta``.
        """
        if not (math.isfinite(alpha) and math.isfinite(beta)):
            raise ValueError("non-finite substitution parameters")
        if alpha == 1.0 and beta == 0.0:
            return self
        terms: dict[Monomial, float] = {}
        constant = self.constant
        for m, c in self.terms.items():
            k = m.degree_of(mode)
            if k == 0:
                terms[m] = terms.get(m, 0.0) + c
                continue
            rest = m.without(mode)
            # (alpha*q + beta)^k expanded by the binomial theorem
            for j in range(k + 1):
                coeff = c * math.comb(k, j) * alpha**j * beta ** (k - j)
                if coeff == 0.0:
                    continue
                if j == 0:
                    part = rest
                else:
                    qj = Monomial({mode: j})
                    part = qj if rest is None else rest * qj
                if part is None:
                    constant += coeff
                else:
                    terms[part] = terms.get(part, 0.0) + coeff
        return PhasePolynomial(terms, constant, eps)

    def linear_split(self, mode: str) -> tuple["PhasePolynomial", "PhasePolynomial", int]:
        """Split ``f = q_mode * h + g`` and report the variable's top degree.

        Returns ``(h, g, deg)``.  When ``deg <= 1`` the identity is exact;
        when ``deg >= 2`` the quadratic-and-above terms belong to neither part
        and the caller must branch on ``deg``.
        """
        h_terms: dict[Monomial, float] = {}
        h_const = 0.0
        g_terms: dict[Monomial, float] = {}
        deg = 0
        for m, c in self.terms.items():
            k = m.degree_of(mode)
            deg = max(deg, k)
            if k == 0:
                g_terms[m] = c
            elif k == 1:
                rest = m.without(mode)
                if rest is None:
                    h_const += c
                else:
                    h_terms[rest] = h_terms.get(rest, 0.0) + c
        return (PhasePolynomial(h_terms, h_const),
                PhasePolynomial(g_terms, self.constant), deg)

    def allclose(self, other: "PhasePolynomial", tol: float = DEFAULT_EPS) -> bool:
        """Term-wise equality within ``tol``; constants compared modulo 2*pi."""
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
        keys = set(self.terms) | set(other.terms)
        for m in keys:
            if abs(self.terms.get(m, 0.0) - other.terms.get(m, 0.0)) > tol:
                return False
        return abs(_angle_distance(self.constant, other.constant)) <= tol

    # -- text form -----------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form: one ``coeff * A^1*B^2`` line per term, then
        a ``const <radians>`` trailer.  Round-trips bit-exactly."""
        lines = [f"{c!r} * {m}" for m, c in self.sorted_terms()]
        lines.append(f"const {self.constant!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PhasePolynomial":
        terms: dict[Monomial, float] = {}
        constant = 0.0
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("const "):
                constant = float(line[len("const "):])
                continue
            coeff_text, sep, mono_text = line.partition(" * ")
            if not sep:
                raise ValueError(f"malformed polynomial line {line!r}")
            m = _parse_monomial(mono_text)
            terms[m] = terms.get(m, 0.0) + float(coeff_text)
        return cls(terms, constant)

    def __str__(self) -> str:
        if not self.terms and self.constant == 0.0:
            return "0"
        parts = [f"{c:g}*{m}" for m, c in self.sorted_terms()]
        if self.constant != 0.0:
            parts.append(f"const {self.constant:g}")
        return " + ".join(parts)


def square_half(h: PhasePolynomial, s: float) -> PhasePolynomial:
    """Expand ``(s/2) * h**2`` into canonical terms.

    Each input term ``t*q_e`` contributes the diagonal ``(s/2) t^2 q_e^2`` and
    each unordered pair the cross term ``s * t * t' * q_e q_e'``.
    """
    return (h * h).scale(0.5 * s)


def poly_equal(f: PhasePolynomial, g: PhasePolynomial, tol: float = DEFAULT_EPS) -> bool:
    return f.allclose(g, tol)


def _angle_distance(a: float, b: float) -> float:
    """Signed distance between two angles, in (-pi, pi]."""
    d = (a - b) % _TWO_PI
    if d > math.pi:
        d -= _TWO_PI
    return d
