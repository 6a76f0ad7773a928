"""Weighted-hypergraph reading of a phase polynomial.

Multilinear terms are hyperedges; anything with a squared (or higher)
variable is kept aside as a decoration polynomial.  The two pieces together
always reconstruct the source polynomial exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .phasepoly import DEFAULT_EPS, Monomial, PhasePolynomial, _angle_distance


@dataclass(frozen=True)
class Hyperedge:
    """A multilinear monomial viewed as a weighted edge."""

    modes: frozenset[str]
    weight: float

    @property
    def order(self) -> int:
        return len(self.modes)

    def sort_key(self):
        return (len(self.modes), tuple(sorted(self.modes)))


@dataclass(frozen=True)
class HypergraphDecomposition:
    """Edges plus the non-multilinear remainder of a phase polynomial."""

    edges: tuple[Hyperedge, ...]
    decorations: PhasePolynomial  # carries the source constant as well

    @property
    def order(self) -> int:
        """Largest edge cardinality; 0 for an edgeless graph."""
        return max((e.order for e in self.edges), default=0)

    def is_standard(self, eps: float = DEFAULT_EPS) -> bool:
        """True when nothing falls outside the plain hypergraph picture."""
        return (not self.decorations.terms
                and abs(_angle_distance(self.decorations.constant, 0.0)) <= eps)

    def to_polynomial(self) -> PhasePolynomial:
        """Reassemble the source polynomial (exact inverse of decompose)."""
        poly = self.decorations
        for e in self.edges:
            poly = poly.add_term(Monomial.from_modes(*e.modes), e.weight, eps=0.0)
        return poly

    def edges_containing(self, mode: str) -> list[Hyperedge]:
        """All edges through the given vertex, in canonical order."""
        return [e for e in self.edges if mode in e.modes]

    def adjacency(self, mode: str) -> list[tuple[frozenset[str], float]]:
        """Edges through the vertex with the vertex removed.

        Entries whose remainders coincide are merged by weight addition; the
        empty remainder (from the single-vertex edge) is kept and maps to the
        constant under downstream substitution.
        """
        merged: dict[frozenset[str], float] = {}
        for e in self.edges_containing(mode):
            rest = e.modes - {mode}
            merged[rest] = merged.get(rest, 0.0) + e.weight
        return sorted(((m, w) for m, w in merged.items()),
                      key=lambda mw: (len(mw[0]), tuple(sorted(mw[0]))))


def decompose_graph(f: PhasePolynomial) -> HypergraphDecomposition:
    """Split a polynomial into hyperedges and decorations."""
    edges = []
    deco: dict[Monomial, float] = {}
    for m, c in f.sorted_terms():
        if m.is_multilinear:
            edges.append(Hyperedge(m.modes, c))
        else:
            deco[m] = c
    edges.sort(key=Hyperedge.sort_key)
    return HypergraphDecomposition(tuple(edges), PhasePolynomial(deco, f.constant))


def merge_edge_sets(a: dict[frozenset[str], float], b: dict[frozenset[str], float],
                    eps: float = DEFAULT_EPS) -> dict[frozenset[str], float]:
    """Union of two weighted edge sets; shared edges add weights, zeros drop."""
    out = dict(a)
    for modes, w in b.items():
        out[modes] = out.get(modes, 0.0) + w
    return {m: w for m, w in out.items() if abs(w) >= eps}


def edge_set(d: HypergraphDecomposition, mode: str | None = None) -> dict[frozenset[str], float]:
    """Edge set as a mapping, optionally restricted to edges through a vertex."""
    edges = d.edges if mode is None else d.edges_containing(mode)
    return {e.modes: e.weight for e in edges}
