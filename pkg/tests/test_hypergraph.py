"""Hypergraph reading of phase polynomials and the edge-set algebra."""

import math

from hyperforge.hypergraph import decompose_graph, edge_set, merge_edge_sets
from hyperforge.phasepoly import PhasePolynomial

from conftest import rand_poly

P = PhasePolynomial.build

FIG2A = P({("A", "B", "C"): 1.0, ("A", "D"): 2.0})


class TestDecompose:
    def test_plain_graph(self):
        d = decompose_graph(FIG2A)
        assert {(tuple(sorted(e.modes)), e.weight) for e in d.edges} == {
            (("A", "B", "C"), 1.0), (("A", "D"), 2.0)}
        assert d.decorations.is_zero()
        assert d.order == 3
        assert d.is_standard()

    def test_decoration_separated(self):
        f = P({("A", "B", "C"): 1.0, ("A", "D"): 2.0, ("B", "B"): 1.0})
        d = decompose_graph(f)
        assert len(d.edges) == 2
        assert d.decorations.allclose(P({("B", "B"): 1.0}), 0.0)
        assert not d.is_standard()

    def test_empty(self):
        d = decompose_graph(PhasePolynomial.zero())
        assert d.edges == () and d.order == 0 and d.is_standard()

    def test_nonzero_constant_is_not_standard(self):
        assert not decompose_graph(PhasePolynomial({}, 1.0)).is_standard()
        assert decompose_graph(PhasePolynomial({}, 2 * math.pi)).is_standard()

    def test_reconstruction_round_trip(self, rng):
        for _ in range(200):
            f = rand_poly(rng, n_terms=6, max_exp=3, constant=True)
            d = decompose_graph(f)
            back = d.to_polynomial()
            assert back.terms == f.terms and back.constant == f.constant


class TestEdgeQueries:
    def test_edges_containing(self):
        d = decompose_graph(FIG2A)
        through_a = d.edges_containing("A")
        assert [tuple(sorted(e.modes)) for e in through_a] == [("A", "D"), ("A", "B", "C")]
        assert [e.weight for e in through_a] == [2.0, 1.0]
        through_b = d.edges_containing("B")
        assert [tuple(sorted(e.modes)) for e in through_b] == [("A", "B", "C")]
        assert decompose_graph(PhasePolynomial.zero()).edges_containing("A") == []

    def test_partition_into_containing_and_not(self, rng):
        for _ in range(100):
            d = decompose_graph(rand_poly(rng, n_terms=5))
            inside = set(e.sort_key() for e in d.edges_containing("A"))
            outside = set(e.sort_key() for e in d.edges if "A" not in e.modes)
            assert inside | outside == set(e.sort_key() for e in d.edges)
            assert not (inside & outside)

    def test_adjacency(self):
        d = decompose_graph(FIG2A)
        assert d.adjacency("A") == [(frozenset({"D"}), 2.0),
                                    (frozenset({"B", "C"}), 1.0)]

    def test_adjacency_simple(self):
        d = decompose_graph(P({("A", "B"): 1.0, ("A", "C"): 1.0}))
        assert d.adjacency("A") == [(frozenset({"B"}), 1.0), (frozenset({"C"}), 1.0)]

    def test_adjacency_empty_remainder(self):
        d = decompose_graph(P({("A", "B"): 1.0, ("B",): 2.0}))
        assert d.adjacency("B") == [(frozenset(), 2.0), (frozenset({"A"}), 1.0)]

    def test_adjacency_merges_shared_remainders(self):
        # two edges through A with the same remainder after removing A
        # cannot occur for plain monomial keys, but merging is the contract
        d = decompose_graph(P({("A", "B"): 1.5}))
        assert len(d.adjacency("A")) <= len(d.edges_containing("A"))


class TestUnion:
    def test_reference_union(self):
        d = decompose_graph(FIG2A)
        union = merge_edge_sets(edge_set(d, "A"), edge_set(d, "B"))
        assert union == {frozenset({"A", "B", "C"}): 2.0, frozenset({"A", "D"}): 2.0}

    def test_identity(self):
        x = {frozenset({"A", "B"}): 1.0}
        assert merge_edge_sets(x, {}) == x

    def test_cancellation(self):
        x = {frozenset({"A", "B"}): 1.0}
        y = {frozenset({"A", "B"}): -1.0}
        assert merge_edge_sets(x, y) == {}

    def test_commutative_associative(self, rng):
        for _ in range(100):
            sets = []
            for _ in range(3):
                d = decompose_graph(rand_poly(rng, n_terms=4))
                sets.append(edge_set(d))
            x, y, z = sets
            xy = merge_edge_sets(x, y)
            yx = merge_edge_sets(y, x)
            assert set(xy) == set(yx)
            for k in xy:
                assert abs(xy[k] - yx[k]) < 1e-12
            lhs = merge_edge_sets(xy, z)
            rhs = merge_edge_sets(x, merge_edge_sets(y, z))
            for k in set(lhs) | set(rhs):
                assert abs(lhs.get(k, 0.0) - rhs.get(k, 0.0)) < 1e-12
