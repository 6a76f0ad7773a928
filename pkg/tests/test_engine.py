"""Symbolic rewrite engine: per-op golden values and algebraic properties."""

import math

import numpy as np
import pytest

from hyperforge import engine
from hyperforge.engine import (
    EngineState,
    apply_circuit,
    apply_cphase,
    apply_op,
    apply_rotation,
    apply_shear_p,
    apply_shear_q,
    apply_squeeze,
    apply_x,
    apply_z,
    commute_through,
    measure_p,
    measure_q,
    new_state,
    replay_history,
)
from hyperforge.errors import (
    CircuitReplayError,
    FourierUnsupportedError,
    StateTerminatedError,
    UnknownModeError,
    UnsupportedCommutationError,
    UnsupportedDegreeError,
)
from hyperforge.ops import cphase, parse_op, shear_p, squeeze, xdisp, zdisp
from hyperforge.phasepoly import Monomial, PhasePolynomial

from conftest import rand_poly

P = PhasePolynomial.build


def fig2a() -> EngineState:
    return new_state("ABCD", P({("A", "B", "C"): 1.0, ("A", "D"): 2.0}))


class TestDisplacement:
    def test_momentum_displacement_adds_vertex_edge(self):
        st = apply_z(fig2a(), "B", -2.0)
        assert st.phase.allclose(
            P({("A", "B", "C"): 1.0, ("A", "D"): 2.0, ("B",): -2.0}), 1e-12)

    def test_zero_is_identity(self):
        st = fig2a()
        assert apply_z(st, "A", 0.0).phase.allclose(st.phase, 0.0)

    def test_additive(self):
        st = apply_z(apply_z(fig2a(), "A", 1.0), "A", 1.0)
        assert st.phase.coefficient(Monomial({"A": 1})) == pytest.approx(2.0)

    def test_position_displacement_populates_adjacency(self):
        st = apply_x(fig2a(), "A", 1.0)
        assert st.phase.allclose(
            P({("A", "B", "C"): 1.0, ("A", "D"): 2.0,
               ("B", "C"): -1.0, ("D",): -2.0}), 1e-12)

    def test_inverse_pair(self):
        st = apply_x(apply_x(fig2a(), "A", 0.7), "A", -0.7)
        assert st.phase.allclose(fig2a().phase, 1e-12)

    def test_created_edges_have_lower_order(self, rng):
        for _ in range(100):
            f = rand_poly(rng, n_terms=4, max_order=3)
            st = new_state("ABCDE", f)
            k = max((m.degree for m in f.terms), default=0)
            out = apply_x(st, "A", float(rng.uniform(-2, 2)))
            created = set(out.phase.terms) - set(f.terms)
            assert all(m.degree <= max(k - 1, 0) for m in created)


class TestShearing:
    def test_position_shear_deposits_decoration(self):
        st = apply_shear_q(fig2a(), "B", 2.0)
        assert st.phase.allclose(
            P({("A", "B", "C"): 1.0, ("A", "D"): 2.0, ("B", "B"): 1.0}), 1e-12)

    def test_position_shear_zero_is_identity(self):
        st = fig2a()
        assert apply_shear_q(st, "B", 0.0).phase.allclose(st.phase, 0.0)

    def test_position_shear_cancels_existing_decoration(self):
        st = new_state("AD", P({("D", "D"): 2.0, ("A", "D"): 1.0}))
        out = apply_shear_q(st, "D", -4.0)
        assert out.phase.allclose(P({("A", "D"): 1.0}), 1e-12)

    def test_momentum_shear_squares_adjacency(self):
        st = apply_shear_p(fig2a(), "A", 1.0)
        assert st.phase.allclose(
            P({("A", "B", "C"): 1.0, ("A", "D"): 2.0,
               ("B", "B", "C", "C"): 0.5, ("D", "D"): 2.0,
               ("B", "C", "D"): 2.0}), 1e-12)

    def test_momentum_shear_order_raise(self):
        st = new_state("ABCDE", P({("A", "B", "C"): 1.0, ("A", "D", "E"): 1.0}))
        out = apply_shear_p(st, "A", 1.0)
        assert out.phase.allclose(
            P({("A", "B", "C"): 1.0, ("A", "D", "E"): 1.0,
               ("B", "B", "C", "C"): 0.5, ("D", "D", "E", "E"): 0.5,
               ("B", "C", "D", "E"): 1.0}), 1e-12)

    def test_momentum_shear_rejects_decorated_mode(self):
        st = new_state("A", P({("A", "A"): 1.0}))
        with pytest.raises(UnsupportedDegreeError):
            apply_shear_p(st, "A", 1.0)

    def test_momentum_shear_order_arithmetic(self, rng):
        # one order-k and one order-l edge sharing exactly the acted mode
        st = new_state("ABCDE", P({("A", "B", "C"): 1.5, ("A", "D", "E"): -0.5}))
        out = apply_shear_p(st, "A", 1.0)
        created = [m for m in out.phase.terms if m.is_multilinear
                   and m not in st.phase.terms]
        assert [m.degree for m in created] == [3 + 3 - 2]


class TestSqueezeRotate:
    def test_squeeze_rescales_adjacent_weights(self):
        st = apply_squeeze(fig2a(), "A", 1.0)
        assert st.phase.allclose(
            P({("A", "B", "C"): math.exp(-1.0), ("A", "D"): 2.0 * math.exp(-1.0)}),
            1e-12)

    def test_squeeze_zero_identity(self):
        st = fig2a()
        assert apply_squeeze(st, "A", 0.0).phase.allclose(st.phase, 0.0)

    def test_squeeze_scales_decoration_twice(self):
        st = new_state("A", P({("A", "A"): 1.0}))
        out = apply_squeeze(st, "A", 0.3)
        assert out.phase.allclose(P({("A", "A"): math.exp(-0.6)}), 1e-12)

    def test_half_turn_negates_odd_degrees(self):
        st = apply_rotation(fig2a(), "D", math.pi)
        assert st.phase.allclose(P({("A", "B", "C"): 1.0, ("A", "D"): -2.0}), 1e-12)

    def test_full_turn_identity(self):
        st = apply_rotation(fig2a(), "A", 2.0 * math.pi)
        assert st.phase.allclose(fig2a().phase, 1e-12)

    def test_quarter_turn_rejected(self):
        with pytest.raises(FourierUnsupportedError):
            apply_rotation(fig2a(), "A", math.pi / 2.0)
        with pytest.raises(FourierUnsupportedError):
            apply_rotation(fig2a(), "A", -1.5 * math.pi)

    def test_general_angle_on_connected_mode_rejected(self):
        with pytest.raises(UnsupportedDegreeError):
            apply_rotation(fig2a(), "A", 1.0)

    def test_general_angle_on_disconnected_mode(self):
        for s in (0.7, 2.0, -0.4):  # includes a negative-cosine angle
            st = apply_rotation(new_state("ABCDE", fig2a().phase), "E", s)
            expected = fig2a().phase.add_term(Monomial({"E": 2}), 0.5 * math.tan(s))
            assert st.phase.allclose(expected, 1e-12)

    def test_rotation_parity(self, rng):
        for _ in range(50):
            f = rand_poly(rng, n_terms=5, max_exp=2)
            st = new_state("ABCDE", f)
            once = apply_rotation(st, "B", math.pi)
            twice = apply_rotation(once, "B", math.pi)
            assert twice.phase.allclose(f, 1e-12)
            direct = f.substitute_affine("B", -1.0, 0.0)
            assert once.phase.allclose(direct, 1e-12)


class TestCPhase:
    def test_weight_adjustment(self):
        st = apply_cphase(fig2a(), ("A", "D"), 0.5)
        assert st.phase.allclose(P({("A", "B", "C"): 1.0, ("A", "D"): 2.5}), 1e-12)

    def test_edge_removal(self):
        st = apply_cphase(fig2a(), ("A", "D"), -2.0)
        assert st.phase.allclose(P({("A", "B", "C"): 1.0}), 1e-12)

    def test_triple_on_empty_state(self):
        st = apply_cphase(new_state("ABC"), ("A", "B", "C"), 1.0)
        assert st.phase.allclose(P({("A", "B", "C"): 1.0}), 1e-12)


class TestMeasurement:
    def test_position_measurement_rescales_adjacency(self):
        st = measure_q(fig2a(), "A", 3.0)
        assert st.modes == ("B", "C", "D")
        assert st.phase.allclose(P({("B", "C"): 3.0, ("D",): 6.0}), 1e-12)
        assert st.measurements[-1].basis == "q"
        assert not st.terminal

    def test_zero_outcome_erases(self):
        st = measure_q(fig2a(), "A", 0.0)
        assert st.phase.is_zero()

    def test_decorated_outcome_constant(self):
        st = new_state("AB", P({("A", "B"): 1.0, ("B",): 2.0}))
        out = measure_q(st, "B", 1.0)
        assert out.phase.allclose(P({("A",): 1.0}, constant=2.0), 1e-12)

    def test_momentum_measurement_terminates(self):
        st = measure_p(fig2a(), "A", 0.0)
        assert st.terminal
        assert st.residual.linear.allclose(P({("B", "C"): 1.0, ("D",): 2.0}), 1e-12)
        assert st.residual.tail.is_zero()
        with pytest.raises(StateTerminatedError):
            apply_z(st, "B", 1.0)

    def test_momentum_measurement_single_mode(self):
        st = measure_p(new_state("A"), "A", 0.5)
        assert st.terminal and st.residual.linear.is_zero() and st.residual.tail.is_zero()

    def test_momentum_measurement_rejects_decoration(self):
        st = new_state("A", P({("A", "A"): 1.0}))
        with pytest.raises(UnsupportedDegreeError):
            measure_p(st, "A", 0.0)

    def test_measured_mode_becomes_unknown(self):
        st = measure_q(fig2a(), "A", 1.0)
        with pytest.raises(UnknownModeError):
            apply_z(st, "A", 1.0)

    def test_commutes_with_disjoint_ops(self, rng):
        for _ in range(50):
            f = rand_poly(rng, n_terms=4)
            st = new_state("ABCDE", f)
            m = float(rng.uniform(-2, 2))
            s = float(rng.uniform(-2, 2))
            one = apply_z(measure_q(st, "A", m), "B", s)
            two = measure_q(apply_z(st, "B", s), "A", m)
            assert one.phase.allclose(two.phase, 1e-12)


class TestCommuteThrough:
    def test_displacement_with_absent_mode(self):
        f = P({("B", "C"): -1.0})
        assert commute_through(xdisp("A", 1.0), f).allclose(f, 0.0)

    def test_squeeze_rescales_variable(self):
        f = P({("A", "B", "C"): 1.7})
        out = commute_through(squeeze("A", 0.4), f)
        assert out.allclose(P({("A", "B", "C"): 1.7 * math.exp(-0.4)}), 1e-12)

    def test_displacement_expands_decoration(self):
        c, s = 0.8, 0.3
        out = commute_through(xdisp("A", s), P({("A", "A"): c}))
        assert out.allclose(
            P({("A", "A"): c, ("A",): -2 * c * s}, constant=c * s * s), 1e-12)

    def test_position_gates_commute(self):
        f = P({("A", "B"): 1.0, ("A", "A"): 0.5})
        for op in (zdisp("A", 2.0), cphase(("A", "B"), 1.0), parse_op("Dq(A,3)")):
            assert commute_through(op, f) is f

    def test_momentum_shear_rejected(self):
        with pytest.raises(UnsupportedCommutationError):
            commute_through(shear_p("A", 1.0), P({("A",): 1.0}))

    def test_general_rotation_rejected(self):
        with pytest.raises(UnsupportedCommutationError):
            commute_through(parse_op("R(A,1.0)"), P({("A",): 1.0}))

    def test_half_turn_rotation(self):
        out = commute_through(parse_op(f"R(A,{math.pi})"), P({("A", "B"): 1.0}))
        assert out.allclose(P({("A", "B"): -1.0}), 1e-12)


class TestDispatchAndHistory:
    def test_circuit_replay_matches_single_ops(self):
        ops = [parse_op("Dp(A,1)"), parse_op("CZ(A,D,-2)"),
               parse_op("Dp(A,-1)"), parse_op("Dq(D,-4)")]
        st = apply_circuit(fig2a(), ops)
        assert st.phase.allclose(P({("A", "B", "C"): 1.0, ("B", "C", "D"): 2.0}), 1e-12)
        assert len(st.history) == 4

    def test_empty_circuit_identity(self):
        st = fig2a()
        assert apply_circuit(st, []) is st

    def test_failing_step_reports_index(self):
        ops = [parse_op("Z(A,1)"), parse_op("Dq(A,1)"), parse_op("Dp(A,1)")]
        with pytest.raises(CircuitReplayError) as err:
            apply_circuit(fig2a(), ops)
        assert err.value.step == 2
        assert err.value.cause.code == "UnsupportedDegree"

    def test_history_replay_reproduces_hash(self, rng):
        for _ in range(20):
            st = fig2a()
            for _ in range(5):
                mode = "ABCD"[rng.integers(4)]
                st = apply_z(st, mode, float(rng.uniform(-1, 1)))
                st = apply_cphase(st, ("B", "C"), float(rng.uniform(-1, 1)))
            again = replay_history(fig2a(), st.history)
            assert again.digest() == st.digest()
            assert again.history[-1].phase_hash == st.history[-1].phase_hash

    def test_phase_only_mentions_active_modes(self):
        st = measure_q(fig2a(), "A", 2.0)
        assert st.phase.modes <= set(st.modes)

    def test_unknown_mode_rejected_everywhere(self):
        st = fig2a()
        for fn in (apply_z, apply_x, apply_shear_q, apply_shear_p,
                   apply_squeeze, apply_rotation, measure_q, measure_p):
            with pytest.raises(UnknownModeError):
                fn(st, "Z9", 1.0)

    def test_disjoint_support_commutation(self, rng):
        mk = {
            0: lambda m, v: ("Z", m, v),
            1: lambda m, v: ("Dq", m, v),
            2: lambda m, v: ("X", m, v),
            3: lambda m, v: ("S", m, v),
        }
        for _ in range(100):
            f = rand_poly(rng, n_terms=4, modes=("A", "B", "C", "D"))
            st = new_state("ABCD", f)
            kind_a = mk[rng.integers(4)]("A", float(rng.uniform(-1, 1)))
            kind_b = mk[rng.integers(4)]("B", float(rng.uniform(-1, 1)))
            op_a = parse_op(f"{kind_a[0]}({kind_a[1]},{kind_a[2]})")
            op_b = parse_op(f"{kind_b[0]}({kind_b[1]},{kind_b[2]})")
            one = apply_op(apply_op(st, op_a), op_b)
            two = apply_op(apply_op(st, op_b), op_a)
            assert one.phase.allclose(two.phase, 1e-10)
