"""Command-line interface flows."""

import json
import subprocess
import sys

import pytest

from hyperforge.cli import main
from hyperforge.fileio import CircuitFile, state_from_json

FIG3_OPS = ["Dp(A,1)", "CZ(A,D,-2)", "Dp(A,-1)", "Dq(D,-4)"]


def make_fig2a(tmp_path):
    state = tmp_path / "state.json"
    assert main(["new", "--modes", "A,B,C,D", "-o", str(state)]) == 0
    current = str(state)
    for op in ["CZ(A,B,C,1)", "CZ(A,D,2)"]:
        out = tmp_path / f"after_{op[:2]}{len(op)}.json"
        assert main(["apply", current, "--op", op, "-o", str(out)]) == 0
        current = str(out)
    return current


class TestStateFlow:
    def test_new_apply_prints_decomposition(self, tmp_path, capsys):
        path = make_fig2a(tmp_path)
        out = tmp_path / "z.json"
        assert main(["apply", path, "--op", "Z(B,-2)", "-o", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "edge {B}  weight -2" in printed
        st = state_from_json(json.loads(out.read_text()))
        assert len(st.history) == 3

    def test_apply_precondition_failure(self, tmp_path, capsys):
        path = make_fig2a(tmp_path)
        bad = tmp_path / "bad.json"
        code = main(["apply", path, "--op", "R(A,0.5)", "-o", str(bad)])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "UnsupportedDegree"
        assert not bad.exists()

    def test_unknown_op_name(self, tmp_path, capsys):
        path = make_fig2a(tmp_path)
        code = main(["apply", path, "--op", "Hadamard(A,1)", "-o", str(tmp_path / "x.json")])
        assert code == 2
        assert json.loads(capsys.readouterr().err)["error"] == "UnknownOp"

    def test_missing_file(self, tmp_path, capsys):
        assert main(["export-dot", str(tmp_path / "nope.json")]) == 2
        assert "not found" in json.loads(capsys.readouterr().err)["message"]


class TestRecipeAndRun:
    def test_toffoli_recipe_roundtrip(self, tmp_path, capsys):
        circuit = tmp_path / "toffoli.json"
        assert main(["recipe", "toffoli", "-o", str(circuit)]) == 0
        data = CircuitFile.from_json(json.loads(circuit.read_text()))
        assert [str(op) for op in data.ops] == [
            "Dp(A,1)", "CZ(A,D,-2)", "Dp(A,-1)", "Dq(D,-4)"]
        final = tmp_path / "final.json"
        assert main(["run", str(circuit), "-o", str(final)]) == 0
        printed = capsys.readouterr().out
        assert "edge {A,B,C}  weight 1" in printed
        assert "edge {B,C,D}  weight 2" in printed
        assert "standard: yes" in printed

    def test_run_prefix_steps(self, tmp_path, capsys):
        circuit = tmp_path / "toffoli.json"
        main(["recipe", "toffoli", "-o", str(circuit)])
        assert main(["run", str(circuit), "--steps", "1"]) == 0
        printed = capsys.readouterr().out
        assert "decoration" in printed  # shear residue still present mid-recipe

    def test_run_empty_circuit(self, tmp_path, capsys):
        circuit = tmp_path / "empty.json"
        import hyperforge.fileio as fileio
        from hyperforge.phasepoly import PhasePolynomial

        circuit.write_text(fileio.CircuitFile(
            ("A", "B"), PhasePolynomial.zero(), ()).to_text())
        assert main(["run", str(circuit)]) == 0
        assert "order: 0" in capsys.readouterr().out

    def test_run_failure_reports_step(self, tmp_path, capsys):
        from hyperforge.ops import parse_op
        import hyperforge.fileio as fileio
        from hyperforge.phasepoly import PhasePolynomial

        circuit = tmp_path / "bad.json"
        ops = tuple(parse_op(o) for o in ["Dq(A,1)", "Dp(A,1)"])
        circuit.write_text(fileio.CircuitFile(("A",), PhasePolynomial.zero(), ops).to_text())
        assert main(["run", str(circuit)]) != 0
        err = json.loads(capsys.readouterr().err)
        assert err["step"] == 1 and err["error"] == "UnsupportedDegree"

    def test_multi_target_literal_leftover_report(self, tmp_path, capsys):
        circuit = tmp_path / "mt.json"
        assert main(["recipe", "multi-target", "--targets", "D1,D2",
                     "--paper-literal", "-o", str(circuit)]) == 0
        printed = capsys.readouterr().out
        assert "D1^1*D2^1  coeff 1" in printed
        meta = json.loads(circuit.read_text())["metadata"]
        assert meta["leftover_terms"]["terms"] == [
            {"monomial": {"D1": 1, "D2": 1}, "coeff": 1.0}]

    def test_order_raise_recipe(self, tmp_path, capsys):
        circuit = tmp_path / "or.json"
        assert main(["recipe", "order-raise", "-o", str(circuit)]) == 0
        assert main(["run", str(circuit)]) == 0
        assert "order: 4" in capsys.readouterr().out


class TestDotAndVerify:
    def test_export_dot(self, tmp_path):
        path = make_fig2a(tmp_path)
        dot = tmp_path / "g.dot"
        assert main(["export-dot", path, "-o", str(dot)]) == 0
        assert dot.read_text().startswith("graph state {")

    def test_verify_writes_report(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        assert main(["verify", "--r", "0.4", "--cutoff", "20",
                     "--json", str(report)]) == 0
        printed = capsys.readouterr().out
        assert "checks within budget" in printed
        data = json.loads(report.read_text())
        assert data["summary"]["total"] == len(data["entries"])
        exact = [e for e in data["entries"] if e["rule"] in ("Z", "Dq", "CZ")]
        assert all(e["pass"] for e in exact)


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        out = subprocess.run(
            [sys.executable, "-m", "hyperforge.cli", "new", "--modes", "A,B"],
            capture_output=True, text=True)
        assert out.returncode == 0
        assert json.loads(out.stdout)["modes"] == ["A", "B"]
