import math

import numpy as np
import pytest

from rotbench import planner, qasm, qmath, simnoise
from rotbench.builder import build
from rotbench.circuit import (Circuit, Gate, Measurement, Qubit,
                              gate_census, to_unitary)

THETA = math.pi / 4


class TestEmit:
    def test_empty_one_qubit(self):
        c = Circuit([Qubit("target", init="0")])
        want = ("OPENQASM 3.0;\n"
                "qubit[1] q;\n"
                "// roles 0:target\n"
                "// prep\n"
                "reset q[0];\n"
                "// body\n"
                "// basis\n"
                "// meas\n")
        assert qasm.emit(c) == want

    def test_h_then_measure(self):
        c = Circuit([Qubit("target", init="0")], [Gate("h", (0,))],
                    [Measurement(0, "z")])
        text = qasm.emit(c)
        assert "h q[0];" in text
        assert "c[0] = measure q[0];" in text

    def test_deterministic(self):
        c = build(planner.plan(THETA, n=5))
        assert qasm.emit(c) == qasm.emit(c)

    def test_n2_has_exactly_two_ccx_lines(self):
        text = qasm.emit(build(planner.plan(THETA, n=2)))
        assert sum(1 for ln in text.splitlines()
                   if ln.startswith("ccx")) == 2

    def test_inverted_controls_emitted_as_x_conjugation(self):
        c = Circuit([Qubit("target"), Qubit("outer", 0, "+"),
                     Qubit("outer", 1, "+")],
                    [Gate("ccx", (1, 2, 0), inv_mask=1)])
        lines = [ln for ln in qasm.emit(c).splitlines()]
        i = lines.index("ccx q[1], q[2], q[0];")
        assert lines[i - 1] == "x q[1];" and lines[i + 1] == "x q[1];"


class TestRoundTrip:
    @pytest.mark.parametrize("n", [2, 4, 5, 6])
    @pytest.mark.parametrize("style", ["naive", "simplified"])
    def test_census_and_unitary(self, n, style):
        c = build(planner.plan(THETA, n=n), style=style)
        c2 = qasm.parse(qasm.emit(c))
        assert gate_census(c2) == gate_census(c)
        u1, u2 = to_unitary(c), to_unitary(c2)
        assert np.max(np.abs(u1 - u2)) <= 1e-10

    @pytest.mark.parametrize("n", [7, 8])
    def test_census_and_channel_large(self, n):
        # above the dense-unitary cap: compare exact branch data instead
        c = build(planner.plan(THETA, n=n))
        c2 = qasm.parse(qasm.emit(c))
        assert gate_census(c2) == gate_census(c)
        a = simnoise.run_exact(c)
        b = simnoise.run_exact(c2)
        assert set(a.branches) == set(b.branches)
        for key in a.branches:
            assert a.branches[key].probability == pytest.approx(
                b.branches[key].probability, abs=1e-10)
            f = qmath.state_fidelity(a.branches[key].target_state,
                                     b.branches[key].target_state)
            assert f >= 1 - 1e-10

    def test_preparations_round_trip(self):
        c = build(planner.plan(THETA, n=6))  # has |1> carry preparations
        c2 = qasm.parse(qasm.emit(c))
        assert [q.init for q in c2.qubits] == [q.init for q in c.qubits]
        assert [m.basis for m in c2.measurements] == \
            [m.basis for m in c.measurements]

    def test_parse_rejects_garbage(self):
        with pytest.raises(qasm.QasmParseError):
            qasm.parse("OPENQASM 3.0;\nqubit[1] q;\n// roles 0:target\n"
                       "// body\nfoo q[0];\n")
        with pytest.raises(qasm.QasmParseError):
            qasm.parse("h q[0];\n")
