import json

from rotbench import qasm
from rotbench.cli import main
from rotbench.circuit import gate_census


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestPlan:
    def test_epsilon(self, capsys):
        code, out = run_cli(capsys, "plan", "--theta", "0.785398",
                            "--epsilon", "0.1")
        assert code == 0
        data = json.loads(out)
        assert data["n"] == 5 and data["k"] == 23

    def test_forced_no_reduce(self, capsys):
        code, out = run_cli(capsys, "plan", "--n", "3", "--no-reduce")
        data = json.loads(out)
        assert data["n"] == 3 and data["k"] == 6 and not data["reduced"]


class TestBuild:
    def test_writes_qasm(self, capsys, tmp_path):
        path = tmp_path / "circuit.qasm"
        code, _ = run_cli(capsys, "build", "--n", "4", "--style",
                          "simplified", "--out", str(path))
        assert code == 0
        circ = qasm.parse(path.read_text())
        assert gate_census(circ)["ccx"] == 6

    def test_stdout_default(self, capsys):
        code, out = run_cli(capsys, "build", "--n", "2")
        assert code == 0
        assert out.startswith("OPENQASM 3.0;")

    def test_pipeline_flag(self, capsys):
        code, out = run_cli(capsys, "build", "--n", "4", "--style", "naive",
                            "--simplify-pipeline")
        assert code == 0
        circ = qasm.parse(out)
        assert gate_census(circ)["ccx"] == 6


class TestSimulate:
    def test_counts_json(self, capsys, tmp_path):
        cfg = tmp_path / "sim.json"
        cfg.write_text(json.dumps({"n": 2, "delta": 0.0, "shots": 5000,
                                   "seed": 3, "input": "0", "basis": "z"}))
        code, out = run_cli(capsys, "simulate", "--config", str(cfg))
        assert code == 0
        data = json.loads(out)
        assert sum(data["counts"].values()) == 5000
        assert data["seed"] == 3 and data["k"] == 3


class TestExperimentFitCompare:
    def test_round_trip(self, capsys, tmp_path):
        cfg = tmp_path / "exp.json"
        cfg.write_text(json.dumps({
            "theta": 0.7853981633974483, "n_list": [4, 5, 6],
            "delta_list": [0.05], "shots": 2000, "seed": 77,
            "convention": "mixed_state", "style": "simplified"}))
        report = tmp_path / "report.csv"
        code, _ = run_cli(capsys, "experiment", "--config", str(cfg),
                          "--out", str(report))
        assert code == 0
        code, out = run_cli(capsys, "fit", "--report", str(report),
                            "--plot-data")
        assert code == 0
        data = json.loads(out)
        assert data["fits"][0]["delta"] == 0.05
        assert 0 < data["fits"][0]["c_delta"] < 1
        assert "plot_data" in data

        code, out = run_cli(capsys, "compare", "--report", str(report),
                            "--reference", "table3")
        assert code == 0
        data = json.loads(out)
        assert data["passed"] is None and data["gated"] is False

    def test_compare_table1(self, capsys):
        code, out = run_cli(capsys, "compare", "--reference", "table1")
        assert code == 0
        assert json.loads(out)["passed"] is True


class TestBench:
    def test_table(self, capsys):
        code, out = run_cli(capsys, "bench", "--n-max", "8")
        assert code == 0
        lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert lines[0].startswith("n,k,qubits,toffolis")
        rows = [ln.split(",") for ln in lines[1:]]
        assert rows[-1][0] == "8"
        assert (rows[-1][2], rows[-1][3]) == ("15", "14")
        n3 = [r for r in rows if r[0] == "3"][0]
        assert (n3[2], n3[3]) == ("5", "4")
        assert n3[-1] == "2"  # reduces to the n=2 circuit
