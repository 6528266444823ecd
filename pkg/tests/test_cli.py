import json
import subprocess
import sys

import numpy as np
import pytest

from opmean.cli import DEFAULT_SEED, main


def _matrix(path, m):
    path.write_text(json.dumps({"re": np.real(m).tolist(), "im": np.imag(m).tolist()}))
    return str(path)


@pytest.fixture
def pair(tmp_path):
    a = _matrix(tmp_path / "a.json", np.diag([1.0, 4.0]))
    b = _matrix(tmp_path / "b.json", np.diag([9.0, 1.0]))
    return a, b


class TestMean:
    def test_geometric(self, pair, tmp_path, capsys):
        out = tmp_path / "out.json"
        assert main(["mean", "--mean", "geometric:0.5", "--a", pair[0], "--b", pair[1], "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert np.allclose(d["re"], [[3, 0], [0, 2]], atol=1e-14)

    def test_stdout(self, pair, capsys):
        assert main(["mean", "--mean", "harmonic:0.5", "--a", pair[0], "--b", pair[1]]) == 0
        d = json.loads(capsys.readouterr().out)
        assert np.allclose(d["re"], [[1.8, 0], [0, 1.6]], atol=1e-14)

    def test_bad_spec(self, pair, capsys):
        assert main(["mean", "--mean", "geometric:2", "--a", pair[0], "--b", pair[1]]) == 2
        assert "position" in capsys.readouterr().err

    def test_missing_file(self, pair, tmp_path):
        assert main(["mean", "--mean", "geometric:0.5", "--a", str(tmp_path / "nope.json"), "--b", pair[1]]) == 2

    def test_not_hermitian(self, pair, tmp_path):
        bad = _matrix(tmp_path / "bad.json", np.array([[1.0, 2.0], [0.0, 1.0]]))
        assert main(["mean", "--mean", "geometric:0.5", "--a", bad, "--b", pair[1]]) == 2

    def test_dimension_mismatch(self, pair, tmp_path):
        c = _matrix(tmp_path / "c.json", np.eye(3))
        assert main(["mean", "--mean", "geometric:0.5", "--a", pair[0], "--b", c]) == 2

    def test_not_positive_definite(self, pair, tmp_path, capsys):
        z = _matrix(tmp_path / "z.json", np.diag([1.0, -1.0]))
        assert main(["mean", "--mean", "geometric:0.5", "--a", z, "--b", pair[1]]) == 3
        assert "precondition" in capsys.readouterr().err


class TestVerify:
    def test_pass(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        code = main(["verify", "--suite", "additive,scalar", "--trials", "3", "--dims", "1..3", "--out", str(out)])
        assert code == 0
        rows = [json.loads(x) for x in out.read_text().splitlines()]
        assert rows and all(r["seed"] == DEFAULT_SEED for r in rows)
        assert "min_slack" in capsys.readouterr().err

    def test_csv(self, tmp_path):
        out = tmp_path / "r.csv"
        assert main(["verify", "--suite", "sandwich", "--trials", "2", "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().startswith("check_id,trials,min_slack,failures\n")

    def test_zero_tolerance_reports_failure(self, tmp_path):
        code = main(["verify", "--suite", "identities", "--trials", "3", "--dims", "3..4",
                     "--tol", "identity=0", "--out", str(tmp_path / "r")])
        assert code == 1

    def test_env_seed_overrides_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OPMEAN_SEED", "99")
        out = tmp_path / "r"
        main(["verify", "--suite", "scalar", "--trials", "1", "--out", str(out)])
        assert json.loads(out.read_text().splitlines()[0])["seed"] == 99
        main(["verify", "--suite", "scalar", "--trials", "1", "--seed", "5", "--out", str(out)])
        assert json.loads(out.read_text().splitlines()[0])["seed"] == 5

    def test_bad_env_seed(self, tmp_path, monkeypatch):
        monkeypatch.setenv("OPMEAN_SEED", "abc")
        assert main(["verify", "--suite", "scalar", "--trials", "1", "--out", str(tmp_path / "r")]) == 2

    def test_linear_mean_in_equality_suite(self, tmp_path):
        out = tmp_path / "r"
        code = main(["verify", "--suite", "equality", "--mean", "arithmetic:0.5", "--trials", "2", "--out", str(out)])
        assert code == 3

    def test_bad_mean_spec(self, tmp_path):
        assert main(["verify", "--mean", "nope:1", "--out", str(tmp_path / "r")]) == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--suite", "bogus"],
            ["verify", "--dims", "3..1"],
            ["verify", "--tol", "identity"],
            ["verify", "--tol", "unknown=1"],
            ["verify", "--trials", "0"],
            ["verify", "--seed", "-1"],
        ],
    )
    def test_argparse_errors(self, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2

    def test_byte_identical_outputs(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        args = ["verify", "--suite", "ratio,equality", "--trials", "4", "--seed", "3"]
        main(args + ["--out", str(a)])
        main(args + ["--workers", "2", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestCounterexample:
    def test_report(self, tmp_path):
        out = tmp_path / "c.json"
        assert main(["counterexample", "--out", str(out)]) == 0
        d = json.loads(out.read_text())
        assert d["matches_reference"] and d["all_indefinite"] and d["eigen_hold"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "opmean.cli", "counterexample"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["eigen_hold"]
