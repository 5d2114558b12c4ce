import json

import numpy as np
import pytest

from mcar.cli import main
from mcar.io import load_truth


def run_cli(*argv):
    return main(list(argv))


@pytest.fixture()
def synth_dir(tmp_path):
    out = tmp_path / "data"
    code = run_cli(
        "synth", "--classes", "3", "--vertices", "2", "--per-class", "8",
        "--dim", "15", "--fraction", "0.9", "--extra", "1", "--epsilon", "0.5",
        "--seed", "3", "--out", str(out),
    )
    assert code == 0
    return out


class TestSynthCommand:
    def test_writes_dataset_files(self, synth_dir):
        for name in ("features.csv", "candidates.txt", "truth.txt"):
            assert (synth_dir / name).exists()


class TestSolveCommand:
    def test_solve_and_eval_round_trip(self, synth_dir, tmp_path, capsys):
        out = tmp_path / "run"
        code = run_cli(
            "solve",
            "--features", str(synth_dir / "features.csv"),
            "--candidates", str(synth_dir / "candidates.txt"),
            "--truth", str(synth_dir / "truth.txt"),
            "--method", "mcar",
            "--out", str(out),
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["aggregate"]["failures"] == 0
        assert report["aggregate"]["mean_error"] == 0.0

        code = run_cli(
            "eval",
            "--pred", str(out / "predictions.csv"),
            "--truth", str(synth_dir / "truth.txt"),
        )
        assert code == 0
        assert "error rate: 0.0000" in capsys.readouterr().out

    def test_predictions_round_trip_as_truth(self, synth_dir, tmp_path):
        out = tmp_path / "run"
        run_cli(
            "solve",
            "--features", str(synth_dir / "features.csv"),
            "--candidates", str(synth_dir / "candidates.txt"),
            "--method", "wmcar-ice",
            "--out", str(out),
        )
        labels = load_truth(out / "predictions.csv")
        truth = load_truth(synth_dir / "truth.txt")
        assert labels.shape == truth.shape

    def test_group_method_via_files(self, synth_dir, tmp_path):
        n = len(load_truth(synth_dir / "truth.txt"))
        groups_path = tmp_path / "groups.txt"
        groups_path.write_text("\n".join(str(j + 1) for j in range(n)) + "\n")
        code = run_cli(
            "solve",
            "--features", str(synth_dir / "features.csv"),
            "--candidates", str(synth_dir / "candidates.txt"),
            "--groups", str(groups_path),
            "--method", "group-mcar",
        )
        assert code == 0


class TestSweepCommand:
    def test_curve_rows(self, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = run_cli(
            "sweep", "--param", "fraction", "--values", "0,0.5,1.0",
            "--classes", "3", "--vertices", "2", "--per-class", "6",
            "--dim", "12", "--seeds", "0,1", "--method", "mcar",
            "--out", str(out),
        )
        assert code == 0
        rows = (out / "curve.csv").read_text().strip().splitlines()
        assert len(rows) == 4
        report = json.loads((out / "report.json").read_text())
        assert len(report["sweep"]["points"]) == 3


class TestExitCodes:
    def test_usage_error_is_one(self):
        assert run_cli("solve", "--method", "nonsense") == 1

    def test_missing_subcommand_is_one(self):
        assert run_cli() == 1

    def test_parse_error_is_one(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1,x\n")
        cands = tmp_path / "c.txt"
        cands.write_text("1\n")
        assert run_cli(
            "solve", "--features", str(bad), "--candidates", str(cands)
        ) == 1

    def test_numeric_exception_is_two(self, synth_dir, monkeypatch):
        import mcar.cli as cli

        def boom(*a, **k):
            raise np.linalg.LinAlgError("SVD did not converge")

        monkeypatch.setattr(cli, "run_experiment", boom)
        code = run_cli(
            "solve",
            "--features", str(synth_dir / "features.csv"),
            "--candidates", str(synth_dir / "candidates.txt"),
        )
        assert code == 2

    def test_all_seeds_failing_is_two(self, synth_dir, monkeypatch):
        import mcar.experiments as exp
        from mcar import SolverDivergenceError

        def boom(*a, **k):
            raise SolverDivergenceError("iterate turned non-finite", iteration=3)

        monkeypatch.setattr(exp, "mcar_solve", boom)
        code = run_cli(
            "solve",
            "--features", str(synth_dir / "features.csv"),
            "--candidates", str(synth_dir / "candidates.txt"),
            "--method", "mcar",
        )
        assert code == 2
