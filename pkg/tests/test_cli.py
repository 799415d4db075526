import csv
import json

from click.testing import CliRunner

from seqgraph.cli import main
from seqgraph.dataset import write_ucr_tsv
from seqgraph.synthetic import transient_families


def write_small_dataset(path, n_per_class=6, seed=3):
    ds = transient_families(n_per_class=n_per_class, seed=seed)
    write_ucr_tsv(ds, path)
    return ds


class TestRunCommand:
    def test_happy_path(self, tmp_path):
        data = tmp_path / "toy.tsv"
        write_small_dataset(data)
        out_dir = tmp_path / "out"
        result = CliRunner().invoke(
            main,
            [
                "run",
                "--dataset", str(data),
                "--k", "4",
                "--m-lengths", "6",
                "--seed", "0",
                "--out-dir", str(out_dir),
                "--export-consensus",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "selected length" in result.output
        assert "metrics vs labels" in result.output
        assert (out_dir / "labels.txt").exists()
        assert (out_dir / "report.json").exists()
        assert (out_dir / "consensus.csv").exists()

    def test_lengths_override(self, tmp_path):
        data = tmp_path / "toy.tsv"
        write_small_dataset(data)
        out_dir = tmp_path / "out"
        result = CliRunner().invoke(
            main,
            [
                "run",
                "--dataset", str(data),
                "--k", "4",
                "--lengths", "10,28,27,36",
                "--seed", "0",
                "--out-dir", str(out_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        report = json.loads((out_dir / "report.json").read_text())
        assert sorted(e["length"] for e in report["per_length"]) == [10, 27, 28, 36]

    def test_bad_dataset_nonzero_exit(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("1\t0.0\t0.1\n")
        result = CliRunner().invoke(
            main, ["run", "--dataset", str(bad), "--k", "2", "--out-dir", str(tmp_path)]
        )
        assert result.exit_code != 0
        assert "[dataset]" in result.output

    def test_malformed_lengths_rejected(self, tmp_path):
        data = tmp_path / "toy.tsv"
        write_small_dataset(data)
        result = CliRunner().invoke(
            main,
            ["run", "--dataset", str(data), "--k", "2", "--lengths", "10,abc"],
        )
        assert result.exit_code != 0


class TestBenchCommand:
    def test_two_datasets_two_seeds(self, tmp_path):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_small_dataset(a, seed=1)
        write_small_dataset(b, seed=2)
        out = tmp_path / "bench.csv"
        result = CliRunner().invoke(
            main,
            [
                "bench",
                "--dataset", f"{a}:4",
                "--dataset", f"{b}:4",
                "--seeds", "0,1",
                "--m-lengths", "5",
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert {r["dataset"] for r in rows} == {"a", "b"}
        assert {r["seed"] for r in rows} == {"0", "1"}

    def test_missing_k_spec(self, tmp_path):
        result = CliRunner().invoke(main, ["bench", "--dataset", "plain_path"])
        assert result.exit_code != 0


class TestGenerateCommand:
    def test_generate_then_run(self, tmp_path):
        out = tmp_path / "cbf.tsv"
        result = CliRunner().invoke(
            main, ["generate", "--name", "CBF", "--seed", "5", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        assert "CBF" in result.output
        text = out.read_text().splitlines()
        assert len(text) == 930
        assert len(text[0].split("\t")) == 129  # label + 128 values
