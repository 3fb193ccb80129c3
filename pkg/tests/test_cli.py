import pytest

from psmaca import dataio
from psmaca.cli import run_cli


@pytest.fixture
def toy_files(tmp_path):
    dataset = dataio.make_impulse_dataset(6, 9, seed=0)
    data = tmp_path / "train.txt"
    data.write_text(dataio.dataset_to_paired_text(dataset))
    target = dataset.records[2]
    fasta = tmp_path / "target.fasta"
    fasta.write_text(f">{target.id}\n{target.sequence}\n")
    return dataset, data, fasta


def train(tmp_path, data, capsys=None, extra=()):
    model = tmp_path / "model.json"
    code = run_cli(["train", "--data", str(data), "--window", "3",
                    "--out", str(model), "--seed", "11",
                    "--population", "15", "--generations", "15", *extra])
    assert code == 0
    if capsys is not None:
        capsys.readouterr()  # drop train's status line
    return model


class TestSimulate:
    def test_rule_30_triangle(self, capsys):
        assert run_cli(["simulate", "--rule", "30", "--width", "5",
                        "--steps", "2"]) == 0
        assert capsys.readouterr().out == "00100\n01110\n11001\n"

    def test_bad_rule_is_data_error(self, capsys):
        assert run_cli(["simulate", "--rule", "300", "--width", "5",
                        "--steps", "1"]) == 2

    def test_missing_flag_is_usage_error(self, capsys):
        assert run_cli(["simulate", "--rule", "30"]) == 1

    def test_unknown_command_is_usage_error(self):
        assert run_cli(["frobnicate"]) == 1


class TestBasins:
    def test_identity_rule(self, capsys):
        assert run_cli(["basins", "--rule", "204", "--width", "2"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert len(out) == 4
        assert all("basin size 1" in line for line in out)

    def test_rule_zero(self, capsys):
        assert run_cli(["basins", "--rule", "0", "--width", "4"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out == ["cycle [0000] basin size 16"]


class TestTrain:
    def test_writes_model(self, tmp_path, toy_files, capsys):
        _, data, _ = toy_files
        model = train(tmp_path, data, capsys)
        loaded = dataio.load_model(model)
        assert loaded.window == 3
        assert loaded.training_fingerprint == dataio.fingerprint(data.read_text())

    def test_parse_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a paired file\n")
        out = tmp_path / "m.json"
        assert run_cli(["train", "--data", str(bad), "--out", str(out)]) == 2

    def test_determinism_byte_identical(self, tmp_path, toy_files, capsys):
        _, data, _ = toy_files
        dirs = tmp_path / "a", tmp_path / "b"
        for d in dirs:
            d.mkdir()
        m1, m2 = (train(d, data) for d in dirs)
        assert m1.read_bytes() == m2.read_bytes()


class TestPredict:
    def test_tree_output_round_trips(self, tmp_path, toy_files, capsys):
        dataset, data, fasta = toy_files
        model = train(tmp_path, data, capsys)
        assert run_cli(["predict", "--model", str(model),
                        "--fasta", str(fasta)]) == 0
        out = capsys.readouterr().out
        [record] = dataio.parse_paired(out)
        assert record.id == dataset.records[2].id
        assert record.sequence == dataset.records[2].sequence
        assert len(record.structure) == len(record.sequence)
        assert "# method: tree" in out

    def test_pipeline_self_recall(self, tmp_path, toy_files, capsys):
        dataset, data, fasta = toy_files
        model = train(tmp_path, data, capsys)
        assert run_cli(["predict", "--model", str(model), "--fasta", str(fasta),
                        "--pipeline", "--train-data", str(data)]) == 0
        out = capsys.readouterr().out
        [record] = dataio.parse_paired(out)
        assert record.structure == dataset.records[2].structure
        assert "method: pipeline base=" in out

    def test_pipeline_requires_train_data(self, tmp_path, toy_files, capsys):
        _, data, fasta = toy_files
        model = train(tmp_path, data, capsys)
        assert run_cli(["predict", "--model", str(model), "--fasta", str(fasta),
                        "--pipeline"]) == 1

    def test_fingerprint_mismatch_rejected(self, tmp_path, toy_files, capsys):
        dataset, data, fasta = toy_files
        model = train(tmp_path, data, capsys)
        other = tmp_path / "other.txt"
        other.write_text(dataio.dataset_to_paired_text(
            dataio.make_impulse_dataset(6, 9, seed=5)))
        assert run_cli(["predict", "--model", str(model), "--fasta", str(fasta),
                        "--pipeline", "--train-data", str(other)]) == 2
        assert run_cli(["predict", "--model", str(model), "--fasta", str(fasta),
                        "--pipeline", "--train-data", str(other),
                        "--no-verify"]) == 0

    def test_missing_model_file(self, tmp_path, toy_files, capsys):
        _, _, fasta = toy_files
        assert run_cli(["predict", "--model", str(tmp_path / "nope.json"),
                        "--fasta", str(fasta)]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert run_cli(["predict", "--model", str(bad),
                        "--fasta", str(fasta)]) == 2


class TestEvaluate:
    def test_pipeline_self_recall_is_perfect(self, tmp_path, toy_files, capsys):
        dataset, data, _ = toy_files
        model = train(tmp_path, data, capsys)
        report = tmp_path / "report.tsv"
        json_out = tmp_path / "report.json"
        cmp_out = tmp_path / "cmp.tsv"
        assert run_cli(["evaluate", "--model", str(model), "--data", str(data),
                        "--report", str(report), "--json", str(json_out),
                        "--comparison", str(cmp_out), "--pipeline"]) == 0
        lines = report.read_text().strip().splitlines()
        assert lines[0] == "id\tq3\tqH\tqE\tqC"
        assert lines[-1].split("\t")[:2] == ["ALL", "100.00"]
        assert "PSMACA\t100.00" in cmp_out.read_text()
        assert '"q3": 100.0' in json_out.read_text()

    def test_tree_evaluation_runs(self, tmp_path, toy_files, capsys):
        _, data, _ = toy_files
        model = train(tmp_path, data, capsys)
        report = tmp_path / "report.tsv"
        assert run_cli(["evaluate", "--model", str(model), "--data", str(data),
                        "--report", str(report)]) == 0
        rows = report.read_text().strip().splitlines()
        assert len(rows) == 8  # header + 6 records + ALL
