import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from mscompress.cli import main

DATA = Path(__file__).parent / "data"
CLUSTER = str(DATA / "lonesome_george.json")
STOPWORDS = str(DATA / "stopwords_pt.txt")


@pytest.fixture
def runner():
    return CliRunner()


class TestStats:
    def test_table_output(self, runner):
        result = runner.invoke(main, ["stats", CLUSTER])
        assert result.exit_code == 0
        assert "lonesome-george" in result.output
        assert "# corpus" in result.output


class TestGraph:
    def test_json_dump(self, runner):
        result = runner.invoke(main, ["graph", CLUSTER,
                                      "--stopwords", STOPWORDS])
        assert result.exit_code == 0
        obj = json.loads(result.output)
        assert any(v["word"] == "tartaruga" for v in obj["vertices"])

    def test_dot_dump(self, runner):
        result = runner.invoke(main, ["graph", CLUSTER, "--dot",
                                      "--stopwords", STOPWORDS])
        assert result.exit_code == 0
        assert result.output.startswith("digraph")

    def test_unknown_cluster_id(self, runner):
        result = runner.invoke(main, ["graph", CLUSTER, "--cluster-id", "nope"])
        assert result.exit_code != 0


class TestKeywords:
    def test_json_lines(self, runner):
        result = runner.invoke(main, ["keywords", CLUSTER, "--stopwords",
                                      STOPWORDS, "--method", "lda",
                                      "--count", "5"])
        assert result.exit_code == 0
        obj = json.loads(result.output.strip())
        assert obj["cluster"] == "lonesome-george"
        assert len(obj["words"]) == 5
        assert "reference_coverage" in obj


class TestCompress:
    def test_end_to_end(self, runner, tmp_path):
        out = str(tmp_path / "out")
        result = runner.invoke(main, [
            "compress", CLUSTER, "--stopwords", STOPWORDS, "--out", out,
            "--cr-targets", "inf", "--nbest", "20",
        ])
        assert result.exit_code == 0, result.output
        rec = json.loads((tmp_path / "out" / "compressions" /
                          "lonesome-george__inf.json").read_text())
        assert rec["word_count"] >= 8

    def test_config_file(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text(f"stopwords = {STOPWORDS}\nnbest = 10\n"
                        "cr_targets = inf\n", encoding="utf-8")
        out = str(tmp_path / "out")
        result = runner.invoke(main, ["compress", CLUSTER, "--config",
                                      str(conf), "--out", out])
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "out" / "run_summary.json")
                             .read_text())
        assert summary["settings"]["nbest"] == 10

    def test_baseline_subcommand(self, runner, tmp_path):
        out = str(tmp_path / "out")
        result = runner.invoke(main, ["baseline", CLUSTER, "--stopwords",
                                      STOPWORDS, "--out", out])
        assert result.exit_code == 0, result.output
        files = list((tmp_path / "out" / "compressions").glob("*baseline*"))
        assert len(files) == 2  # json + txt


class TestExportLp:
    def test_stdout(self, runner):
        result = runner.invoke(main, ["export-lp", CLUSTER, "--stopwords",
                                      STOPWORDS, "--p-min", "8"])
        assert result.exit_code == 0, result.output
        assert result.output.startswith("Minimize")
        assert "End" in result.output

    def test_to_file(self, runner, tmp_path):
        target = tmp_path / "model.lp"
        result = runner.invoke(main, ["export-lp", CLUSTER, "--stopwords",
                                      STOPWORDS, "--out", str(target)])
        assert result.exit_code == 0
        assert target.read_text(encoding="utf-8").startswith("Minimize")


class TestEvaluate:
    def test_full_loop(self, runner, tmp_path):
        out = str(tmp_path / "out")
        r1 = runner.invoke(main, ["compress", CLUSTER, "--stopwords",
                                  STOPWORDS, "--out", out,
                                  "--cr-targets", "inf", "--nbest", "10"])
        assert r1.exit_code == 0, r1.output
        r2 = runner.invoke(main, ["evaluate", "--outputs", out,
                                  "--corpus", CLUSTER,
                                  "--stopwords", STOPWORDS,
                                  "--out", str(tmp_path / "eval")])
        assert r2.exit_code == 0, r2.output
        assert r2.output.startswith("target\t")
        assert (tmp_path / "eval" / "report.tsv").exists()

    def test_missing_outputs_error(self, runner, tmp_path):
        out = tmp_path / "empty"
        (out / "compressions").mkdir(parents=True)
        result = runner.invoke(main, ["evaluate", "--outputs", str(out),
                                      "--corpus", CLUSTER])
        assert result.exit_code != 0
        assert "lonesome-george" in result.output


class TestTrainPoslm:
    def test_train_and_reuse(self, runner, tmp_path):
        corpus = tmp_path / "tags.txt"
        corpus.write_text("D N V\nD N V A\n" * 10, encoding="utf-8")
        model_path = tmp_path / "pos.lm"
        result = runner.invoke(main, ["train-poslm", str(corpus),
                                      "--order", "3",
                                      "--out", str(model_path)])
        assert result.exit_code == 0, result.output
        assert model_path.exists()
        out = str(tmp_path / "out")
        r2 = runner.invoke(main, ["compress", CLUSTER, "--stopwords",
                                  STOPWORDS, "--out", out,
                                  "--cr-targets", "inf", "--nbest", "10",
                                  "--poslm", str(model_path)])
        assert r2.exit_code == 0, r2.output
