import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from litkg.cli import main
from litkg.embed.store import EmbeddingStore
from litkg.graph import build_graph, dump_graph
from litkg.ingest import write_predications, write_scores

from .conftest import make_pred

REPO = Path(__file__).parent.parent
DEMO = REPO / "data" / "demo"


@pytest.fixture()
def corpus(tmp_path):
    """A small self-contained corpus directory with a config file."""
    preds = []
    for i in range(12):
        preds.append(
            make_pred(
                f"C10000{i:02d}", "TREATS", "C0002395",
                subject_type="phsu", pmid=f"a{i}",
                date="2015-03-04" if i < 10 else "2021-05-06",
            )
        )
        preds.append(
            make_pred(
                f"C10000{i:02d}", "INTERACTS_WITH", f"C30000{i % 3:02d}",
                subject_type="phsu", object_type="gngm", pmid=f"b{i}",
                date="2016-07-08" if i < 10 else "2019-09-10",
            )
        )
    preds.append(make_pred("C9000001", "AFFECTS", "C0002395", subject_type="acty", pmid="n1"))
    write_predications(tmp_path / "predications.tsv", preds)
    write_scores(tmp_path / "scores.tsv", [(("C1000000", "TREATS", "C0002395", "a0"), 0.9)])
    (tmp_path / "drugs.txt").write_text(
        "\n".join(f"C10000{i:02d}" for i in range(12)) + "\n", encoding="utf-8"
    )
    config = {
        "paths": {
            "predications": "predications.tsv",
            "scores": "scores.tsv",
            "candidates": {"drug": "drugs.txt"},
            "output_dir": "out",
        },
        "filter": {"score_threshold": 0.5},
        "train": {"model": "transe-l2", "dim": 8, "epochs": 4, "batch_size": 8,
                  "negatives_per_positive": 4, "seed": 3},
        "split": {"train_cutoff": "2019-01-01", "test_cutoff": "2021-01-01"},
        "evaluate": {"mode": "filtered"},
        "predict": {"top_n": 5},
    }
    (tmp_path / "config.json").write_text(json.dumps(config), encoding="utf-8")
    return tmp_path


class TestExitCodes:
    def test_missing_config_exits_one_with_json_error(self, capsys):
        rc = main(["pipeline", "--config", "/nonexistent/config.json"])
        assert rc == 1
        err_lines = [l for l in capsys.readouterr().err.splitlines() if l.startswith("{")]
        payload = json.loads(err_lines[-1])
        assert "/nonexistent/config.json" in payload["error"]
        assert payload["command"] == "pipeline"

    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["train", "--graph", "g.tsv", "--bogus"])
        assert exc.value.code == 2

    def test_console_module_entrypoint(self):
        proc = subprocess.run(
            [sys.executable, "-m", "litkg.cli", "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "pipeline" in proc.stdout


class TestSubcommands:
    def test_ingest_reports_skips(self, corpus, tmp_path):
        bad = corpus / "bad.tsv"
        text = (corpus / "predications.tsv").read_text(encoding="utf-8")
        lines = text.splitlines()
        lines.insert(1, lines[1].replace("2015-03-04", "2015-13-04"))
        bad.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out = tmp_path / "ingest_out"
        assert main(["ingest", "--predications", str(bad), "--out", str(out)]) == 0
        stats = json.loads((out / "ingest_stats.json").read_text(encoding="utf-8"))
        assert stats["skipped"] == 1
        assert stats["read"] == 25

    def test_filter_writes_graph_and_stats(self, corpus, tmp_path):
        out = tmp_path / "filter_out"
        rc = main([
            "filter", "--predications", str(corpus / "predications.tsv"),
            "--keep", "20", "--out", str(out),
        ])
        assert rc == 0
        stats = json.loads((out / "filter_stats.json").read_text(encoding="utf-8"))
        assert stats["after_semtype_exclusion"] == 24  # acty row dropped
        assert stats["triples_retained_by_cutoff"] == 20
        assert (out / "graph.tsv").exists()

    def test_filter_cutoff_below_whitelist_floor_fails(self, corpus, tmp_path, capsys):
        rc = main([
            "filter", "--predications", str(corpus / "predications.tsv"),
            "--keep", "2", "--out", str(tmp_path / "x"),
        ])
        assert rc == 1
        payload = json.loads(capsys.readouterr().err.splitlines()[-1])
        assert "whitelist" in payload["error"]

    def test_train_zero_epochs_equals_seeded_init(self, corpus, tmp_path):
        graph_out = tmp_path / "g"
        main(["filter", "--predications", str(corpus / "predications.tsv"),
              "--out", str(graph_out)])
        train_out = tmp_path / "t"
        rc = main([
            "train", "--graph", str(graph_out / "graph.tsv"), "--model", "transe-l2",
            "--dim", "8", "--epochs", "0", "--seed", "5", "--out", str(train_out),
        ])
        assert rc == 0
        store = EmbeddingStore.load(train_out / "checkpoint.tsv")
        from litkg.graph import load_graph

        g = load_graph(graph_out / "graph.tsv")
        root = np.random.SeedSequence(5)
        expected = EmbeddingStore.initialize(
            "transe-l2", 8, g.entity_keys(), g.relation_keys(),
            np.random.default_rng(root.spawn(3)[0]),
        )
        np.testing.assert_array_equal(store.entity_vecs, expected.entity_vecs)
        np.testing.assert_array_equal(store.relation_vecs, expected.relation_vecs)

    def test_evaluate_and_predict_run_from_artifacts(self, corpus, tmp_path, capsys):
        work = tmp_path / "w"
        main(["filter", "--predications", str(corpus / "predications.tsv"), "--out", str(work)])
        main(["train", "--graph", str(work / "graph.tsv"), "--dim", "8", "--epochs", "3",
              "--batch-size", "8", "--negatives", "4", "--train-cutoff", "2019-01-01",
              "--out", str(work)])
        rc = main([
            "evaluate", "--graph", str(work / "graph.tsv"),
            "--checkpoint", str(work / "checkpoint.tsv"),
            "--train-cutoff", "2019-01-01", "--test-cutoff", "2021-01-01",
            "--filtered", "--out", str(work),
        ])
        assert rc == 0
        report = json.loads((work / "report.json").read_text(encoding="utf-8"))
        assert report["mode"] == "filtered"
        rc = main([
            "predict", "--graph", str(work / "graph.tsv"),
            "--checkpoint", str(work / "checkpoint.tsv"),
            "--candidates", str(corpus / "drugs.txt"), "--category", "drug",
            "--top-n", "4", "--out", str(work),
        ])
        assert rc == 0
        lines = (work / "predictions_drug.tsv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2 + 4  # metadata + header + rows


class TestPipeline:
    def test_runs_and_is_deterministic(self, corpus, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        assert main(["pipeline", "--config", str(corpus / "config.json"), "--out", str(out1)]) == 0
        assert main(["pipeline", "--config", str(corpus / "config.json"), "--out", str(out2)]) == 0
        for name in (
            "graph.tsv", "checkpoint.tsv", "report.json",
            "predictions_drug.tsv", "filter_stats.json", "predications_clean.tsv",
        ):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name

    def test_threads_override_runs_parallel_mode(self, corpus, tmp_path):
        out = tmp_path / "par"
        rc = main(["pipeline", "--config", str(corpus / "config.json"),
                   "--out", str(out), "--threads", "4"])
        assert rc == 0
        assert (out / "checkpoint.tsv").exists()

    def test_seed_override_changes_checkpoint(self, corpus, tmp_path):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        main(["pipeline", "--config", str(corpus / "config.json"), "--out", str(out1)])
        main(["pipeline", "--config", str(corpus / "config.json"), "--out", str(out2),
              "--seed", "99"])
        assert (out1 / "checkpoint.tsv").read_bytes() != (out2 / "checkpoint.tsv").read_bytes()
        assert (out1 / "graph.tsv").read_bytes() == (out2 / "graph.tsv").read_bytes()
