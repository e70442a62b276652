import csv
import io
import json

import pytest

from rankbench import builtin_catalog, save_catalog
from rankbench.cli import main

PERTURBED_DOC = {
    "ids": ["a", "b", "c"],
    "entries": [[1, 2, 6], [0.5, 1, 2], [1 / 6, 0.5, 1]],
}
PERTURBED_CR = 0.01577129938761093  # frozen numpy.linalg.eigvals oracle


@pytest.fixture()
def catalog_file(tmp_path):
    path = tmp_path / "desk.json"
    save_catalog(builtin_catalog(), path)
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRank:
    def test_builtin_scenario_table(self, capsys, catalog_file):
        code, out, err = run_cli(
            capsys, "rank", "--catalog", str(catalog_file), "--scenario", "sim1"
        )
        assert code == 0
        lines = out.splitlines()
        rf2 = next(line for line in lines if line.startswith("RF2"))
        assert rf2.count("Rank # 1") == 2  # first under both methods

    def test_inline_single_weight_degenerates_to_column_order(self, capsys, catalog_file):
        # rnc is a cost column: RF2 (1.5) < RF1 (3.0) < RF3 (6.0)
        code, out, _ = run_cli(
            capsys, "rank", "--catalog", str(catalog_file),
            "--weights", "rnc=1.0", "--format", "json",
        )
        assert code == 0
        [doc] = json.loads(out)
        for ranking in doc["rankings"]:
            assert [e["service"] for e in ranking["entries"]] == ["RF2", "RF1", "RF3"]

    def test_missing_catalog_is_io_error(self, capsys, tmp_path):
        missing = tmp_path / "nope.json"
        code, _, err = run_cli(
            capsys, "rank", "--catalog", str(missing), "--scenario", "sim1"
        )
        assert code == 2
        assert str(missing) in err

    def test_corrupt_catalog_is_validation_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"schema_version": 1,')
        code, _, err = run_cli(capsys, "rank", "--catalog", str(bad), "--scenario", "sim1")
        assert code == 1
        assert "error:" in err

    def test_needs_scenario_or_weights(self, capsys):
        code, _, err = run_cli(capsys, "rank")
        assert code == 1
        assert "--scenario" in err

    def test_scenario_and_weights_conflict(self, capsys):
        code, _, err = run_cli(
            capsys, "rank", "--scenario", "sim1", "--weights", "rnc=1.0"
        )
        assert code == 1

    def test_bad_inline_weight_syntax(self, capsys):
        code, _, err = run_cli(capsys, "rank", "--weights", "rnc")
        assert code == 1
        assert "ID=VALUE" in err

    def test_unknown_scenario_name(self, capsys):
        code, _, err = run_cli(capsys, "rank", "--scenario", "sim9")
        assert code == 2
        assert "sim9" in err

    def test_method_selection(self, capsys):
        code, out, _ = run_cli(
            capsys, "rank", "--scenario", "sim1", "--method", "SAW", "--format", "json"
        )
        assert code == 0
        [doc] = json.loads(out)
        assert [r["method"] for r in doc["rankings"]] == ["SAW"]
        assert doc["kendall_tau"] is None


class TestReproducePaper:
    EXPECTED = {
        "sim1": ["RF2", "RF1", "RF3"],
        "sim2": ["RF1", "RF3", "RF2"],
        "sim3": ["RF2", "RF1", "RF3"],
        "sim4": ["RF3", "RF2", "RF1"],
    }

    def test_default_run_agreement_summary(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce-paper")
        assert code == 0
        assert "4/4 scenarios: AHP and SAW rank orders identical" in out
        assert out.count("==") == 8  # four scenario headers

    def test_json_orders(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce-paper", "--format", "json")
        assert code == 0
        docs = json.loads(out)
        for doc in docs:
            expected = self.EXPECTED[doc["scenario"]["name"]]
            for ranking in doc["rankings"]:
                assert [e["service"] for e in ranking["entries"]] == expected
            assert doc["exact_rank_match"] is True
            assert doc["kendall_tau"] == 1.0

    def test_csv_blocks(self, capsys):
        code, out, _ = run_cli(capsys, "reproduce-paper", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 1 + 12
        assert {r[0] for r in rows[1:]} == {"sim1", "sim2", "sim3", "sim4"}

    def test_corrupt_catalog_named(self, capsys, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text('{"schema_version": 1, "criteria": [], "services": []}')
        code, _, err = run_cli(capsys, "reproduce-paper", "--catalog", str(bad))
        assert code == 1
        assert "criterion" in err or "services" in err

    def test_output_dir_writes_report_and_figures(self, capsys, tmp_path):
        outdir = tmp_path / "out"
        code, out, err = run_cli(capsys, "reproduce-paper", "--output", str(outdir))
        assert code == 0
        names = sorted(p.name for p in outdir.iterdir())
        assert names == [
            "report.txt",
            "sim1_scores.png",
            "sim2_scores.png",
            "sim3_scores.png",
            "sim4_scores.png",
        ]
        assert (outdir / "report.txt").read_text().rstrip("\n") in out.rstrip("\n")
        assert (outdir / "sim1_scores.png").read_bytes()[:4] == b"\x89PNG"


class TestCompare:
    def test_defaults_to_builtin_scenarios(self, capsys):
        code, out, _ = run_cli(capsys, "compare")
        assert code == 0
        assert "4/4 scenarios" in out

    def test_scenario_file(self, capsys, tmp_path):
        doc = [
            {"name": "even", "weights": {
                "rnc": 0.2, "fut": 0.2, "avail": 0.2, "elast": 0.2, "srt": 0.2}},
        ]
        path = tmp_path / "even.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(capsys, "compare", "--scenario", str(path))
        assert code == 0
        assert "== even ==" in out


class TestSweep:
    def test_table_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--scenario", "sim1", "--criterion", "rnc",
            "--values", "0.1,0.2,1.0",
        )
        assert code == 0
        assert "sweep of 'rnc' on scenario 'sim1'" in out
        assert "error:" in out  # the 1.0 point

    def test_csv_output_has_flip(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--scenario", "sim1", "--criterion", "rnc",
            "--values", "0.12,0.16", "--format", "csv",
        )
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][0] == "value"
        # SAW top flips RF3 -> RF2 between 0.12 and 0.16 (oracle threshold 0.1432)
        assert rows[1][2].startswith("RF3")
        assert rows[2][2].startswith("RF2")

    def test_range_sweep(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--scenario", "sim1", "--criterion", "fut",
            "--sweep-from", "0.1", "--sweep-to", "0.5", "--steps", "5",
            "--format", "json",
        )
        points = json.loads(out)
        assert [p["value"] for p in points] == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])

    def test_output_figure(self, capsys, tmp_path):
        outdir = tmp_path / "sweepout"
        code, _, _ = run_cli(
            capsys, "sweep", "--scenario", "sim1", "--criterion", "rnc",
            "--values", "0.1,0.3", "--output", str(outdir),
        )
        assert code == 0
        assert (outdir / "sweep_scores.png").exists()
        assert (outdir / "sweep.txt").exists()

    def test_needs_values_or_range(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--scenario", "sim1", "--criterion", "rnc")
        assert code == 1


class TestCheckConsistency:
    def test_all_ones_matrix(self, capsys, tmp_path):
        path = tmp_path / "ones.json"
        path.write_text(json.dumps({
            "ids": list("abcde"),
            "entries": [[1.0] * 5 for _ in range(5)],
        }))
        code, out, _ = run_cli(capsys, "check-consistency", str(path))
        assert code == 0
        assert "CR          : 0.0000" in out
        assert "acceptable  : yes" in out

    def test_perturbed_matrix_matches_oracle(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps(PERTURBED_DOC))
        code, out, _ = run_cli(capsys, "check-consistency", str(path))
        assert code == 0
        cr_line = next(line for line in out.splitlines() if line.startswith("CR"))
        assert float(cr_line.split(":")[1]) == pytest.approx(PERTURBED_CR, abs=1e-4)

    def test_reciprocity_violation_reports_indices(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"ids": ["a", "b"], "entries": [[1, 2], [0.3, 1]]}))
        code, _, err = run_cli(capsys, "check-consistency", str(path))
        assert code == 1
        assert "(0, 1)" in err or "[0][1]" in err.replace(" ", "")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "check-consistency", str(tmp_path / "gone.json"))
        assert code == 2


class TestConfigPlumbing:
    def test_env_config_sets_format(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "rb.json"
        config.write_text(json.dumps({"format": "json"}))
        monkeypatch.setenv("RANKBENCH_CONFIG", str(config))
        code, out, _ = run_cli(capsys, "reproduce-paper")
        assert code == 0
        json.loads(out)  # json because the env config said so

    def test_flag_overrides_env_config(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "rb.json"
        config.write_text(json.dumps({"format": "json"}))
        monkeypatch.setenv("RANKBENCH_CONFIG", str(config))
        code, out, _ = run_cli(capsys, "reproduce-paper", "--format", "table")
        assert code == 0
        assert "== sim1 ==" in out

    def test_eigen_cap_from_config_can_force_exit_3(self, capsys, tmp_path, monkeypatch):
        config = tmp_path / "rb.json"
        config.write_text(json.dumps({"eigen_max_iterations": 1}))
        monkeypatch.setenv("RANKBENCH_CONFIG", str(config))
        code, _, err = run_cli(capsys, "rank", "--scenario", "sim1")
        assert code == 3
        assert "did not converge" in err

    def test_timestamps_flag_adds_header(self, capsys):
        code, out, _ = run_cli(capsys, "rank", "--scenario", "sim1", "--timestamps")
        assert code == 0
        assert out.startswith("generated at: ")
