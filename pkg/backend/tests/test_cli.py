import csv
import json

import numpy as np
import pytest

import cli
from config.settings import settings
from models.records import SettingsRecord, StateRecord, SymmetricRecord
from nonlocality.measure import MeasurementSettings
from nonlocality.qstate import SymmetricState, dicke_expand

from .conftest import GHZ_P_SUCCESS


def write_json(path, record):
    path.write_text(record.model_dump_json())
    return str(path)


@pytest.fixture
def ghz_files(tmp_path, ghz3, ghz_solution):
    state = write_json(tmp_path / "ghz.json", StateRecord.from_state(dicke_expand(ghz3)))
    found = write_json(tmp_path / "settings.json", SettingsRecord.from_settings(ghz_solution.settings))
    return state, found


@pytest.fixture
def product_files(tmp_path, product3, z_settings3):
    state = write_json(tmp_path / "product.json", StateRecord.from_state(product3))
    found = write_json(tmp_path / "z.json", SettingsRecord.from_settings(z_settings3))
    return state, found


@pytest.fixture
def ghz_distribution_file(tmp_path, ghz_files):
    state, found = ghz_files
    out = tmp_path / "d.json"
    assert cli.main(["distribution", "--state", state, "--settings", found, "--out", str(out)]) == 0
    return str(out)


class TestDistribution:
    def test_writes_table_csv_and_manifest(self, tmp_path, ghz_files):
        state, found = ghz_files
        out, table = tmp_path / "d.json", tmp_path / "d.csv"
        code = cli.main(
            ["distribution", "--state", state, "--settings", found, "--out", str(out), "--csv", str(table)]
        )
        assert code == 0
        record = json.loads(out.read_text())
        assert record["n"] == 3
        assert record["p"][0][0] == pytest.approx(GHZ_P_SUCCESS)

        with open(table, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["s", "r", "p"]
        assert len(rows) == 1 + 64

        manifest = json.loads((tmp_path / "d.json.manifest.json").read_text())
        assert manifest["command"] == "distribution"
        assert set(manifest["outputs"]) == {str(out), str(table)}
        assert set(manifest["inputs"]) == {state, found}

    def test_malformed_json(self, tmp_path, ghz_files, capsys):
        _, found = ghz_files
        broken = tmp_path / "broken.json"
        broken.write_text("{\"n\": 3, \"amplitudes\": [")
        code = cli.main(
            ["distribution", "--state", str(broken), "--settings", found, "--out", str(tmp_path / "d.json")]
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_dimension_mismatch(self, tmp_path, ghz_files, capsys):
        state, _ = ghz_files
        two_party = MeasurementSettings.from_params([0, 1], [1, 0])
        two_party_file = write_json(tmp_path / "two.json", SettingsRecord.from_settings(two_party))
        code = cli.main(
            ["distribution", "--state", state, "--settings", two_party_file, "--out", str(tmp_path / "d.json")]
        )
        assert code == 2
        assert "dimension mismatch" in capsys.readouterr().err

    def test_missing_input(self, tmp_path):
        code = cli.main(
            ["distribution", "--state", str(tmp_path / "nope.json"), "--settings", "x", "--out", "d.json"]
        )
        assert code == 2


class TestHardy:
    def test_pass(self, ghz_distribution_file, capsys):
        assert cli.main(["hardy", "--distribution", ghz_distribution_file]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"]
        assert report["p_success"] == pytest.approx(GHZ_P_SUCCESS)
        assert report["ineq1"] > 0

    def test_fail(self, product_files, capsys):
        state, found = product_files
        assert cli.main(["hardy", "--state", state, "--settings", found]) == 1
        assert not json.loads(capsys.readouterr().out)["passed"]

    def test_other_pivot(self, product_files):
        state, found = product_files
        assert cli.main(["hardy", "--state", state, "--settings", found, "--pivot", "2"]) == 1

    def test_same_verdict_for_each_pivot(self, tmp_path, ghz3, ghz_standard_settings3, capsys):
        state = write_json(tmp_path / "ghz.json", StateRecord.from_state(dicke_expand(ghz3)))
        found = write_json(tmp_path / "uniform.json", SettingsRecord.from_settings(ghz_standard_settings3))
        verdicts = []
        for pivot in ("1", "2"):
            code = cli.main(["hardy", "--state", state, "--settings", found, "--pivot", pivot])
            report = json.loads(capsys.readouterr().out)
            verdicts.append((code, report["passed"], round(report["p_success"], 12)))
        assert verdicts[0] == verdicts[1]

    def test_pivot_follows_the_special_party(self, tmp_path, ghz_files, ghz_solution):
        state, _ = ghz_files
        first, second, third = ghz_solution.settings.pairs
        swapped = MeasurementSettings(3, (second, first, third))
        found = write_json(tmp_path / "swapped.json", SettingsRecord.from_settings(swapped))
        assert cli.main(["hardy", "--state", state, "--settings", found, "--pivot", "2"]) == 0
        assert cli.main(["hardy", "--state", state, "--settings", found, "--variant", "standard"]) == 1

    def test_report_file(self, tmp_path, product_files):
        state, found = product_files
        out = tmp_path / "report.json"
        code = cli.main(
            ["hardy", "--state", state, "--settings", found, "--variant", "standard", "--out", str(out)]
        )
        assert code == 1
        assert json.loads(out.read_text())["variant"] == "standard"
        assert (tmp_path / "report.json.manifest.json").exists()

    def test_needs_an_input(self, capsys):
        assert cli.main(["hardy"]) == 2
        assert "error:" in capsys.readouterr().err


class TestSymmetric:
    def test_ghz_fixture(self, capsys):
        assert cli.main(["symmetric", "--ghz", "3", str(np.pi / 4), "--x", "0,2"]) == 0
        solution = json.loads(capsys.readouterr().out)
        assert solution["p_success"] == pytest.approx(GHZ_P_SUCCESS, rel=1e-9)
        assert solution["y1"] == pytest.approx([0.25, 0.0], abs=1e-12)

    def test_excluded_x(self, capsys):
        assert cli.main(["symmetric", "--ghz", "3", "0.7854", "--x", "1,0"]) == 1
        assert "excluded x" in capsys.readouterr().err

    def test_bad_x(self):
        assert cli.main(["symmetric", "--w", "3", "--x", "one"]) == 2

    def test_one_state_source(self):
        assert cli.main(["symmetric", "--w", "3", "--ghz", "3", "0.5"]) == 2

    def test_product_state_file(self, tmp_path, capsys):
        state = write_json(tmp_path / "s.json", SymmetricRecord.from_state(SymmetricState.product(3)))
        assert cli.main(["symmetric", "--state", state]) == 1
        assert "error:" in capsys.readouterr().err

    def test_sweep(self, tmp_path):
        out, sweep = tmp_path / "sol.json", tmp_path / "sweep.csv"
        code = cli.main(
            ["symmetric", "--w", "3", "--x", "1,0", "--out", str(out), "--sweep", str(sweep), "--sweep-steps", "7"]
        )
        assert code == 0
        with open(sweep, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["n", "theta_or_state_id", "abs_x", "arg_x", "p_success"]
        assert 1 < len(rows) <= 8
        assert all(row[1] == "w" for row in rows[1:])
        manifest = json.loads((tmp_path / "sol.json.manifest.json").read_text())
        assert manifest["parameters"]["x"] == [1.0, 0.0]


def test_classify(ghz_distribution_file, capsys):
    assert cli.main(["classify", "--distribution", ghz_distribution_file]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["label"] == "genuinely-nonlocal"
    assert result["outcome"]["margin"] > 0


class TestExperiment:
    ARGS = ["experiment", "--n", "3", "--count", "2", "--multistarts", "12", "--lp-subsample", "1"]

    def test_outputs_are_reproducible(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(self.ARGS + ["--seed", "4", "--out", str(first)]) == 0
        assert cli.main(self.ARGS + ["--seed", "4", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

        header = first.read_text().splitlines()[0]
        assert header == "index,sub_seed,passed,p_success,max_residual,lp_checked,lp_infeasible"
        summary = json.loads((tmp_path / "a.summary.json").read_text())
        assert summary["count"] == 2
        assert summary["lp_checked"] <= 1
        manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
        assert manifest["seed"] == 4

    def test_seed_falls_back_to_settings(self, tmp_path, monkeypatch):
        monkeypatch.setattr(settings, "SEED", 9)
        out = tmp_path / "e.csv"
        assert cli.main(self.ARGS + ["--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "e.csv.manifest.json").read_text())
        assert manifest["seed"] == 9
        assert manifest["parameters"]["search"]["seed"] == 9

    def test_unsupported_party_count(self, tmp_path):
        assert cli.main(["experiment", "--n", "6", "--count", "1", "--out", str(tmp_path / "x.csv")]) == 2


class TestVertices:
    def test_bilocal(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        assert cli.main(["vertices", "--out", str(out)]) == 0
        record = json.loads(out.read_text())
        assert record["model"] == "bilocal-ns"
        assert len(record["columns"]) == 288
        assert record["columns"][0]["bipartition"] == [[1], [2, 3]]

    def test_fully_local(self, tmp_path):
        out = tmp_path / "v.json"
        assert cli.main(["vertices", "--model", "fully-local", "--n", "2", "--out", str(out)]) == 0
        assert len(json.loads(out.read_text())["columns"]) == 16

    def test_bilocal_needs_three_parties(self, tmp_path):
        assert cli.main(["vertices", "--n", "4", "--out", str(tmp_path / "v.json")]) == 2


def test_vertex_inequality_check(capsys):
    assert cli.main(["verify-appendix"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["holds"]
    assert result["vertex_count"] == 288


def test_no_command():
    assert cli.main([]) == 2
