"""End-to-end command-line behaviour and exit codes."""

import csv
import json

import pytest

from spikeword.cli import main


def run(*argv):
    return main([str(a) for a in argv])


class TestTrain:
    def test_single_pattern_writes_factor(self, tmp_path):
        out = tmp_path / "w.json"
        assert run("train", "--bits", 10, "--patterns", "992", "--out", out) == 0
        doc = json.loads(out.read_text())
        assert doc["homeostatic_factor"] == pytest.approx(4.18817, rel=0.005)
        assert doc["dropped_codewords"] == []

    def test_opposite_patterns_exit_2(self, tmp_path):
        out = tmp_path / "w.json"
        assert run("train", "--patterns", "992,31", "--out", out) == 2
        doc = json.loads(out.read_text())
        assert doc["homeostatic_factor"] is None
        assert doc["dropped_codewords"] == [31, 992]

    def test_duplicate_patterns_exit_1(self, tmp_path):
        assert run("train", "--patterns", "992,992",
                   "--out", tmp_path / "w.json") == 1

    def test_out_of_range_pattern_exit_1(self, tmp_path):
        assert run("train", "--patterns", "5000",
                   "--out", tmp_path / "w.json") == 1


class TestEvaluate:
    @pytest.fixture()
    def weight_file(self, tmp_path):
        out = tmp_path / "w.json"
        assert run("train", "--patterns", "992", "--out", out) == 0
        return out

    def test_perfect_single_pattern_report(self, weight_file, tmp_path):
        report = tmp_path / "report.csv"
        assert run("evaluate", "--weights", weight_file, "--out", report) == 0
        rows = list(csv.DictReader(report.open()))
        assert rows[0]["tp"] == "1" and rows[0]["tn"] == "1023"
        assert rows[0]["accuracy"] == "1.000"

    def test_check_mode_round_trip(self, weight_file, tmp_path):
        assert run("evaluate", "--weights", weight_file, "--check",
                   "--out", tmp_path / "r.csv") == 0

    def test_json_report_full_precision(self, weight_file, tmp_path):
        report = tmp_path / "report.json"
        assert run("evaluate", "--weights", weight_file, "--format", "json",
                   "--out", report) == 0
        doc = json.loads(report.read_text())
        assert doc["counts"]["tp"] == 1
        assert doc["metrics"]["accuracy"] == 1.0

    def test_factor_override_grows_positives(self, weight_file, tmp_path):
        base, bigger = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run("evaluate", "--weights", weight_file, "--out", base) == 0
        assert run("evaluate", "--weights", weight_file, "--factor", "8.0",
                   "--out", bigger) == 0
        fp_base = int(list(csv.DictReader(base.open()))[0]["fp"])
        fp_big = int(list(csv.DictReader(bigger.open()))[0]["fp"])
        assert fp_big >= fp_base

    def test_corrupt_weight_file_exit_1(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{}")
        assert run("evaluate", "--weights", bad) == 1

    def test_tampered_factor_fails_check(self, weight_file, tmp_path):
        doc = json.loads(weight_file.read_text())
        doc["homeostatic_factor"] = 5.0
        weight_file.write_text(json.dumps(doc))
        assert run("evaluate", "--weights", weight_file, "--check",
                   "--out", tmp_path / "r.csv") == 3


class TestSweeps:
    def test_dual_paper_set(self, tmp_path):
        out = tmp_path / "dual.csv"
        assert run("sweep-dual", "--base", 992, "--paper-set", "--out", out) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 14
        assert [r["hd"] for r in rows] == [
            "1", "2", "3", "4", "5", "1", "2", "3", "4", "5", "6", "7", "8", "9",
        ]

    def test_dual_error_rows(self, tmp_path):
        out = tmp_path / "dual.csv"
        assert run("sweep-dual", "--base", 992, "--partners", "992,31",
                   "--out", out) == 0
        rows = list(csv.DictReader(out.open()))
        assert rows[0]["factor"] == "duplicate pattern"
        assert rows[1]["factor"] == "infinite factor"

    def test_triple_from_file(self, tmp_path):
        src = tmp_path / "triples.csv"
        src.write_text("0,1,2\n")
        units, metrics = tmp_path / "u.csv", tmp_path / "m.csv"
        assert run("sweep-triple", "--triples", src, "--units-out", units,
                   "--metrics-out", metrics, "--check") == 0
        u = list(csv.DictReader(units.open()))[0]
        assert (u["units1"], u["units2"], u["units3"]) == ("26", "24", "24")
        m = list(csv.DictReader(metrics.open()))[0]
        assert m["tp"] == "3" and m["fp"] == "0"

    def test_triple_malformed_file_exit_1(self, tmp_path):
        src = tmp_path / "triples.csv"
        src.write_text("0,1\n")
        assert run("sweep-triple", "--triples", src,
                   "--units-out", tmp_path / "u.csv",
                   "--metrics-out", tmp_path / "m.csv") == 1


class TestPlotData:
    def _sweep(self, tmp_path):
        src = tmp_path / "triples.csv"
        src.write_text("0,1,2\n0,1,6\n")
        units, metrics = tmp_path / "u.csv", tmp_path / "m.csv"
        assert run("sweep-triple", "--triples", src, "--units-out", units,
                   "--metrics-out", metrics) == 0
        return units, metrics

    def test_grids_from_joined_tables(self, tmp_path):
        units, metrics = self._sweep(tmp_path)
        grids = tmp_path / "grids"
        assert run("plotdata", "--from", units, "--from", metrics,
                   "--out-dir", grids) == 0
        acc = list(csv.DictReader((grids / "accuracy.csv").open()))
        assert acc[0] == {"hd12": "1", "hd13": "1", "hd23": "2",
                          "accuracy": "1.0"}
        factor = list(csv.DictReader((grids / "factor.csv").open()))
        assert float(factor[1]["factor"]) == pytest.approx(2.09442, rel=0.005)

    def test_metrics_only_input_emits_metric_grids(self, tmp_path):
        _, metrics = self._sweep(tmp_path)
        grids = tmp_path / "grids"
        assert run("plotdata", "--from", metrics, "--out-dir", grids) == 0
        assert (grids / "accuracy.csv").exists()
        assert not (grids / "factor.csv").exists()

    def test_empty_table_empty_grids_exit_0(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("cw1,cw2,cw3,tp,tn,fp,fn\n")
        grids = tmp_path / "grids"
        assert run("plotdata", "--from", empty, "--out-dir", grids) == 0
        assert (grids / "accuracy.csv").read_text().strip() == \
            "hd12,hd13,hd23,accuracy"

    def test_missing_codeword_columns_exit_1(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        assert run("plotdata", "--from", bad, "--out-dir", tmp_path / "g") == 1


class TestDeterminism:
    def test_outputs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert run("sweep-dual", "--base", 992, "--partners", "960,896",
                       "--out", out) == 0
        assert a.read_bytes() == b.read_bytes()

        wa, wb = tmp_path / "wa.json", tmp_path / "wb.json"
        for out in (wa, wb):
            assert run("train", "--patterns", "992,960", "--out", out) == 0
        assert wa.read_bytes() == wb.read_bytes()
