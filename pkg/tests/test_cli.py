"""End-to-end artifact tests for the command-line interface."""

import csv
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner
from pytest import approx

from tuberupture.cli import boxplot_svg, main
from tuberupture.scanner import BridgeWindow, WindowCatalog

SUMMARY_KEYS = {"params", "range", "model", "windows", "gaps",
                "transition_t_over_pi", "max_drift"}


def run_ok(args):
    result = CliRunner().invoke(main, args)
    assert result.exit_code == 0, result.output
    return result


def read_csv(path: Path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestYCompare:
    def test_unforced_columns_collapse_to_y0(self, tmp_path):
        run_ok(["ycompare", "--epsilon", "0", "--t-end", "6.28",
                "--out", str(tmp_path)])
        header, rows = read_csv(tmp_path / "ycompare.csv")
        assert header == ["t", "y_numeric", "y_exp2", "y_taylor2",
                          "err_exp", "err_taylor"]
        for row in rows:
            assert float(row[1]) == approx(1.0, abs=1e-12)
            assert float(row[2]) == 1.0
            assert float(row[3]) == 1.0

    def test_short_range_error_bound(self, tmp_path):
        run_ok(["ycompare", "--t-end", "2", "--pi-units", "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "ycompare_summary.json").read_text())
        assert SUMMARY_KEYS <= set(summary)
        assert summary["max_err_exp2"] <= 5e-4

    def test_csv_round_trips_exactly(self, tmp_path):
        run_ok(["ycompare", "--t-end", "3.0", "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "ycompare.csv")
        for row in rows:
            for cell in row:
                value = float(cell)
                assert repr(value) == cell  # shortest round-trip form

    def test_reruns_byte_identical(self, tmp_path):
        args = ["ycompare", "--t-end", "4.0", "--out", str(tmp_path)]
        run_ok(args)
        first_csv = (tmp_path / "ycompare.csv").read_bytes()
        first_json = (tmp_path / "ycompare_summary.json").read_bytes()
        run_ok(args)
        assert (tmp_path / "ycompare.csv").read_bytes() == first_csv
        assert (tmp_path / "ycompare_summary.json").read_bytes() == first_json

    def test_rejects_inverted_range(self, tmp_path):
        result = CliRunner().invoke(main, ["ycompare", "--t-start", "5",
                                           "--t-end", "1", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert len(result.output.strip().splitlines()) == 1


class TestScan:
    def test_closed_regime_zero_rows(self, tmp_path):
        run_ok(["scan", "--t-end", "10", "--pi-units", "--out", str(tmp_path)])
        header, rows = read_csv(tmp_path / "scan_windows.csv")
        assert header[:4] == ["index", "t_open", "t_close", "width"]
        assert rows == []
        summary = json.loads((tmp_path / "scan_summary.json").read_text())
        assert summary["windows"] == []
        assert summary["transition_t_over_pi"] is None
        assert summary["window_count"] == 0

    def test_rupture_onset_recorded(self, tmp_path):
        run_ok(["scan", "--t-start", "330", "--t-end", "336", "--pi-units",
                "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "scan_summary.json").read_text())
        assert summary["window_count"] >= 2
        first = summary["windows"][0]
        assert first["t_open_over_pi"] == approx(330.247, abs=1e-2)

    def test_gap_classes_written(self, tmp_path):
        run_ok(["scan", "--t-start", "330", "--t-end", "340", "--pi-units",
                "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "scan_gaps.csv")
        assert all(row[3] == "2pi" for row in rows)
        assert all(float(row[2]) == approx(2.0, abs=0.05) for row in rows)

    def test_svg_written_on_request(self, tmp_path):
        run_ok(["scan", "--t-start", "330", "--t-end", "340", "--pi-units",
                "--format", "svg", "--out", str(tmp_path)])
        svg = (tmp_path / "scan_boxplot.svg").read_text()
        root = ET.fromstring(svg)
        rects = [e for e in root.iter() if e.tag.endswith("rect")]
        summary = json.loads((tmp_path / "scan_summary.json").read_text())
        assert len(rects) == summary["window_count"] >= 2

    def test_workers_do_not_change_files(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        base = ["scan", "--t-start", "328", "--t-end", "344", "--pi-units"]
        run_ok(base + ["--workers", "1", "--out", str(a)])
        run_ok(base + ["--workers", "4", "--out", str(b)])
        assert ((a / "scan_windows.csv").read_bytes()
                == (b / "scan_windows.csv").read_bytes())

    def test_numeric_ymodel_short_range(self, tmp_path):
        run_ok(["scan", "--t-end", "2", "--pi-units", "--ymodel", "numeric",
                "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "scan_summary.json").read_text())
        assert summary["model"] == "numeric"
        assert summary["window_count"] == 0

    def test_rejects_unknown_model(self, tmp_path):
        result = CliRunner().invoke(main, ["scan", "--ymodel", "cubic",
                                           "--out", str(tmp_path)])
        assert result.exit_code != 0


class TestBoxplotSvg:
    def test_two_rects_at_expected_positions(self):
        catalog = WindowCatalog(
            windows=(BridgeWindow(331 * math.pi, 331.5 * math.pi),
                     BridgeWindow(336 * math.pi, 336.25 * math.pi)),
            t_start=330 * math.pi, t_end=340 * math.pi,
            step=math.pi / 200, refine_tol=1e-9)
        svg = boxplot_svg(catalog)
        root = ET.fromstring(svg)
        rects = [e for e in root.iter() if e.tag.endswith("rect")]
        assert len(rects) == 2
        # x maps t/pi over [330, 340] onto [60, 880]
        x0 = float(rects[0].attrib["x"])
        assert x0 == approx(60 + (331 - 330) / 10 * 820, abs=1e-6)
        width0 = float(rects[0].attrib["width"])
        assert width0 == approx(0.5 / 10 * 820, abs=1e-6)
        assert "script" not in svg

    def test_empty_catalog_has_no_rects(self):
        catalog = WindowCatalog(windows=(), t_start=0.0, t_end=10 * math.pi,
                                step=math.pi / 200, refine_tol=1e-9)
        root = ET.fromstring(boxplot_svg(catalog))
        rects = [e for e in root.iter() if e.tag.endswith("rect")]
        assert rects == []


class TestSurface:
    def test_minimal_grid_has_four_rows(self, tmp_path):
        run_ok(["surface", "--t-end", "1.0", "--nz", "2", "--nt", "2",
                "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "surface.csv")
        assert len(rows) == 4

    def test_initial_row_disc_value(self, tmp_path):
        # z grid chosen so that z0 = 0.25 is a node, t grid starts at 0
        run_ok(["surface", "--t-end", "3.14", "--nz", "9", "--nt", "3",
                "--z-min", "-1", "--z-max", "1", "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "surface.csv")
        hit = [row for row in rows
               if float(row[0]) == 0.0 and float(row[1]) == 0.25]
        assert len(hit) == 1
        assert float(hit[0][2]) == approx(0.0016, rel=1e-12)

    def test_branch_cells_empty_where_inaccessible(self, tmp_path):
        run_ok(["surface", "--t-end", "3.14", "--nz", "9", "--nt", "3",
                "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "surface.csv")
        for row in rows:
            if float(row[2]) < 0:
                assert row[3] == "" and row[4] == ""
            else:
                assert row[3] != "" and row[4] != ""

    def test_rows_are_t_major(self, tmp_path):
        run_ok(["surface", "--t-end", "1.0", "--nz", "3", "--nt", "2",
                "--out", str(tmp_path)])
        _, rows = read_csv(tmp_path / "surface.csv")
        ts = [float(r[0]) for r in rows]
        assert ts == sorted(ts)
        assert ts[0] == ts[1] == ts[2] == 0.0


class TestDrift:
    def test_unforced_drift_is_tiny(self, tmp_path):
        # autonomous conservative case; tight tolerance so the integrator's
        # own global error stays below the asserted level
        run_ok(["drift", "--epsilon", "0", "--t-end", "6.28",
                "--rel-tol", "1e-13", "--abs-tol", "1e-13",
                "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "drift_summary.json").read_text())
        assert summary["max_drift"] <= 1e-10
        assert summary["max_drift_exp2"] <= 1e-10

    def test_conservation_and_truncation_drift(self, tmp_path):
        run_ok(["drift", "--t-end", "20", "--pi-units", "--out", str(tmp_path)])
        summary = json.loads((tmp_path / "drift_summary.json").read_text())
        # numeric-y coefficients: structurally conserved
        assert summary["max_drift"] <= 1e-6
        # exponential-model coefficients: truncation drift, small but nonzero
        assert 0 < summary["max_drift_exp2"] <= 1e-3
        header, rows = read_csv(tmp_path / "drift.csv")
        assert header == ["t", "drift_numeric", "drift_exp2"]
        assert len(rows) == 1000  # 20 pi / (pi/50)

    def test_rejects_bad_range(self, tmp_path):
        result = CliRunner().invoke(main, ["drift", "--t-start", "-3",
                                           "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert result.output.startswith("error:")
