"""Tests for report generation."""

import json

import pytest
from rich.console import Console

from surfacecodes import __version__
from surfacecodes.config import ReproduceConfig
from surfacecodes.engines.base import Certainty, DistanceResult
from surfacecodes.exceptions import ReportError
from surfacecodes.report import (
    build_report_data,
    generate_report,
    render_report_from_file,
    render_summary,
)


def _recording_console():
    return Console(record=True, width=160, file=open("/dev/null", "w"))


class TestBuildReportData:
    def test_metadata(self, tmp_path, make_row):
        config = ReproduceConfig(table="q4-quadrics", output_dir=tmp_path)
        data = build_report_data([make_row()], config, 4, 1.234, [])
        assert data["schema"] == 1
        meta = data["metadata"]
        assert meta["tool_version"] == __version__
        assert meta["table"] == "q4-quadrics"
        assert meta["q"] == 4
        assert meta["duration_seconds"] == 1.2
        assert meta["row_count"] == 1
        assert meta["config"]["engine"]["engine"] == "isd"
        assert meta["config"]["config_hash"] == config.config_hash()
        assert meta["surface"] is None


class TestGenerateReport:
    def test_generates_json_file(self, tmp_path, make_row):
        config = ReproduceConfig(table="q4-quadrics", output_dir=tmp_path, json_only=True)
        data = build_report_data([make_row()], config, 4, 5.0, [])
        path = generate_report(data, config, _recording_console())
        assert path == tmp_path / "q4-quadrics.json"
        with open(path) as f:
            saved = json.load(f)
        assert saved["rows"][0]["bound_value"] == 4
        assert saved["metadata"]["duration_seconds"] == 5.0

    def test_console_summary(self, tmp_path, make_row):
        config = ReproduceConfig(table="q4-quadrics", output_dir=tmp_path)
        console = _recording_console()
        data = build_report_data([make_row()], config, 4, 5.0, [])
        generate_report(data, config, console)
        assert "Report saved to:" in console.export_text()

    def test_render_from_file(self, tmp_path, make_row):
        config = ReproduceConfig(table="q4-quadrics", output_dir=tmp_path, json_only=True)
        data = build_report_data([make_row()], config, 4, 5.0, [])
        path = generate_report(data, config, _recording_console())
        console = _recording_console()
        render_report_from_file(path, console)
        assert "Table q4-quadrics" in console.export_text()

    def test_render_missing_file(self, tmp_path):
        with pytest.raises(ReportError, match="cannot read"):
            render_report_from_file(tmp_path / "absent.json", _recording_console())

    def test_render_wrong_schema(self, tmp_path):
        path = tmp_path / "old.json"
        path.write_text(json.dumps({"schema": 0, "rows": []}))
        with pytest.raises(ReportError, match="schema 1"):
            render_report_from_file(path, _recording_console())


class TestRenderSummary:
    def test_rows_and_counts(self, make_row):
        exact = DistanceResult("isd", Certainty.EXACT, 4, 4)
        data = {
            "metadata": {"table": "q4-quadrics", "q": 4, "duration_seconds": 2.0},
            "rows": [make_row(distance=exact), make_row("hyperbolic-quadric", 2, bound=4)],
            "errors": [],
        }
        console = _recording_console()
        render_summary(data, console)
        text = console.export_text()
        assert "2 rows, 1 exact distances" in text
        assert "=4" in text
        assert ">=4" in text

    def test_flags_mismatch_and_exclusions(self, make_row):
        flagged = make_row(
            m=2, bound=6, theorem="improved", bound_verified=False,
            bound={"unjustified_exclusions": ["3H"]},
        )
        data = {
            "metadata": {"table": "q8-quadrics", "q": 8},
            "rows": [make_row(bound=5, expected_bound=4), flagged],
            "errors": [{"key": "elliptic-quadric:m=3", "error": "budget exceeded"}],
        }
        console = _recording_console()
        render_summary(data, console)
        text = console.export_text()
        assert "bound 5, expected 4" in text
        assert "without a Theta argument" in text
        assert "3H" in text
        assert "budget exceeded" in text
