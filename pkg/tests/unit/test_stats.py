"""Unit tests for the verify report."""

import json

import pytest

from kmscurves.progress import HeartbeatMonitor, log_stage
from kmscurves.stats import CheckRecord, VerifyReport


def _report() -> VerifyReport:
    report = VerifyReport(level="quick")
    report.start()
    with report.check("nmin-anchors") as record:
        record.passed = True
        record.detail = "N_min(5)=1.25"
    with report.check("jordan-sweep", advisory=True) as record:
        record.detail = "1 row disagrees"
    report.finish()
    return report


class TestCheckRecord:
    def test_elapsed_without_times(self):
        assert CheckRecord(name="x").elapsed_seconds == 0.0

    def test_elapsed(self):
        record = CheckRecord(
            name="x", start_time="2024-01-01T00:00:00", end_time="2024-01-01T00:01:30"
        )
        assert record.elapsed_seconds == 90.0
        assert record.to_dict()["elapsed_seconds"] == 90.0


class TestVerifyReport:
    """测试检查记录与汇总."""

    def test_advisory_does_not_fail(self):
        report = _report()
        assert report.passed
        assert report.failures == []

    def test_exception_recorded(self):
        report = VerifyReport()
        with report.check("curve-oracle") as record:
            raise ValueError("boom")
        assert not record.passed
        assert record.detail == "ValueError: boom"
        assert not report.passed
        assert [r.name for r in report.failures] == ["curve-oracle"]

    def test_summary_text(self):
        text = _report().summary_text()
        assert "✓ nmin-anchors" in text
        assert "! jordan-sweep" in text
        assert "2/2 通过" in text

    def test_save_json(self, tmp_path):
        path = tmp_path / "out" / "verify_report.json"
        _report().save_json(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["summary"]["passed"] is True
        assert data["summary"]["checks"] == 2
        assert "tol_root" in data["tolerances"]
        assert data["records"][1]["advisory"] is True

    def test_summary_md(self, tmp_path):
        report = _report()
        md = report.generate_summary_md()
        assert md.startswith("# 校验汇总报告")
        assert "| 2 | jordan-sweep | 仅报告 |" in md
        report.save_summary_md(tmp_path / "verify_summary.md")
        assert (tmp_path / "verify_summary.md").exists()

    def test_pipe_escaped(self):
        report = VerifyReport()
        with report.check("x") as record:
            record.detail = "a|b"
        assert "a\\|b" in report.generate_summary_md()

    def test_format_duration(self):
        report = VerifyReport()
        assert report._format_duration(30) == "30.0秒"
        assert report._format_duration(90) == "1.5分钟"
        assert report._format_duration(7200) == "2.0小时"


class TestProgress:
    """阶段日志与心跳."""

    def test_log_stage_indent(self, capsys):
        log_stage("curve", "tracing", indent=1)
        assert capsys.readouterr().out == "  [curve] tracing\n"

    def test_quiet_heartbeat_prints_nothing(self, capsys):
        with HeartbeatMonitor("verify quick", interval=0.01, verbose=False) as hb:
            hb.current = "cubic"
        assert capsys.readouterr().out == ""
        assert hb.elapsed >= 0.0

    def test_heartbeat_reports_interruption(self, capsys):
        with pytest.raises(RuntimeError):
            with HeartbeatMonitor("verify full", interval=60):
                raise RuntimeError("boom")
        assert "[verify full] 中断" in capsys.readouterr().out
