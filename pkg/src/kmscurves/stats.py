"""校验报告模块.

收集 verify 各项检查的结果与耗时，输出终端摘要、JSON 与 Markdown.
"""

import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Iterator

from kmscurves.config import settings


def _elapsed(start_time: str, end_time: str) -> float:
    if not start_time or not end_time:
        return 0.0
    try:
        start = datetime.fromisoformat(start_time)
        end = datetime.fromisoformat(end_time)
        return (end - start).total_seconds()
    except ValueError:
        return 0.0


@dataclass
class CheckRecord:
    """单项检查的结果.

    advisory 为 True 的检查只报告，不影响退出码 (例如 Jordan 曲线扫描).
    """
    name: str
    passed: bool = False
    detail: str = ""
    advisory: bool = False
    start_time: str = ""
    end_time: str = ""

    @property
    def elapsed_seconds(self) -> float:
        return _elapsed(self.start_time, self.end_time)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "advisory": self.advisory,
            "detail": self.detail,
            "start_time": self.start_time,
            "end_time": self.end_time,
            "elapsed_seconds": self.elapsed_seconds,
        }


@dataclass
class VerifyReport:
    """一次 verify 运行的全部检查."""
    level: str = "quick"
    start_time: str = ""
    end_time: str = ""
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def elapsed_seconds(self) -> float:
        return _elapsed(self.start_time, self.end_time)

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed and not r.advisory]

    @property
    def passed(self) -> bool:
        return not self.failures

    def start(self) -> None:
        self.start_time = datetime.now().isoformat()

    def finish(self) -> None:
        self.end_time = datetime.now().isoformat()

    @contextmanager
    def check(self, name: str, advisory: bool = False) -> Iterator[CheckRecord]:
        """记录一项检查. 块内抛出的异常记为失败，不向外传播.

        用法:
            with report.check("nmin-anchors") as record:
                record.passed = ...
                record.detail = ...
        """
        record = CheckRecord(name=name, advisory=advisory, start_time=datetime.now().isoformat())
        self.records.append(record)
        try:
            yield record
        except Exception as e:  # noqa: BLE001
            record.passed = False
            record.detail = f"{type(e).__name__}: {e}"
        finally:
            record.end_time = datetime.now().isoformat()

    def summary_text(self) -> str:
        """格式化汇总信息（用于终端显示）."""
        lines = [f"📊 verify {self.level}:"]
        for r in self.records:
            if r.passed:
                mark = "✓"
            elif r.advisory:
                mark = "!"
            else:
                mark = "✗"
            lines.append(f"   {mark} {r.name} ({r.elapsed_seconds:.1f}s) {r.detail}".rstrip())
        total = len(self.records)
        failed = len(self.failures)
        lines.append(f"   {total - failed}/{total} 通过")
        return "\n".join(lines)

    def to_dict(self) -> dict[str, Any]:
        """转换为字典（用于 JSON 序列化）."""
        return {
            "summary": {
                "level": self.level,
                "start_time": self.start_time,
                "end_time": self.end_time,
                "elapsed_seconds": self.elapsed_seconds,
                "passed": self.passed,
                "checks": len(self.records),
                "failures": [r.name for r in self.failures],
            },
            "tolerances": {
                "tol_root": settings.tol_root,
                "tol_residual": settings.tol_residual,
                "guard_fraction": settings.guard_fraction,
                "tie_tolerance": settings.tie_tolerance,
            },
            "records": [r.to_dict() for r in self.records],
        }

    def save_json(self, path: Path) -> None:
        """保存为 JSON 文件."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=2)

    def generate_summary_md(self) -> str:
        """生成 verify_summary.md 内容."""
        lines = [
            "# 校验汇总报告",
            "",
            f"**级别**: {self.level}",
            f"**开始时间**: {self.start_time}",
            f"**结束时间**: {self.end_time}",
            f"**总耗时**: {self._format_duration(self.elapsed_seconds)}",
            f"**结果**: {'通过' if self.passed else '失败'}",
            "",
            "## 检查明细",
            "",
            "| 序号 | 检查 | 结果 | 耗时 | 说明 |",
            "|-----|-----|-----|-----|-----|",
        ]
        for i, r in enumerate(self.records, 1):
            if r.passed:
                status = "通过"
            elif r.advisory:
                status = "仅报告"
            else:
                status = "失败"
            detail = r.detail.replace("|", "\\|")
            lines.append(
                f"| {i} | {r.name} | {status} | {self._format_duration(r.elapsed_seconds)} | {detail} |"
            )
        return "\n".join(lines) + "\n"

    def save_summary_md(self, path: Path) -> None:
        """保存 verify_summary.md 文件."""
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.generate_summary_md(), encoding="utf-8")

    def _format_duration(self, seconds: float) -> str:
        """格式化时长."""
        if seconds < 60:
            return f"{seconds:.1f}秒"
        elif seconds < 3600:
            return f"{seconds/60:.1f}分钟"
        else:
            return f"{seconds/3600:.1f}小时"
