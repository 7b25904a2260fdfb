"""阶段日志、心跳与进度条.

verify full 与 Jordan 扫描可能运行数分钟，心跳线程定期报告当前检查项与耗时.
"""

import sys
import threading
import time
from typing import Iterable, Optional, TypeVar

from tqdm import tqdm

T = TypeVar("T")


class HeartbeatMonitor:
    """后台线程每隔 interval 秒打印一次当前检查项.

    用法:
        with HeartbeatMonitor("verify full", interval=30) as hb:
            hb.current = "j-agreement"
            check_j_agreement(...)
    """

    def __init__(self, task_name: str, interval: float = 30.0, verbose: bool = True):
        self.task_name = task_name
        self.interval = interval
        self.verbose = verbose
        self.current = ""
        self._done = threading.Event()
        self._worker: Optional[threading.Thread] = None
        self._t0: Optional[float] = None

    @property
    def elapsed(self) -> float:
        return 0.0 if self._t0 is None else time.monotonic() - self._t0

    def _emit(self, text: str) -> None:
        print(f"    💓 [{self.task_name}] {text}", flush=True)

    def _beat(self) -> None:
        while not self._done.wait(self.interval):
            where = f" {self.current}" if self.current else ""
            self._emit(f"进行中{where} ({self.elapsed:.0f}s)")

    def __enter__(self) -> "HeartbeatMonitor":
        self._t0 = time.monotonic()
        if self.verbose:
            self._done.clear()
            self._worker = threading.Thread(target=self._beat, daemon=True)
            self._worker.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        if self._worker is not None:
            self._done.set()
            self._worker.join(timeout=1.0)
            self._worker = None
            status = "中断" if exc_type is not None else "完成"
            print(f"    ✅ [{self.task_name}] {status} (耗时 {self.elapsed:.1f}s)", flush=True)
        return False


def progress_bar(
    iterable: Iterable[T],
    desc: str = "",
    total: Optional[int] = None,
    disable: bool = False,
) -> Iterable[T]:
    """tqdm 进度条；stderr 不是终端时关闭."""
    disable = disable or not sys.stderr.isatty()
    return tqdm(iterable, desc=desc, total=total, disable=disable, leave=False)


def log_stage(stage_name: str, message: str, indent: int = 0):
    """打印阶段日志, 形如 "[curve] ..."."""
    print(f"{'  ' * indent}[{stage_name}] {message}", flush=True)
