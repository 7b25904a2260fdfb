"""Configuration management.

按优先级读取配置:
1. 环境变量 (KMSCURVES_*)
2. .env 文件
3. 默认值
"""

import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Literal, Optional

from pydantic import BaseModel, Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def get_project_root() -> Path:
    """获取项目根目录."""
    if root := os.environ.get("KMSCURVES_ROOT"):
        return Path(root)

    current = Path.cwd()
    for path in [current, *current.parents]:
        if (path / ".env").exists() or (path / "pyproject.toml").exists():
            return path

    this_file = Path(__file__).resolve()
    return this_file.parent.parent.parent


PROJECT_ROOT = get_project_root()


class Settings(BaseSettings):
    """数值容差与运行参数."""

    model_config = SettingsConfigDict(
        env_prefix="KMSCURVES_",
        env_file=".env",
        env_file_encoding="utf-8",
    )

    # 标量求根
    tol_root: float = Field(default=1e-13, description="参数空间二分宽度")
    tol_residual: float = Field(default=1e-9, description="残差检查容差")
    newton_polish_steps: int = Field(default=3, description="二分后的 Newton 修正步数")
    v_cap: float = Field(default=50.0, description="区间扩张上限 (sinh 溢出)")
    nmin_bracket_shrink: float = Field(default=1e-12)

    # 曲线追踪
    samples: int = Field(default=2000, description="每个 u 区间的采样数")
    min_samples: int = Field(default=16)
    scaled_eval_threshold: float = Field(default=20.0, description="v 超过此值时提出指数因子")
    denominator_floor: float = Field(default=1e-13)
    max_workers: int = Field(default=1, description="网格求值线程数")

    # 计数
    guard_fraction: float = Field(default=1e-7, description="环绕数保护距离 (曲线直径的比例)")
    winding_residual: float = Field(default=0.01)
    tie_tolerance: float = Field(default=1e-9, description="|λ| 与 N 的歧义容差 (N 的比例)")

    # 多项式
    cluster_tolerance: float = Field(default=1e-5, description="重根聚类距离")
    aberth_max_iter: int = Field(default=200)
    aberth_step_tol: float = Field(default=1e-13)
    max_char_poly_dim: int = Field(default=32)

    # 路径
    output_dir: Path = Field(default=PROJECT_ROOT / "test_outputs" / "results")


settings = Settings()


@contextmanager
def override_settings(**values) -> Iterator[Settings]:
    """临时覆盖全局配置 (CLI 的 --tol-root / --tol-residual)."""
    previous = {}
    for key, value in values.items():
        if value is None:
            continue
        if not hasattr(settings, key):
            raise AttributeError(f"Unknown setting: {key}")
        previous[key] = getattr(settings, key)
        setattr(settings, key, value)
    try:
        yield settings
    finally:
        for key, value in previous.items():
            setattr(settings, key, value)


class RunConfig(BaseModel):
    """CLI 子命令的运行配置，分发前校验."""

    subcommand: Literal["thresholds", "curve", "spectrum", "count", "cubic", "verify", "figures"]
    n: Optional[int] = None
    N: Optional[float] = None
    k: Optional[Literal[1, 2]] = None
    alpha: Optional[float] = None
    samples: int = 2000
    out: Optional[Path] = None
    format: Literal["csv", "svg"] = "csv"
    tol_root: Optional[float] = None
    tol_residual: Optional[float] = None

    @model_validator(mode="after")
    def _check_constraints(self) -> "RunConfig":
        from kmscurves.thresholds import n_min

        if self.tol_root is not None and self.tol_root <= 0:
            raise ValueError(f"--tol-root must be > 0, got {self.tol_root}")
        if self.tol_residual is not None and self.tol_residual <= 0:
            raise ValueError(f"--tol-residual must be > 0, got {self.tol_residual}")

        if self.subcommand == "cubic":
            if self.alpha is None or self.alpha <= 0:
                raise ValueError(f"alpha > 0 required, got {self.alpha}")
            if self.N is not None and self.N <= 0:
                raise ValueError(f"N > 0 required, got {self.N}")
            if self.samples < 64:
                raise ValueError(f"samples >= 64 required for cubic curves, got {self.samples}")
            return self

        needs_n = self.subcommand in ("thresholds", "curve", "spectrum", "count")
        if needs_n and self.n is None:
            raise ValueError("--n is required")
        if self.n is None:
            return self

        if self.subcommand == "spectrum":
            if not 2 <= self.n <= 32:
                raise ValueError(f"2 <= n <= 32 required, got n={self.n}")
            return self
        if self.n < 3:
            raise ValueError(f"n >= 3 required, got n={self.n}")
        if self.subcommand in ("curve", "count"):
            if self.N is None:
                raise ValueError("--level is required")
            if self.k is None:
                raise ValueError("--type is required")
            if self.samples < 16:
                raise ValueError(f"samples >= 16 required, got {self.samples}")
        if self.N is not None:
            bound = n_min(self.n)
            if self.N <= bound:
                raise ValueError(f"N={self.N} <= N_min({self.n})={bound:.10g}")
        return self
