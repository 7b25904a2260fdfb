"""命令行接口.

退出码: 0 成功, 2 参数校验失败, 3 数值失败, 4 I/O 错误.
"""

import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import click
from pydantic import ValidationError

from kmscurves import __version__
from kmscurves.config import RunConfig, override_settings, settings
from kmscurves.errors import (
    AmbiguousPointError,
    DomainError,
    GuardDistanceError,
    KmsCurvesError,
)

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_COMPLEX_RE = re.compile(r"^([+-]?)(\d*\.?\d*(?:e[+-]?\d+)?)i$")


def parse_complex(text: str) -> complex:
    """解析 "a+bi" 形式的复数 (允许空格，也接受 j)."""
    s = text.replace(" ", "").lower().replace("j", "i")
    if not s:
        raise ValueError("empty complex number")
    if s.endswith("i"):
        # 纯虚数或 a±bi: 补全省略的系数 1
        split = max(s.rfind("+", 1), s.rfind("-", 1))
        while split > 0 and s[split - 1] == "e":
            split = max(s.rfind("+", 1, split), s.rfind("-", 1, split))
        real_part, imag_part = (s[:split], s[split:]) if split > 0 else ("", s)
        match = _COMPLEX_RE.match(imag_part)
        if not match:
            raise ValueError(f"cannot parse imaginary part of {text!r}")
        sign, digits = match.groups()
        imag = float(digits) if digits else 1.0
        if sign == "-":
            imag = -imag
        return complex(float(real_part) if real_part else 0.0, imag)
    return complex(float(s), 0.0)


class ComplexParamType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(str(value))
        except ValueError as e:
            self.fail(f"{value!r} is not a complex number ({e})", param, ctx)


COMPLEX = ComplexParamType()


def _fail(message: str, code: int) -> None:
    click.echo(f"错误: {message}", err=True)
    sys.exit(code)


def _validation_message(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        msg = str(item.get("msg", ""))
        messages.append(msg.removeprefix("Value error, "))
    return "; ".join(messages)


@contextmanager
def _guarded() -> Iterator[None]:
    """把库异常映射为退出码."""
    try:
        yield
    except ValidationError as e:
        _fail(_validation_message(e), EXIT_VALIDATION)
    except DomainError as e:
        _fail(str(e), EXIT_VALIDATION)
    except KmsCurvesError as e:
        _fail(f"{type(e).__name__}: {e}", EXIT_NUMERICAL)
    except OSError as e:
        _fail(f"I/O: {e}", EXIT_IO)


def _tolerance_options(func):
    func = click.option("--tol-root", type=float, default=None, help="参数空间二分宽度")(func)
    func = click.option("--tol-residual", type=float, default=None, help="残差检查容差")(func)
    return func


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.10g}{z.imag:+.10g}i"


@click.group()
@click.version_option(version=__version__)
def cli():
    """kmscurves - KMS 矩阵特征值等值曲线的计算、绘制与交叉校验."""
    pass


@cli.command()
@click.option("--n", "n", type=int, help="矩阵维数 (>= 3)")
@click.option("--level", "N", type=float, default=None, help="等值 N")
@_tolerance_options
def thresholds(n: Optional[int], N: Optional[float], tol_root, tol_residual):
    """N_min(n) 以及给定 N 时的 x₀/u₀、v₀、v_im."""
    from kmscurves import thresholds as th

    with _guarded():
        cfg = RunConfig(
            subcommand="thresholds", n=n, N=N, tol_root=tol_root, tol_residual=tol_residual
        )
        with override_settings(tol_root=cfg.tol_root, tol_residual=cfg.tol_residual):
            click.echo(f"N_min({cfg.n}) = {_fmt(th.n_min(cfg.n))}")
            if cfg.N is None:
                return
            case = th.case_tag(cfg.n, cfg.N)
            click.echo(f"N = {_fmt(cfg.N)}: {case.value}")
            if cfg.N > cfg.n:
                click.echo(f"  v0 = {_fmt(th.v0(cfg.n, cfg.N))}")
                click.echo(f"  h' zero = {_fmt(th.h_stationary_point(cfg.n, cfg.N))}")
            else:
                click.echo(f"  x0 = {_fmt(th.x0(cfg.n, cfg.N))}")
                click.echo(f"  u0 = {_fmt(th.u0(cfg.n, cfg.N))}")
            if cfg.n % 2 == 1 and 1 <= cfg.N < cfg.n:
                click.echo(f"  v_im = {_fmt(th.v_im(cfg.n, cfg.N))}")


@cli.command()
@click.option("--n", "n", type=int, help="矩阵维数 (>= 3)")
@click.option("--level", "N", type=float, help="等值 N (> N_min(n))")
@click.option("--type", "k", type=click.IntRange(1, 2), help="特征值类型 1|2")
@click.option("--samples", type=int, default=2000, show_default=True, help="每个 u 区间的采样数")
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None, help="输出文件")
@_tolerance_options
def curve(n, N, k, samples, fmt, out, tol_root, tol_residual):
    """追踪 L^(k)_{n,N} 并写出 CSV 或 SVG."""
    from kmscurves import curve_engine
    from kmscurves.render import curve_to_csv, curve_to_svg, write_text

    with _guarded():
        cfg = RunConfig(
            subcommand="curve",
            n=n,
            N=N,
            k=k,
            samples=samples,
            out=out,
            format=fmt,
            tol_root=tol_root,
            tol_residual=tol_residual,
        )
        with override_settings(tol_root=cfg.tol_root, tol_residual=cfg.tol_residual):
            level_curve = curve_engine.trace_curve(cfg.n, cfg.N, cfg.k, cfg.samples, verbose=True)
            crossings = curve_engine.self_intersections(level_curve)
            cusps = curve_engine.find_cusps(level_curve) if cfg.N == cfg.n else []

            target = cfg.out or settings.output_dir / f"L{cfg.k}_{cfg.n}_N{cfg.N:g}.{cfg.format}"
            if cfg.format == "csv":
                text = curve_to_csv(level_curve)
            else:
                markers = {"self_intersections": [c.rho for c in crossings]}
                if cusps:
                    markers["cusps"] = [c.rho for c in cusps]
                text = curve_to_svg(level_curve.points, markers=markers, title=target.stem)
            path = write_text(target, text)

            summary = (
                f"samples={len(level_curve.samples)}, "
                f"real-axis crossings={curve_engine.count_real_crossings(level_curve)}, "
                f"self-intersections={len(crossings)}"
            )
            if cfg.N == cfg.n:
                summary += f", cusps={len(cusps)}"
            click.echo(summary)
            click.echo(f"结果已保存: {path}")


@cli.command()
@click.option("--n", "n", type=int, help="矩阵维数 (2..32)")
@click.option("--rho", type=COMPLEX, required=True, help="复参数 ρ，如 1+2i")
def spectrum(n, rho):
    """K_n(ρ) 按类型分类的全部特征值."""
    from kmscurves import spectral_oracle

    with _guarded():
        cfg = RunConfig(subcommand="spectrum", n=n)
        typed = spectral_oracle.typed_spectrum(cfg.n, rho)
        click.echo(f"K_{cfg.n}({_fmt_complex(rho)}):")
        click.echo("  type 1: " + ", ".join(_fmt_complex(z) for z in typed.type1))
        click.echo("  type 2: " + ", ".join(_fmt_complex(z) for z in typed.type2))
        trace = sum(typed.all)
        click.echo(f"  trace: {_fmt_complex(trace)} (expected {cfg.n}, |diff|={abs(trace - cfg.n):.2e})")
        if cfg.n == 5:
            closed = spectral_oracle.kms5_type1_closed_form(rho)
            click.echo("  closed form type 1: " + ", ".join(_fmt_complex(z) for z in closed))


@cli.command()
@click.option("--n", "n", type=int, help="矩阵维数 (>= 3)")
@click.option("--level", "N", type=float, help="等值 N")
@click.option("--type", "k", type=click.IntRange(1, 2), help="特征值类型 1|2")
@click.option("--rho", type=COMPLEX, required=True, help="查询点 ρ")
@click.option("--samples", type=int, default=2000, show_default=True)
@_tolerance_options
def count(n, N, k, rho, samples, tol_root, tol_residual):
    """由环绕数与直接求谱两种方式计算 j^(k)_{n,N}(ρ)."""
    from kmscurves import curve_engine, spectral_oracle, topology

    with _guarded():
        cfg = RunConfig(
            subcommand="count",
            n=n,
            N=N,
            k=k,
            samples=samples,
            tol_root=tol_root,
            tol_residual=tol_residual,
        )
        with override_settings(tol_root=cfg.tol_root, tol_residual=cfg.tol_residual):
            level_curve = curve_engine.trace_curve(cfg.n, cfg.N, cfg.k, cfg.samples)
            point = rho
            scale = 1e-6 * (1.0 + abs(rho))
            for attempt in range(4):
                try:
                    by_winding = topology.j_by_winding(level_curve, point)
                    by_spectrum = spectral_oracle.count_exceeding(cfg.n, point, cfg.N, cfg.k)
                    break
                except (GuardDistanceError, AmbiguousPointError) as e:
                    if attempt == 3:
                        raise
                    click.echo(f"note: {e}; perturbing rho", err=True)
                    point = rho + scale * (attempt + 1) * complex(1, 1) / abs(complex(1, 1))
            if point != rho:
                click.echo(f"rho = {_fmt_complex(point)} (perturbed)")
            click.echo(f"j_by_winding = {by_winding}")
            click.echo(f"count_exceeding = {by_spectrum}")
            click.echo("agree" if by_winding == by_spectrum else "DISAGREE")
            if by_winding != by_spectrum:
                sys.exit(EXIT_NUMERICAL)


@cli.command()
@click.option("--alpha", type=float, help="三次模型参数 α (> 0)")
@click.option("--level", "N", type=float, default=None, help="等值 N，默认 N₀(α)")
@click.option("--samples", type=int, default=2000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--rho", type=COMPLEX, default=None, help="可选: 计数查询点")
@_tolerance_options
def cubic(alpha, N, samples, fmt, out, rho, tol_root, tol_residual):
    """三次模型: 临界点、等值曲线与计数."""
    from kmscurves import cubic_model
    from kmscurves.render import auto_scale, cubic_curve_to_csv, curve_to_svg, write_text

    with _guarded():
        cfg = RunConfig(
            subcommand="cubic",
            alpha=alpha,
            N=N,
            samples=samples,
            out=out,
            format=fmt,
            tol_root=tol_root,
            tol_residual=tol_residual,
        )
        with override_settings(tol_root=cfg.tol_root, tol_residual=cfg.tol_residual):
            data = cubic_model.critical_data(cfg.alpha)
            level = cfg.N if cfg.N is not None else data.n0
            click.echo(f"N0 = {_fmt(data.n0)}")
            for m in (-1, 0, 1):
                click.echo(
                    f"  m={m:+d}: rho_c = {_fmt_complex(data.rho_c[m])}, "
                    f"lambda_c = {_fmt_complex(data.lambda_c[m])}"
                )

            level_curve = cubic_model.cubic_level_curve(cfg.alpha, level, cfg.samples)
            target = cfg.out or (
                settings.output_dir / f"cubic_a{cfg.alpha:g}_N{level:.6g}.{cfg.format}"
            )
            if cfg.format == "csv":
                text = cubic_curve_to_csv(level_curve)
            else:
                markers = {"critical_points": list(data.rho_c.values())}
                text = curve_to_svg(
                    level_curve.points,
                    markers=markers,
                    px_per_unit=auto_scale(level_curve.points),
                )
            path = write_text(target, text)
            click.echo(f"N = {_fmt(level)}, orientation={level_curve.orientation}")
            click.echo(f"结果已保存: {path}")

            if rho is not None:
                by_winding = cubic_model.j_cubic_by_winding(level_curve, rho)
                by_roots = cubic_model.count_cubic(rho, cfg.alpha, level)
                click.echo(f"j_by_winding = {by_winding}")
                click.echo(f"count_roots = {by_roots}")
                click.echo("agree" if by_winding == by_roots else "DISAGREE")


@cli.command()
@click.argument("level", type=click.Choice(["quick", "full"]), default="quick")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="报告与图数据输出目录")
@click.option("--seed", type=int, default=20240601, show_default=True)
@click.option("--quiet", is_flag=True, help="不输出阶段日志")
def verify(level, out, seed, quiet):
    """运行交叉校验套件; 任一检查失败时以非零码退出."""
    from kmscurves.verify import run_verify

    with _guarded():
        RunConfig(subcommand="verify", out=out)
        report = run_verify(level, out_dir=out, seed=seed, quiet=quiet)
        click.echo(report.summary_text())
        if out is not None:
            report.save_json(out / "verify_report.json")
            report.save_summary_md(out / "verify_summary.md")
            click.echo(f"报告已保存: {out}")
    if not report.passed:
        click.echo("失败的检查: " + ", ".join(r.name for r in report.failures), err=True)
        sys.exit(EXIT_NUMERICAL)


@cli.command()
@click.option("--out", type=click.Path(path_type=Path), default=None, help="输出目录")
@click.option("--samples", type=int, default=None, help="覆盖预设中的采样数")
def figures(out, samples):
    """按 figures.yaml 预设重新生成图数据集 (CSV + SVG)."""
    from kmscurves.figures import generate_figures

    with _guarded():
        RunConfig(subcommand="figures", out=out, samples=samples or 2000)
        target = out or settings.output_dir / "figures"
        written = generate_figures(target, samples=samples)
        click.echo(f"\n已生成 {len(written)} 个文件: {target}")


if __name__ == "__main__":
    cli()
