"""CSV / SVG 输出.

输出结构 (render_dataset):
    {out_dir}/
    ├── {name}.csv     # 曲线采样，17 位有效数字，# 开头的元数据行
    └── {name}.svg     # 单个 <path>，坐标轴，自交点与尖点标记
"""

from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from kmscurves.errors import DomainError
from kmscurves.models import CubicLevelCurve, CubicParams, CurveSample, LevelCurve, ProblemParams

KMS_COLUMNS = ("u", "v", "re_rho", "im_rho", "re_lambda", "im_lambda", "abs_lambda")
CUBIC_COLUMNS = ("theta", "re_rho", "im_rho", "re_lambda", "im_lambda", "abs_lambda")

PX_PER_UNIT = 100.0

_MARKER_COLORS = {
    "self_intersections": "#d62728",
    "cusps": "#1f77b4",
    "critical_points": "#1f77b4",
}


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


# ============================================================================
# CSV
# ============================================================================

def curve_to_csv(curve: LevelCurve) -> str:
    """LevelCurve -> CSV 文本."""
    p = curve.params
    lines = [
        f"# n={p.n} N={_fmt(p.N)} k={p.k} orientation={curve.orientation}",
        f"# case={p.case.value} samples={len(curve.samples)}",
    ]
    for orig, used in curve.substitutions:
        lines.append(f"# substitution u={_fmt(orig)} -> {_fmt(used)}")
    lines.append(",".join(KMS_COLUMNS))
    for s in curve.samples:
        row = (s.u, s.v, s.rho.real, s.rho.imag, s.lam.real, s.lam.imag, abs(s.lam))
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def cubic_curve_to_csv(curve: CubicLevelCurve) -> str:
    """CubicLevelCurve -> CSV 文本."""
    p = curve.params
    lines = [
        f"# alpha={_fmt(p.alpha)} N={_fmt(p.N)} orientation={curve.orientation}",
        f"# samples={len(curve.rho)}",
        ",".join(CUBIC_COLUMNS),
    ]
    for t, r, l in zip(curve.theta, curve.rho, curve.lam):
        row = (t, r.real, r.imag, l.real, l.imag, abs(l))
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def _parse_metadata(lines: Sequence[str]) -> dict[str, str]:
    meta: dict[str, str] = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if body.startswith("substitution"):
            meta.setdefault("substitutions", "")
            meta["substitutions"] += body[len("substitution"):].strip() + ";"
            continue
        for token in body.split():
            if "=" in token:
                key, value = token.split("=", 1)
                meta[key] = value
    return meta


def parse_csv(text: str) -> tuple[dict[str, str], list[str], np.ndarray]:
    """解析 CSV 文本，返回 (元数据, 列名, 数据矩阵)."""
    lines = [line for line in text.splitlines() if line.strip()]
    comments = [line for line in lines if line.startswith("#")]
    body = [line for line in lines if not line.startswith("#")]
    if not body:
        raise DomainError("CSV has no header row")
    columns = body[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in body[1:]]
    data = np.array(rows, dtype=float).reshape(len(rows), len(columns))
    return _parse_metadata(comments), columns, data


def read_csv(path: Path) -> tuple[dict[str, str], list[str], np.ndarray]:
    return parse_csv(Path(path).read_text(encoding="utf-8"))


def curve_from_csv(text: str) -> LevelCurve:
    """curve_to_csv 的逆操作."""
    meta, columns, data = parse_csv(text)
    if tuple(columns) != KMS_COLUMNS:
        raise DomainError(f"unexpected CSV columns: {columns}")
    params = ProblemParams(n=int(meta["n"]), N=float(meta["N"]), k=int(meta["k"]))
    samples = tuple(
        CurveSample(u=row[0], v=row[1], rho=complex(row[2], row[3]), lam=complex(row[4], row[5]))
        for row in data
    )
    substitutions = []
    for item in meta.get("substitutions", "").split(";"):
        if "->" in item:
            left, right = item.split("->")
            substitutions.append((float(left.split("=")[1]), float(right)))
    return LevelCurve(
        params=params,
        samples=samples,
        orientation=meta.get("orientation", "decreasing-u"),
        substitutions=tuple(substitutions),
    )


def cubic_curve_from_csv(text: str) -> CubicLevelCurve:
    meta, columns, data = parse_csv(text)
    if tuple(columns) != CUBIC_COLUMNS:
        raise DomainError(f"unexpected CSV columns: {columns}")
    params = CubicParams(alpha=float(meta["alpha"]), N=float(meta["N"]))
    return CubicLevelCurve(
        params=params,
        theta=data[:, 0].copy(),
        rho=data[:, 1] + 1j * data[:, 2],
        lam=data[:, 3] + 1j * data[:, 4],
        orientation=meta.get("orientation", "decreasing-theta"),
    )


# ============================================================================
# SVG
# ============================================================================

def curve_to_svg(
    points: np.ndarray,
    markers: Optional[Mapping[str, Sequence[complex]]] = None,
    title: str = "",
    px_per_unit: float = PX_PER_UNIT,
    margin: float = 20.0,
) -> str:
    """闭合折线 -> SVG 文本 (y 轴向上)."""
    pts = np.asarray(points, dtype=complex)
    markers = markers or {}
    every = [pts] + [np.asarray(list(v), dtype=complex) for v in markers.values() if len(v)]
    allpts = np.concatenate(every + [np.array([0j])])
    x_min, x_max = float(allpts.real.min()), float(allpts.real.max())
    y_min, y_max = float(allpts.imag.min()), float(allpts.imag.max())
    width = (x_max - x_min) * px_per_unit + 2 * margin
    height = (y_max - y_min) * px_per_unit + 2 * margin

    def sx(x: float) -> float:
        return (x - x_min) * px_per_unit + margin

    def sy(y: float) -> float:
        return (y_max - y) * px_per_unit + margin

    path = " ".join(
        f"{'M' if i == 0 else 'L'}{sx(z.real):.3f},{sy(z.imag):.3f}" for i, z in enumerate(pts)
    )
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
    ]
    if title:
        out.append(f"  <title>{title}</title>")
    out.append(
        f'  <line class="axis" x1="0" y1="{sy(0):.3f}" x2="{width:.1f}" y2="{sy(0):.3f}" '
        'stroke="#999" stroke-width="0.5"/>'
    )
    out.append(
        f'  <line class="axis" x1="{sx(0):.3f}" y1="0" x2="{sx(0):.3f}" y2="{height:.1f}" '
        'stroke="#999" stroke-width="0.5"/>'
    )
    out.append(f'  <path d="{path} Z" fill="none" stroke="#222" stroke-width="1"/>')
    for label, values in markers.items():
        color = _MARKER_COLORS.get(label, "#2ca02c")
        for z in values:
            out.append(
                f'  <circle class="{label}" cx="{sx(z.real):.3f}" cy="{sy(z.imag):.3f}" r="3" '
                f'fill="none" stroke="{color}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def auto_scale(points: np.ndarray, target_px: float = 400.0) -> float:
    """小曲线 (如三次模型) 放大到 target_px；不小于 PX_PER_UNIT."""
    pts = np.asarray(points, dtype=complex)
    extent = max(float(np.ptp(pts.real)), float(np.ptp(pts.imag)), 1e-12)
    return max(PX_PER_UNIT, target_px / extent)


# ============================================================================
# 输出
# ============================================================================

def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def render_dataset(
    name: str,
    curve: Union[LevelCurve, CubicLevelCurve],
    out_dir: Path,
    markers: Optional[Mapping[str, Sequence[complex]]] = None,
    verbose: bool = True,
) -> tuple[Path, Path]:
    """写出一组 CSV + SVG.

    Returns:
        (csv 路径, svg 路径)
    """
    out_dir = Path(out_dir)
    if isinstance(curve, CubicLevelCurve):
        csv_text = cubic_curve_to_csv(curve)
        scale = auto_scale(curve.rho)
        title = f"cubic alpha={curve.params.alpha:g} N={curve.params.N:.6g}"
    else:
        csv_text = curve_to_csv(curve)
        scale = PX_PER_UNIT
        p = curve.params
        title = f"L({p.k}) n={p.n} N={p.N:g}"

    csv_path = write_text(out_dir / f"{name}.csv", csv_text)
    svg_path = write_text(
        out_dir / f"{name}.svg",
        curve_to_svg(curve.points, markers=markers, title=title, px_per_unit=scale),
    )
    if verbose:
        print(f"  ✓ {name}: {csv_path.name}, {svg_path.name}", flush=True)
    return csv_path, svg_path
