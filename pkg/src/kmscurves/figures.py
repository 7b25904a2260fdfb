"""图数据集的重新生成 (预设见 figures.yaml)."""

from pathlib import Path
from typing import Any, Optional

import yaml

from kmscurves import cubic_model, curve_engine
from kmscurves.errors import DomainError
from kmscurves.progress import log_stage, progress_bar
from kmscurves.render import render_dataset

PRESET_PATH = Path(__file__).parent / "figures.yaml"


def load_presets(path: Optional[Path] = None) -> dict[str, Any]:
    """读取数据集预设."""
    path = Path(path) if path is not None else PRESET_PATH
    presets = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    datasets = presets.get("datasets")
    if not isinstance(datasets, list) or not datasets:
        raise DomainError(f"{path}: 'datasets' must be a non-empty list")
    for entry in datasets:
        if entry.get("kind") not in ("kms", "cubic"):
            raise DomainError(f"{path}: unknown dataset kind in {entry}")
    return presets


def _kms_dataset(entry: dict, samples: int, out_dir: Path) -> tuple[Path, Path]:
    n, N, k = int(entry["n"]), float(entry["N"]), int(entry["k"])
    curve = curve_engine.trace_curve(n, N, k, samples)
    markers = {"self_intersections": [x.rho for x in curve_engine.self_intersections(curve)]}
    if N == n:
        markers["cusps"] = [c.rho for c in curve_engine.find_cusps(curve)]
    return render_dataset(entry["name"], curve, out_dir, markers=markers, verbose=False)


def _cubic_dataset(entry: dict, samples: int, out_dir: Path) -> tuple[Path, Path]:
    alpha = float(entry["alpha"])
    factor = float(entry.get("n0_factor", 1.0))
    data = cubic_model.critical_data(alpha)
    curve = cubic_model.cubic_level_curve(alpha, factor * data.n0, samples)
    markers = {}
    if factor == 1.0:
        markers["critical_points"] = list(data.rho_c.values())
    return render_dataset(entry["name"], curve, out_dir, markers=markers, verbose=False)


def generate_figures(
    out_dir: Path,
    samples: Optional[int] = None,
    preset_path: Optional[Path] = None,
    quiet: bool = False,
) -> list[Path]:
    """按预设写出全部 CSV + SVG.

    Returns:
        写出的文件路径列表
    """
    presets = load_presets(preset_path)
    samples = samples or int(presets.get("samples", 2000))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not quiet:
        log_stage("figures", f"{len(presets['datasets'])} 个数据集 -> {out_dir}")

    written: list[Path] = []
    for entry in progress_bar(presets["datasets"], desc="figures", disable=quiet):
        if entry["kind"] == "kms":
            paths = _kms_dataset(entry, samples, out_dir)
        else:
            paths = _cubic_dataset(entry, max(samples, 64), out_dir)
        written.extend(paths)
        if not quiet:
            log_stage("figures", f"✓ {entry['name']}", indent=1)
    return written
