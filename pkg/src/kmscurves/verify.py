"""交叉校验套件 (kmscurves verify quick|full).

quick: n <= 8，粗网格，数秒内完成.
full:  全部验收条目，外加 Jordan 扫描 (仅报告) 与图数据集重新生成.

曲线一律通过 curve_engine.trace_curve 获取，测试中可以替换该函数模拟错误实现.
"""

import math
from pathlib import Path
from typing import Optional

import numpy as np

from kmscurves import (
    chebyshev,
    cubic_model,
    curve_engine,
    figures,
    spectral_oracle,
    thresholds,
    topology,
)
from kmscurves.config import settings
from kmscurves.errors import (
    AmbiguousPointError,
    DomainError,
    GuardDistanceError,
    InsufficientSamplingError,
    OrientationError,
)
from kmscurves.models import LevelCurve
from kmscurves.progress import HeartbeatMonitor, log_stage, progress_bar
from kmscurves.stats import CheckRecord, VerifyReport

QUICK_CONFIGS = ((5, 3.0, 1), (5, 30.0, 1), (8, 1.85, 2))
FULL_CONFIGS = ((5, 3.0, 1), (5, 30.0, 1), (8, 1.85, 2), (11, 5.0, 2), (12, 20.0, 2))

CUBIC_ALPHA = 0.1
CUBIC_FACTORS = (0.5, 1.0, 1.4)

# 大 N 曲线相对圆 |ρ| = N^{1/(n−1)} 的偏差上限; 实测 (5, 30, 1) 约 0.075，(12, 200, 2) 约 0.053
CIRCLE_BAND = 0.10

_SKIP = (AmbiguousPointError, GuardDistanceError, InsufficientSamplingError)


def _close(a: complex, b: complex, tol: float) -> bool:
    return abs(complex(a) - complex(b)) < tol


# ============================================================================
# 锚点
# ============================================================================

def check_nmin_anchors(record: CheckRecord, full: bool) -> None:
    values = {3: thresholds.n_min(3), 5: thresholds.n_min(5), 8: thresholds.n_min(8)}
    ok = (
        abs(values[3] - 1.0) < 1e-10
        and abs(values[5] - 1.25) < 1e-10
        and abs(values[8] - 1.833) < 5e-4
    )
    detail = ", ".join(f"N_min({n})={v:.10g}" for n, v in values.items())
    if full:
        ratio = thresholds.n_min(200) / 200
        ok = ok and abs(ratio - 0.21) < 0.01
        detail += f", N_min(200)/200={ratio:.5f}"
    record.passed = ok
    record.detail = detail


def check_cusp_anchor(record: CheckRecord) -> None:
    type1 = spectral_oracle.typed_spectrum(5, 2j).type1
    closed = spectral_oracle.kms5_type1_closed_form(2j)
    record.passed = all(_close(z, -5, 1e-6) for z in type1) and all(
        _close(z, -5, 1e-6) for z in closed
    )
    record.detail = f"type1(2i)={[complex(round(z.real, 8), round(z.imag, 8)) for z in type1]}"


def check_loop_anchor(record: CheckRecord) -> None:
    upper, lower = curve_engine.loop_points(5, 3.0)
    root2 = math.sqrt(2.0)
    type1 = spectral_oracle.typed_spectrum(5, 1j * root2).type1
    record.passed = (
        _close(upper, 1j * root2, 1e-6)
        and _close(lower, -1j * root2, 1e-6)
        and len(type1) == 2
        and _close(min(type1, key=lambda z: z.imag), -3j, 1e-6)
        and _close(max(type1, key=lambda z: z.imag), 3j, 1e-6)
    )
    record.detail = f"loop_points(5,3)=({upper:.8f}, {lower:.8f})"


# ============================================================================
# 曲线与预言机
# ============================================================================

def check_curve_oracle(record: CheckRecord, configs) -> None:
    """曲线上每个样本处，预言机的 type-k 谱中有模长为 N 且等于 b^(k)(u) 的特征值."""
    worst_level = 0.0
    worst_match = 0.0
    for n, N, k in configs:
        curve = curve_engine.trace_curve(n, N, k, 64)
        for sample in curve.samples[:-1]:
            eigs = np.array(spectral_oracle.typed_spectrum(n, sample.rho).of_type(k))
            worst_level = max(worst_level, float(np.min(np.abs(np.abs(eigs) - N)) / N))
            match = float(np.min(np.abs(eigs - sample.lam))) / max(1.0, abs(sample.lam))
            worst_match = max(worst_match, match)
    record.passed = worst_level < 1e-6 and worst_match < 1e-6
    record.detail = f"max ||λ|-N|/N={worst_level:.2e}, max |λ-b|={worst_match:.2e}"


def agreement_points(curve: LevelCurve, count: int, rng: np.random.Generator) -> list[complex]:
    """随机离线点: 自交点周围的探针点 + 覆盖曲线的圆盘内均匀随机点."""
    polyline = curve.to_polyline()
    diameter = polyline.diameter
    min_distance = 1e-4 * diameter
    points: list[complex] = []

    def accept(z: complex) -> None:
        if len(points) < count and topology.distance_to_polyline(polyline.points, z) > min_distance:
            points.append(z)

    angles = np.linspace(0.0, 2 * np.pi, 16, endpoint=False) + np.pi / 16
    for crossing in curve_engine.self_intersections(curve):
        for radius in (0.02 * diameter, 0.005 * diameter):
            for a in angles:
                if len(points) >= count // 2:
                    break
                accept(crossing.rho + radius * np.exp(1j * a))

    centre = complex(np.mean(polyline.points))
    reach = 0.75 * diameter
    attempts = 0
    while len(points) < count and attempts < 50 * count:
        attempts += 1
        r = reach * math.sqrt(rng.random())
        accept(centre + r * np.exp(2j * np.pi * rng.random()))
    return points


def check_j_agreement(
    record: CheckRecord,
    configs,
    points_per_config: int,
    samples: int,
    rng: np.random.Generator,
    require_values: Optional[dict] = None,
    quiet: bool = True,
) -> None:
    """j_by_winding 与 count_exceeding 逐点一致."""
    mismatches: list[str] = []
    seen: dict[tuple, set[int]] = {}
    tested = 0
    for n, N, k in configs:
        curve = curve_engine.trace_curve(n, N, k, samples)
        values = seen.setdefault((n, N, k), set())
        for z in progress_bar(
            agreement_points(curve, points_per_config, rng), desc=f"j ({n},{N:g},{k})", disable=quiet
        ):
            try:
                expected = spectral_oracle.count_exceeding(n, z, N, k)
            except _SKIP:
                continue
            try:
                got = topology.j_by_winding(curve, z)
            except _SKIP:
                continue
            except OrientationError:
                got = None
            tested += 1
            values.add(expected)
            if got != expected:
                mismatches.append(f"({n},{N:g},{k}) at {z:.6g}: winding {got} vs oracle {expected}")

    missing = []
    for key, wanted in (require_values or {}).items():
        if not set(wanted) <= seen.get(key, set()):
            missing.append(f"{key} missing j values {sorted(set(wanted) - seen.get(key, set()))}")

    record.passed = not mismatches and not missing and tested > 0
    parts = [f"{tested} points, {len(mismatches)} mismatches"]
    parts += mismatches[:3] + missing
    record.detail = "; ".join(parts)


def check_argument_principle(record: CheckRecord, rng: np.random.Generator) -> None:
    """辐角原理计数与求根计数一致."""
    disagreements = 0
    tested = 0
    for n, N, k in QUICK_CONFIGS:
        for _ in range(10):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            try:
                expected = spectral_oracle.count_exceeding(n, z, N, k)
                got = spectral_oracle.count_by_argument_principle(n, z, N, k)
            except _SKIP:
                continue
            tested += 1
            disagreements += got != expected
    record.passed = disagreements == 0 and tested > 0
    record.detail = f"{tested} points, {disagreements} disagreements"


def check_large_n_circle(record: CheckRecord) -> None:
    worst = {}
    for n, N, k in ((5, 30.0, 1), (12, 200.0, 2)):
        curve = curve_engine.trace_curve(n, N, k, 400)
        radius = curve_engine.circle_radius(n, N)
        worst[(n, N, k)] = float(np.max(np.abs(np.abs(curve.rho) - radius)) / radius)
    record.passed = all(v < CIRCLE_BAND for v in worst.values())
    record.detail = ", ".join(f"{key}: {v:.4f}" for key, v in worst.items())


def check_loop_shrink(record: CheckRecord) -> None:
    upper, _ = curve_engine.loop_points(5, 4.999)
    record.passed = abs(upper - 2j) < 0.05
    record.detail = f"|upper - 2i| = {abs(upper - 2j):.4f}"


def check_cusp_counts(record: CheckRecord) -> None:
    counts = {}
    for n, k in ((5, 1), (12, 2)):
        curve = curve_engine.trace_curve(n, float(n), k, 2000)
        counts[(n, k)] = len(curve_engine.find_cusps(curve))
    record.passed = counts == {(5, 1): 2, (12, 2): 10}
    record.detail = ", ".join(f"B({k})_{n}: {c} cusps" for (n, k), c in counts.items())


def check_symmetry(record: CheckRecord) -> None:
    worst = 0.0
    crossings = []
    for n, N in ((5, 3.0), (8, 1.85), (12, 20.0)):
        report = curve_engine.symmetry_report(n, N, samples=400)
        scale = max(1.0, curve_engine.circle_radius(n, N))
        worst = max(worst, max(report.deviations.values()) / scale)
        crossings.append(f"n={n}: {report.crossings}")
    record.passed = worst < 1e-6
    record.detail = f"max deviation {worst:.2e}; real-axis crossings " + ", ".join(crossings)


def check_jordan_sweep(record: CheckRecord, quiet: bool) -> None:
    rows = curve_engine.jordan_sweep(range(3, 13), samples=400, quiet=quiet)
    flagged = [r for r in rows if not r.agrees]
    record.passed = not flagged
    record.detail = f"{len(rows) - len(flagged)}/{len(rows)} rows as expected" + "".join(
        f"; n={r.n} k={r.k} N={r.N:.4g}: {r.intersections} self-intersections" for r in flagged[:5]
    )


# ============================================================================
# 三次模型
# ============================================================================

def check_cubic(
    record: CheckRecord, points_per_level: int, matrices: int, rng: np.random.Generator
) -> None:
    alpha = CUBIC_ALPHA
    data = cubic_model.critical_data(alpha)
    problems: list[str] = []

    for m, rho_c in data.rho_c.items():
        _, relative = cubic_model.cubic_discriminant(rho_c, alpha)
        if relative >= 1e-10:
            problems.append(f"discriminant at rho_c({m}) = {relative:.2e}")

    centre = -alpha**2
    target = 2 ** (2.0 / 3.0) * data.n0
    for root in cubic_model.cubic_roots(centre, alpha):
        if abs(abs(root) - target) >= 1e-10:
            problems.append(f"|root| at -alpha^2 = {abs(root):.12g}, expected {target:.12g}")

    for _ in range(matrices):
        rho = complex(rng.normal(), rng.normal())
        cubic_model.m_matrix_check(rho, alpha)

    tested = 0
    for factor in CUBIC_FACTORS:
        N = factor * data.n0
        curve = cubic_model.cubic_level_curve(alpha, N, 2000)
        j_centre = cubic_model.j_cubic_by_winding(curve, centre)
        if j_centre != 3 or cubic_model.count_cubic(centre, alpha, N) != 3:
            problems.append(f"j_N(-alpha^2) = {j_centre} at N = {factor} N0")
        reach = 2.0 * (N + math.pi * alpha**2 / (2 * math.sqrt(N)))
        for _ in range(points_per_level):
            z = centre + reach * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            try:
                expected = cubic_model.count_cubic(z, alpha, N)
                got = cubic_model.j_cubic_by_winding(curve, z)
            except _SKIP:
                continue
            except OrientationError:
                got = None
            tested += 1
            if got != expected:
                problems.append(f"N={factor} N0 at {z:.6g}: winding {got} vs roots {expected}")

    record.passed = not problems
    record.detail = f"N0={data.n0:.6g}, {tested} random points" + "".join(
        f"; {p}" for p in problems[:4]
    )


# ============================================================================
# Chebyshev
# ============================================================================

def check_chebyshev(record: CheckRecord, count: int, rng: np.random.Generator) -> None:
    """有界性、[1, ∞) 上的单调性、求和恒等式、sin 比值界."""
    problems: list[str] = []
    x = rng.uniform(-1.0, 1.0, count)
    x1 = rng.uniform(1.0, 3.0, count)
    x2 = x1 + rng.uniform(1e-6, 1.0, count)
    z = 2.0 * np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))
    u = rng.uniform(-10.0, 10.0, count)

    for k in range(0, 21):
        t, uk = chebyshev.cheb_t(k, x), chebyshev.cheb_u(k, x)
        if np.any(np.abs(t) > 1 + 1e-12) or np.any(np.abs(uk) > k + 1 + 1e-9):
            problems.append(f"boundedness k={k}")
        if k >= 1:
            if np.any(chebyshev.cheb_t(k, x1) >= chebyshev.cheb_t(k, x2)):
                problems.append(f"T monotonicity k={k}")
            if np.any(chebyshev.cheb_u(k, x1) >= chebyshev.cheb_u(k, x2)):
                problems.append(f"U monotonicity k={k}")
            ratio = chebyshev.cheb_u(k - 1, np.cos(u))
            if np.any(np.abs(ratio) > k + 1e-9):
                problems.append(f"sin ratio k={k}")
        terms = [z**m * chebyshev.cheb_t(k - m, z) for m in range(k + 1)]
        total = np.sum(terms, axis=0)
        scale = np.sum(np.abs(terms), axis=0) + 1.0
        if np.any(np.abs(chebyshev.cheb_u(k, z) - total) > 1e-10 * scale):
            problems.append(f"summation identity k={k}")

    for k in range(2, 21):
        zeros = chebyshev.u_zeros(k).zeros
        extrema = chebyshev.u_extrema(k).extrema
        if not all(a < b < c for a, b, c in zip(zeros[:-1], extrema, zeros[1:])):
            problems.append(f"interlacing k={k}")

    record.passed = not problems
    record.detail = f"{count} samples, k <= 20" + "".join(f"; {p}" for p in problems[:4])


# ============================================================================
# 入口
# ============================================================================

def run_verify(
    level: str = "quick",
    out_dir: Optional[Path] = None,
    seed: int = 20240601,
    quiet: bool = False,
) -> VerifyReport:
    """运行校验套件.

    Args:
        level: "quick" 或 "full"
        out_dir: full 级别写出图数据集的目录，默认 settings.output_dir / "figures"
        seed: 随机点生成的种子
        quiet: 不输出阶段日志和进度条

    Returns:
        VerifyReport；report.passed 为 False 时 CLI 以非零码退出
    """
    if level not in ("quick", "full"):
        raise DomainError(f"verify level must be 'quick' or 'full', got {level!r}")
    full = level == "full"
    rng = np.random.default_rng(seed)
    report = VerifyReport(level=level)
    report.start()

    heartbeat = HeartbeatMonitor(f"verify {level}", interval=30, verbose=full and not quiet)

    def step(name: str) -> None:
        heartbeat.current = name
        if not quiet:
            log_stage("verify", name)

    with heartbeat:
        step("nmin-anchors")
        with report.check("nmin-anchors") as record:
            check_nmin_anchors(record, full)

        step("cusp-anchor")
        with report.check("cusp-anchor") as record:
            check_cusp_anchor(record)

        step("loop-anchor")
        with report.check("loop-anchor") as record:
            check_loop_anchor(record)

        configs = FULL_CONFIGS if full else QUICK_CONFIGS
        step("curve-oracle")
        with report.check("curve-oracle") as record:
            check_curve_oracle(record, configs)

        step("j-agreement")
        with report.check("j-agreement") as record:
            if full:
                check_j_agreement(
                    record,
                    FULL_CONFIGS,
                    points_per_config=200,
                    samples=2000,
                    rng=rng,
                    require_values={(8, 1.85, 2): {0, 1, 2, 3}},
                    quiet=quiet,
                )
            else:
                check_j_agreement(
                    record, ((5, 3.0, 1), (8, 1.85, 2)), points_per_config=40, samples=400, rng=rng
                )

        step("argument-principle")
        with report.check("argument-principle") as record:
            check_argument_principle(record, rng)

        step("cubic")
        with report.check("cubic") as record:
            check_cubic(record, 200 if full else 20, 20 if full else 5, rng)

        step("chebyshev")
        with report.check("chebyshev") as record:
            check_chebyshev(record, 10_000 if full else 500, rng)

        if full:
            step("large-n-circle")
            with report.check("large-n-circle") as record:
                check_large_n_circle(record)

            step("loop-shrink")
            with report.check("loop-shrink") as record:
                check_loop_shrink(record)

            step("cusp-counts")
            with report.check("cusp-counts") as record:
                check_cusp_counts(record)

            step("symmetry")
            with report.check("symmetry") as record:
                check_symmetry(record)

            step("jordan-sweep")
            with report.check("jordan-sweep", advisory=True) as record:
                check_jordan_sweep(record, quiet)

            step("figures")
            with report.check("figures") as record:
                target = Path(out_dir) if out_dir is not None else settings.output_dir
                written = figures.generate_figures(target / "figures", quiet=quiet)
                expected = 2 * len(figures.load_presets()["datasets"])
                record.passed = len(written) == expected
                record.detail = f"{len(written)} files in {target / 'figures'}"

    report.finish()
    return report
