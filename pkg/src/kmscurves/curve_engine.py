"""等值曲线 L^(k)_{n,N} 的生成.

参数化: μ = u + iv，v = v(n, N, u)
    type 1: ρ = sin((n+1)μ/2) / sin((n−1)μ/2),  λ = −sin(nμ)/sin(μ)
    type 2: ρ = cos((n+1)μ/2) / cos((n−1)μ/2),  λ = +sin(nμ)/sin(μ)

u 按严格递减排列. u > 0 映射到下半平面、u < 0 映射到上半平面，因此曲线自下而上
穿过正实轴，j = 1 − wind 无需额外调整符号.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

import numpy as np

from kmscurves import thresholds
from kmscurves.chebyshev import sin_ratio
from kmscurves.config import settings
from kmscurves.errors import DenominatorVanishesError, DomainError
from kmscurves.models import (
    CaseTag,
    CurveSample,
    LevelCurve,
    ProblemParams,
    SelfIntersection,
    SweepRow,
    SymmetryReport,
    URange,
)
from kmscurves.progress import log_stage, progress_bar
from kmscurves.scalar import bisect

_PARAM_EPS = 1e-9
_DEDUPE_TOL = 1e-7


# ============================================================================
# 参数范围
# ============================================================================

def _check_level(n: int, N: float) -> None:
    if n < 3:
        raise DomainError(f"n >= 3 required, got n={n}")
    bound = thresholds.n_min(n)
    if N <= bound:
        raise DomainError(f"N={N} <= N_min({n})={bound:.10g}")


def u_range(n: int, N: float) -> URange:
    """R(n, N)."""
    _check_level(n, N)
    if N > n:
        return URange(case=CaseTag.CASE_ONE, intervals=((-math.pi, math.pi),))
    u0 = thresholds.u0(n, N)
    return URange(
        case=CaseTag.CASE_TWO,
        intervals=((-math.pi + u0, -u0), (u0, math.pi - u0)),
        u0=u0,
    )


def real_axis_parameters(n: int, N: float) -> list[float]:
    """曲线与实轴相交处的参数值."""
    _check_level(n, N)
    if N > n:
        return [0.0, math.pi, -math.pi]
    u0 = thresholds.u0(n, N)
    return [u0, -u0, math.pi - u0, -math.pi + u0]


def imaginary_axis_parameters(n: int, N: float) -> list[float]:
    """奇数 n 时映射到纯虚数的参数值."""
    _check_level(n, N)
    if n % 2 == 0:
        raise DomainError(f"imaginary-axis parameters require odd n, got n={n}")
    half = math.pi / 2
    if N >= n:
        return [half, -half]
    u0 = thresholds.u0(n, N)
    return [half, -half, half + u0, half - u0, -half + u0, -half - u0]


def loop_type(n: int) -> int:
    """出现实轴外环的类型: n ≡ 1 (mod 4) 为 1，n ≡ 3 (mod 4) 为 2."""
    if n < 3 or n % 2 == 0:
        raise DomainError(f"odd n >= 3 required, got n={n}")
    return 1 if n % 4 == 1 else 2


def circle_radius(n: int, N: float) -> float:
    """N 很大时曲线趋近的圆半径 N^{1/(n−1)}."""
    return N ** (1.0 / (n - 1))


# ============================================================================
# f^(k), b^(k)
# ============================================================================

def _sin_mu(c: float, u: float, v: float, scaled: bool) -> complex:
    """sin(c(u+iv))，scaled 时去掉公因子 e^{cv}/2."""
    if scaled:
        e = math.exp(-2.0 * c * v)
        ch, sh = 1.0 + e, 1.0 - e
    else:
        ch, sh = math.cosh(c * v), math.sinh(c * v)
    return complex(math.sin(c * u) * ch, math.cos(c * u) * sh)


def _cos_mu(c: float, u: float, v: float, scaled: bool) -> complex:
    """cos(c(u+iv))，scaled 含义同上."""
    if scaled:
        e = math.exp(-2.0 * c * v)
        ch, sh = 1.0 + e, 1.0 - e
    else:
        ch, sh = math.cosh(c * v), math.sinh(c * v)
    return complex(math.cos(c * u) * ch, -math.sin(c * u) * sh)


def rho_lambda(n: int, k: int, u: float, v: float) -> tuple[complex, complex]:
    """给定 (u, v) 计算 (ρ, λ)，分子分母按实部/虚部展开求值."""
    if k not in (1, 2):
        raise DomainError(f"k must be 1 or 2, got k={k}")
    a = (n + 1) / 2.0
    b = (n - 1) / 2.0
    scaled = v > settings.scaled_eval_threshold
    part = _sin_mu if k == 1 else _cos_mu

    num = part(a, u, v, scaled)
    den = part(b, u, v, scaled)
    if abs(den) < settings.denominator_floor:
        raise DenominatorVanishesError(f"f^({k}) denominator vanishes at u={u!r}", u=u)
    rho = num / den
    if scaled:
        rho *= math.exp(v)

    sign = -1.0 if k == 1 else 1.0
    if v == 0.0:
        # sin(nu)/sin(u) = U_{n-1}(cos u)
        lam = complex(sign * sin_ratio(n, u), 0.0)
    else:
        ratio = _sin_mu(n, u, v, scaled) / _sin_mu(1, u, v, scaled)
        if scaled:
            ratio *= math.exp((n - 1) * v)
        lam = sign * ratio
    return rho, lam


def eval_point(n: int, N: float, k: int, u: float) -> CurveSample:
    """曲线上参数 u 处的点."""
    params = ProblemParams(n=n, N=N, k=k)
    _check_level(params.n, params.N)
    if not thresholds.in_range(n, N, u):
        raise DomainError(f"u={u} outside R({n}, {N})")
    v = thresholds.solve_v(n, N, u)
    rho, lam = rho_lambda(n, k, u, v)
    return CurveSample(u=float(u), v=v, rho=rho, lam=lam)


# ============================================================================
# 曲线追踪
# ============================================================================

def _merge_grid(grid: np.ndarray, extra: Iterable[float], lo: float, hi: float) -> np.ndarray:
    """把特殊参数精确插入递减网格."""
    values = list(grid)
    if len(grid) > 1:
        step = abs(grid[0] - grid[1])
    else:
        step = 1.0
    for x in extra:
        if not lo < x < hi:
            continue
        values = [g for g in values if abs(g - x) > 1e-6 * step]
        values.append(x)
    return np.array(sorted(set(values), reverse=True))


def _half_grid(n: int, N: float, samples: int) -> tuple[np.ndarray, float, float]:
    """u >= 0 一侧的递减网格及其区间端点."""
    half = math.pi / 2
    if N > n:
        lo, hi = 0.0, math.pi
        count = samples // 2 + 1
        extra = [half] if n % 2 == 1 else []
    else:
        u0 = thresholds.u0(n, N)
        lo, hi = u0, math.pi - u0
        count = samples
        extra = [half, half + u0, half - u0] if (n % 2 == 1 and N < n) else []
        if n % 2 == 1 and N == n:
            extra = [half]
    grid = np.linspace(hi, lo, count)
    grid[0], grid[-1] = hi, lo
    return _merge_grid(grid, extra, lo, hi), lo, hi


def _eval_or_perturb(
    n: int, N: float, k: int, u: float, lo: float, hi: float, delta: float
) -> tuple[CurveSample, Optional[tuple[float, float]]]:
    try:
        return eval_point(n, N, k, u), None
    except DenominatorVanishesError:
        moved = u - delta if u >= hi - 0.5 * delta else u + delta
        return eval_point(n, N, k, moved), (u, moved)


def _mirror(sample: CurveSample) -> CurveSample:
    # f(−u) = conj f(u)，b(−u) = conj b(u)
    return CurveSample(
        u=-sample.u, v=sample.v, rho=sample.rho.conjugate(), lam=sample.lam.conjugate()
    )


def _force_real(sample: CurveSample) -> CurveSample:
    return CurveSample(
        u=sample.u, v=sample.v, rho=complex(sample.rho.real, 0.0), lam=sample.lam
    )


def trace_curve(
    n: int,
    N: float,
    k: int,
    samples_per_interval: Optional[int] = None,
    verbose: bool = False,
) -> LevelCurve:
    """沿 u 递减方向追踪闭合曲线 L^(k)_{n,N}.

    Args:
        n: 矩阵维数
        N: 等值
        k: 特征值类型 (1 或 2)
        samples_per_interval: 每个 u 区间的采样数，默认取 settings.samples
        verbose: 是否输出阶段日志

    Returns:
        LevelCurve，首样本与末样本的 ρ 相同
    """
    params = ProblemParams(n=n, N=N, k=k)
    _check_level(n, N)
    samples = samples_per_interval or settings.samples
    if samples < settings.min_samples:
        raise DomainError(f"samples_per_interval >= {settings.min_samples} required, got {samples}")

    grid, lo, hi = _half_grid(n, N, samples)
    delta = abs(grid[0] - grid[1]) / 10.0
    real_params = {lo, hi}

    if verbose:
        log_stage("curve", f"L^({k})_{{{n},{N:g}}}: {params.case.value}, {len(grid)} 个半侧采样点")

    results: list[Optional[tuple[CurveSample, Optional[tuple[float, float]]]]] = [None] * len(grid)

    def evaluate(index: int) -> tuple[int, tuple[CurveSample, Optional[tuple[float, float]]]]:
        return index, _eval_or_perturb(n, N, k, float(grid[index]), lo, hi, delta)

    if settings.max_workers > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as executor:
            for index, result in executor.map(evaluate, range(len(grid))):
                results[index] = result
    else:
        for index in range(len(grid)):
            results[index] = evaluate(index)[1]

    positive: list[CurveSample] = []
    subs: list[Optional[tuple[float, float]]] = []
    for u, (sample, sub) in zip(grid, results):
        if sub is None and float(u) in real_params:
            sample = _force_real(sample)
        positive.append(sample)
        subs.append(sub)

    mirrored = list(zip(reversed(positive), reversed(subs)))
    if params.case is CaseTag.CASE_ONE:
        # u = 0 只出现一次
        mirrored = mirrored[1:]
    negative = [_mirror(s) for s, _ in mirrored]
    substitutions = [sub for sub in subs if sub is not None]
    substitutions += [(-sub[0], -sub[1]) for _, sub in mirrored if sub is not None]

    all_samples = positive + negative
    if all_samples[-1].rho != all_samples[0].rho:
        all_samples.append(all_samples[0])

    if verbose and substitutions:
        log_stage("curve", f"分母过小，{len(substitutions)} 个参数被扰动", indent=1)

    return LevelCurve(
        params=params,
        samples=tuple(all_samples),
        orientation="decreasing-u",
        substitutions=tuple(substitutions),
    )


# ============================================================================
# 自交点
# ============================================================================

def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def _segment_params(p0: complex, p1: complex, q0: complex, q1: complex) -> Optional[tuple[float, float]]:
    """两线段交点在各自上的参数 (t, s)，闭区间带容差；平行返回 None."""
    r = p1 - p0
    w = q1 - q0
    denom = _cross(r, w)
    scale = abs(r) * abs(w)
    if scale == 0.0 or abs(denom) <= 1e-14 * scale:
        return None
    d = q0 - p0
    t = _cross(d, w) / denom
    s = _cross(d, r) / denom
    if -_PARAM_EPS <= t <= 1 + _PARAM_EPS and -_PARAM_EPS <= s <= 1 + _PARAM_EPS:
        return t, s
    return None


def _candidate_pairs(points: np.ndarray) -> set[tuple[int, int]]:
    """均匀空间哈希筛选可能相交的线段对."""
    seg_count = len(points) - 1
    starts, ends = points[:-1], points[1:]
    lengths = np.abs(ends - starts)
    cell = float(lengths.max()) if seg_count else 1.0
    if cell == 0.0:
        return set()

    buckets: dict[tuple[int, int], list[int]] = {}
    for i in range(seg_count):
        if lengths[i] == 0.0:
            continue
        x0, x1 = sorted((starts[i].real, ends[i].real))
        y0, y1 = sorted((starts[i].imag, ends[i].imag))
        for cx in range(math.floor(x0 / cell), math.floor(x1 / cell) + 1):
            for cy in range(math.floor(y0 / cell), math.floor(y1 / cell) + 1):
                buckets.setdefault((cx, cy), []).append(i)

    pairs: set[tuple[int, int]] = set()
    for members in buckets.values():
        for a_pos, i in enumerate(members):
            for j in members[a_pos + 1:]:
                lo, hi = (i, j) if i < j else (j, i)
                gap = hi - lo
                if min(gap, seg_count - gap) <= 2:
                    continue
                pairs.add((lo, hi))
    return pairs


def _refine_crossing(
    func: Callable[[float], complex],
    seg_a: tuple[float, float, complex, complex],
    seg_b: tuple[float, float, complex, complex],
    tol: float,
) -> tuple[complex, float, float]:
    """在两段参数邻域内反复对半细分，保留仍相交的子段对."""
    for _ in range(80):
        ua0, ua1, pa0, pa1 = seg_a
        ub0, ub1, pb0, pb1 = seg_b
        if max(abs(pa1 - pa0), abs(pb1 - pb0)) < tol:
            break
        try:
            ma = 0.5 * (ua0 + ua1)
            mb = 0.5 * (ub0 + ub1)
            pma, pmb = func(ma), func(mb)
        except DenominatorVanishesError:
            break
        subs_a = [(ua0, ma, pa0, pma), (ma, ua1, pma, pa1)]
        subs_b = [(ub0, mb, pb0, pmb), (mb, ub1, pmb, pb1)]
        chosen = None
        for sa in subs_a:
            for sb in subs_b:
                if _segment_params(sa[2], sa[3], sb[2], sb[3]) is not None:
                    chosen = (sa, sb)
                    break
            if chosen:
                break
        if chosen is None:
            break
        seg_a, seg_b = chosen

    ua0, ua1, pa0, pa1 = seg_a
    ub0, ub1, pb0, pb1 = seg_b
    params = _segment_params(pa0, pa1, pb0, pb1)
    t, s = params if params is not None else (0.5, 0.5)
    point = pa0 + t * (pa1 - pa0)
    return point, ua0 + t * (ua1 - ua0), ub0 + s * (ub1 - ub0)


def self_intersections(curve: LevelCurve, tol: float = 1e-9) -> list[SelfIntersection]:
    """曲线的全部横截自交点 (相邻 2 段以内的线段对不检查)."""
    n, N, k = curve.params.n, curve.params.N, curve.params.k
    points = curve.rho
    us = curve.u

    def func(u: float) -> complex:
        return eval_point(n, N, k, u).rho

    found: list[SelfIntersection] = []
    for i, j in sorted(_candidate_pairs(points)):
        if _segment_params(points[i], points[i + 1], points[j], points[j + 1]) is None:
            continue
        rho, ua, ub = _refine_crossing(
            func,
            (us[i], us[i + 1], points[i], points[i + 1]),
            (us[j], us[j + 1], points[j], points[j + 1]),
            tol,
        )
        scale = max(1.0, abs(rho))
        if any(abs(rho - f.rho) < _DEDUPE_TOL * scale for f in found):
            continue
        half = "upper" if rho.imag >= 0 else "lower"
        found.append(SelfIntersection(rho=rho, u_pair=(float(ua), float(ub)), half_plane=half))
    return found


# ============================================================================
# 环与尖点
# ============================================================================

def loop_parameters(n: int, N: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """上/下半平面自交点对应的两对参数."""
    if n % 2 == 0:
        raise DomainError(f"loop points require odd n, got n={n}")
    _check_level(n, N)
    if N >= n:
        raise DomainError(f"loop points require N < n, got N={N}, n={n}")
    u0 = thresholds.u0(n, N)
    half = math.pi / 2
    return (-half - u0, -half + u0), (half + u0, half - u0)


def loop_points(n: int, N: float) -> tuple[complex, complex]:
    """(ρ_upper, ρ_lower): 奇数 n、N_min(n) < N < n 时实轴外环的自交点."""
    (upper_u, _), (lower_u, _) = loop_parameters(n, N)
    k = loop_type(n)
    upper = eval_point(n, N, k, upper_u).rho
    lower = eval_point(n, N, k, lower_u).rho
    return upper, lower


def find_cusps(curve: LevelCurve, tol: float = 1e-3) -> list[CurveSample]:
    """B^(k)_n 的尖点: b^(k)(u) = −n 的非实点."""
    n, N, k = curve.params.n, curve.params.N, curve.params.k
    if N != n:
        return []
    samples = curve.samples
    scale = max(1.0, float(np.abs(curve.rho).max()))

    def is_offaxis(s: CurveSample) -> bool:
        return abs(s.rho.imag) > 1e-6 * scale

    def im_lam(u: float) -> float:
        return eval_point(n, N, k, u).lam.imag

    cusps: list[CurveSample] = []
    for a, b in zip(samples[:-1], samples[1:]):
        if a.lam.imag == 0.0 and a.lam.real < 0 and is_offaxis(a):
            candidate = a
        elif (
            a.lam.imag * b.lam.imag < 0
            and a.lam.real < 0
            and b.lam.real < 0
            and is_offaxis(a)
            and is_offaxis(b)
            and (a.u > 0) == (b.u > 0)
        ):
            lo, hi = sorted((a.u, b.u))
            u = bisect(im_lam, lo, hi, settings.tol_root)
            candidate = eval_point(n, N, k, u)
        else:
            continue
        if abs(candidate.lam + n) >= tol:
            continue
        if any(abs(candidate.rho - c.rho) < 1e-8 * scale for c in cusps):
            continue
        cusps.append(candidate)
    return cusps


# ============================================================================
# 对称性
# ============================================================================

def _golden_min(func: Callable[[float], float], lo: float, hi: float, iters: int = 60) -> float:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - ratio * (b - a)
    d = a + ratio * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = func(d)
    return min(fc, fd, func(lo), func(hi))


def distance_to_curve(curve: LevelCurve, z: complex, neighbours: int = 4) -> float:
    """z 到曲线 (不是折线) 的距离: 最近几个样本两侧的参数区间内做黄金分割搜索."""
    n, N, k = curve.params.n, curve.params.N, curve.params.k
    points = curve.rho
    us = curve.u
    gaps = np.abs(points - z)
    nearest = np.argsort(gaps)[:neighbours]
    best = float(gaps[nearest[0]])

    def dist(u: float) -> float:
        try:
            return abs(eval_point(n, N, k, u).rho - z)
        except DenominatorVanishesError:
            return math.inf

    segments = {(int(j) - 1, int(j)) for j in nearest} | {(int(j), int(j) + 1) for j in nearest}
    for a, b in sorted(segments):
        if a < 0 or b >= len(points):
            continue
        if points[a] == points[b] or (us[a] > 0) != (us[b] > 0) and us[a] * us[b] != 0:
            continue
        best = min(best, _golden_min(dist, min(us[a], us[b]), max(us[a], us[b])))
    return best


def count_real_crossings(curve: LevelCurve) -> int:
    """曲线与实轴的交点个数: 实值样本加上严格变号的相邻样本对."""
    rho = curve.rho[:-1]
    real_points = {z.real for z in rho if z.imag == 0.0}
    signs = np.sign(rho.imag)
    strict = 0
    for a, b in zip(signs[:-1], signs[1:]):
        if a * b < 0:
            strict += 1
    return len(real_points) + strict


def symmetry_report(n: int, N: float, samples: int = 400, stride: Optional[int] = None) -> SymmetryReport:
    """数值检查两类曲线的对称性质，返回各性质的最大偏差."""
    _check_level(n, N)
    curves = {k: trace_curve(n, N, k, samples) for k in (1, 2)}
    stride = stride or max(1, len(curves[1].samples) // 40)

    def max_dev(source: LevelCurve, target: LevelCurve, transform: Callable[[complex], complex]) -> float:
        return max(
            distance_to_curve(target, transform(z)) for z in source.rho[::stride]
        )

    deviations: dict[str, float] = {}
    deviations["conjugation"] = max(
        max_dev(c, c, lambda z: z.conjugate()) for c in curves.values()
    )
    deviations["origin_union"] = max(
        min(max_dev(curves[a], curves[b], lambda z: -z) for b in (1, 2)) for a in (1, 2)
    )
    if n % 2 == 1:
        deviations["imaginary_axis"] = max(
            max_dev(c, c, lambda z: -z.conjugate()) for c in curves.values()
        )
    else:
        deviations["type_mirror"] = max(
            max_dev(curves[1], curves[2], lambda z: -z.conjugate()),
            max_dev(curves[2], curves[1], lambda z: -z.conjugate()),
        )

    crossings = {k: count_real_crossings(c) for k, c in curves.items()}
    return SymmetryReport(n=n, N=N, crossings=crossings, deviations=deviations)


# ============================================================================
# Jordan 曲线扫描
# ============================================================================

def jordan_sweep(
    ns: Iterable[int] = range(3, 13),
    samples: int = 400,
    quiet: bool = False,
) -> list[SweepRow]:
    """N >= n 时应无自交，N_min(n) < N < n 时应至少有一个自交点. 仅报告."""
    configs = []
    for n in ns:
        inner = 0.5 * (thresholds.n_min(n) + n)
        for k in (1, 2):
            for N in (float(n), 2.0 * n, 10.0 * n):
                configs.append((n, k, N, "none"))
            # n = 3 的 type-1 块为 1×1 (λ = 1 − ρ²)，曲线没有环
            configs.append((n, k, inner, "none" if (n, k) == (3, 1) else "some"))

    rows = []
    for n, k, N, expectation in progress_bar(configs, desc="jordan sweep", disable=quiet):
        curve = trace_curve(n, N, k, samples)
        count = len(self_intersections(curve))
        agrees = count == 0 if expectation == "none" else count >= 1
        rows.append(
            SweepRow(
                n=n,
                k=k,
                N=N,
                case=thresholds.case_tag(n, N),
                intersections=count,
                expectation=expectation,
                agrees=agrees,
            )
        )
    return rows
