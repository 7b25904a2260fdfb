"""独立谱预言机: 直接由 K_n(ρ) 计算按类型区分的全部特征值.

流程: build_kms → centro_split → char_poly (Faddeev–LeVerrier, 给出分层初值)
      → block_eigenvalues (Aberth–Ehrlich, 校正量由块的预解式计算)

本模块不依赖 curve_engine / thresholds，用于交叉验证.
"""

import cmath
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np

from kmscurves.config import settings
from kmscurves.errors import (
    AmbiguousPointError,
    ContractError,
    ConvergenceError,
    DomainError,
    InsufficientSamplingError,
)
from kmscurves.models import KmsMatrix, TypedSpectrum

_ANGLE_OFFSET = 0.4


def build_kms(n: int, rho: complex) -> KmsMatrix:
    """K_n(ρ) = [ρ^{|j−l|}]，幂次只计算一次."""
    if n < 2:
        raise DomainError(f"n >= 2 required, got n={n}")
    rho = complex(rho)
    powers = np.empty(n, dtype=complex)
    powers[0] = 1.0
    for m in range(1, n):
        powers[m] = powers[m - 1] * rho
    idx = np.arange(n)
    entries = powers[np.abs(idx[:, None] - idx[None, :])]
    return KmsMatrix(n=n, rho=rho, entries=entries)


def _split_basis(n: int) -> np.ndarray:
    """列依次为对称向量、(奇数 n 的) 中心向量、反对称向量."""
    half = n // 2
    q = np.zeros((n, n))
    s = 1.0 / math.sqrt(2.0)
    for i in range(half):
        q[i, i] = s
        q[n - 1 - i, i] = s
    col = half
    if n % 2 == 1:
        q[half, col] = 1.0
        col += 1
    for i in range(half):
        q[i, col + i] = s
        q[n - 1 - i, col + i] = -s
    return q


def centro_split(K: Union[KmsMatrix, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """中心对称约化，返回 (block_sym, block_skew).

    block_sym 的特征值为 type-2 谱，block_skew 的为 type-1 谱.
    """
    entries = K.entries if isinstance(K, KmsMatrix) else np.asarray(K, dtype=complex)
    n = entries.shape[0]
    if entries.shape != (n, n):
        raise ContractError(f"square matrix required, got shape {entries.shape}")
    if not np.array_equal(entries, entries[::-1, ::-1]):
        raise ContractError("matrix is not centrosymmetric")

    q = _split_basis(n)
    b = q.T @ entries @ q
    size_sym = (n + 1) // 2
    coupling = max(
        float(np.abs(b[:size_sym, size_sym:]).max(initial=0.0)),
        float(np.abs(b[size_sym:, :size_sym]).max(initial=0.0)),
    )
    scale = float(np.abs(entries).max(initial=0.0))
    if coupling >= 1e-12 * max(scale, 1e-300):
        raise ContractError(f"off-diagonal coupling {coupling:.3e} after centrosymmetric split")
    return b[:size_sym, :size_sym].copy(), b[size_sym:, size_sym:].copy()


def char_poly(M: np.ndarray) -> np.ndarray:
    """det(λI − M) 的首一系数 (最高次在前)，Faddeev–LeVerrier 迹递推."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    n = M.shape[0]
    if M.shape != (n, n):
        raise DomainError(f"square matrix required, got shape {M.shape}")
    if n > settings.max_char_poly_dim:
        raise DomainError(
            f"dimension {n} > {settings.max_char_poly_dim}: unsupported for Faddeev-LeVerrier"
        )
    coeffs = [1.0 + 0j]
    identity = np.eye(n, dtype=complex)
    aux = identity.copy()
    for k in range(1, n + 1):
        am = M @ aux
        c = -np.trace(am) / k
        coeffs.append(c)
        aux = am + c * identity
    return np.array(coeffs, dtype=complex)


def _polyval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    result = np.zeros_like(z, dtype=complex)
    for c in coeffs:
        result = result * z + c
    return result


def cluster_roots(roots: Sequence[complex], tol: Optional[float] = None) -> np.ndarray:
    """把相距 < tol·max(1, |z|) 的根 (单链接) 替换为簇均值，保持个数."""
    tol = settings.cluster_tolerance if tol is None else tol
    z = np.asarray(roots, dtype=complex).copy()
    count = len(z)
    labels = list(range(count))

    def find(i: int) -> int:
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    for i in range(count):
        for j in range(i + 1, count):
            if abs(z[i] - z[j]) < tol * max(1.0, abs(z[i]), abs(z[j])):
                labels[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(i)
    for members in groups.values():
        if len(members) > 1:
            z[members] = z[members].mean()
    return z


def _aberth(
    z: np.ndarray,
    newton_ratio: Callable[[np.ndarray], np.ndarray],
    scale: float = 1.0,
) -> tuple[np.ndarray, bool]:
    """Aberth–Ehrlich 同时迭代; newton_ratio(z) 返回各点的 p/p′.

    步长小于 aberth_step_tol·(scale + |z|) 时收敛.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(settings.aberth_max_iter):
            ratio = newton_ratio(z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = (1.0 / diff).sum(axis=1)
            step = ratio / (1.0 - ratio * repulsion)
            step = np.where(ratio == 0, 0.0, step)
            bad = ~np.isfinite(step)
            if bad.any():
                step[bad] = 1e-8 * (1.0 + np.abs(z[bad]))
            z = z - step
            if np.all(np.abs(step) < settings.aberth_step_tol * (scale + np.abs(z))):
                return z, True
    return z, False


def poly_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """首一多项式的全部根，Aberth–Ehrlich 同时迭代.

    初值取在半径 1 + max|c_i| 的圆上均匀分布. 达到迭代上限时若残差仍在容差内则接受
    (重根处线性收敛)，否则抛出 ConvergenceError.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or len(c) < 2:
        raise DomainError("polynomial of degree >= 1 required")
    if c[0] == 0:
        raise DomainError("leading coefficient must be non-zero")
    c = c / c[0]
    degree = len(c) - 1
    bound = 1.0 + float(np.abs(c[1:]).max())
    if degree == 1:
        return np.array([-c[1]])

    dc = c[:-1] * np.arange(degree, 0, -1)
    angles = 2 * np.pi * np.arange(degree) / degree + _ANGLE_OFFSET
    z, converged = _aberth(bound * np.exp(1j * angles), lambda w: _polyval(c, w) / _polyval(dc, w))

    residuals = np.abs(_polyval(c, z))
    if not converged:
        # 相对于 Σ|c_i||z|^i 的后向误差
        limit = 1e-8 * np.maximum(bound, _polyval(np.abs(c), np.abs(z)).real)
        if not np.all(residuals < limit):
            raise ConvergenceError(
                f"Aberth iteration did not converge in {settings.aberth_max_iter} steps",
                residuals=residuals.tolist(),
            )
    return z


def _layered_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Newton 多边形初值: (i, log|a_i|) 上凸包的每条边给出一层圆，点数等于边跨度."""
    degree = len(coeffs) - 1
    mags = np.abs(coeffs[::-1])
    logs = {i: math.log(mags[i]) for i in range(degree + 1) if mags[i] > 0}
    hull: list[int] = []
    for i in logs:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (logs[b] - logs[a]) * (i - a) <= (logs[i] - logs[a]) * (b - a):
                hull.pop()
            else:
                break
        hull.append(i)

    layers = []
    radii = []
    for a, b in zip(hull, hull[1:]):
        radius = math.exp((logs[a] - logs[b]) / (b - a))
        angles = 2 * np.pi * np.arange(b - a) / (b - a) + 2 * np.pi * a / degree + _ANGLE_OFFSET
        layers.append(radius * np.exp(1j * angles))
        radii.append(radius)
    zeros = hull[0]
    if zeros > 0:
        radius = 1e-8 * min(radii, default=1.0)
        angles = 2 * np.pi * np.arange(zeros) / zeros + _ANGLE_OFFSET
        layers.insert(0, radius * np.exp(1j * angles))
    return np.concatenate(layers)


def _resolvent_ratio(block: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """p/p′ = 1 / tr((λI − B)⁻¹)，由 LU 求解直接得到，不经过多项式系数."""
    eye = np.eye(block.shape[0], dtype=complex)

    def ratio(z: np.ndarray) -> np.ndarray:
        out = np.empty(len(z), dtype=complex)
        for i, zi in enumerate(z):
            try:
                out[i] = 1.0 / np.trace(np.linalg.solve(zi * eye - block, eye))
            except np.linalg.LinAlgError:
                out[i] = 0.0
        return out

    return ratio


def block_eigenvalues(block: np.ndarray) -> np.ndarray:
    """中心对称约化块的全部特征值.

    初值由 char_poly 系数的 Newton 多边形分层给出；Aberth 校正量由块本身计算，
    因此主特征值达到 |ρ|^{n−1} 量级时小特征值仍保持精度.
    """
    block = np.atleast_2d(np.asarray(block, dtype=complex))
    size = block.shape[0]
    if size == 1:
        return block[0].copy()
    norm = max(1.0, float(np.linalg.norm(block, 2)))
    coeffs = char_poly(block)
    if np.all(np.isfinite(coeffs)):
        start = _layered_guesses(coeffs)
    else:
        start = norm * np.exp(1j * (2 * np.pi * np.arange(size) / size + _ANGLE_OFFSET))
    z, converged = _aberth(start, _resolvent_ratio(block), norm)
    if not converged:
        eye = np.eye(size, dtype=complex)
        residuals = np.array(
            [np.linalg.svd(zi * eye - block, compute_uv=False)[-1] for zi in z]
        )
        limit = 1e-8 * norm
        if not np.all(residuals < limit):
            raise ConvergenceError(
                f"Aberth iteration did not converge in {settings.aberth_max_iter} steps",
                residuals=residuals.tolist(),
            )
    return z


def _sorted(values: np.ndarray) -> tuple[complex, ...]:
    return tuple(sorted((complex(v) for v in values), key=lambda w: (w.real, w.imag)))


def typed_spectrum(n: int, rho: complex) -> TypedSpectrum:
    """K_n(ρ) 的全部特征值，按 type-1 / type-2 分类."""
    if not 2 <= n <= settings.max_char_poly_dim:
        raise DomainError(f"2 <= n <= {settings.max_char_poly_dim} required, got n={n}")
    K = build_kms(n, rho)
    block_sym, block_skew = centro_split(K)
    type2 = cluster_roots(block_eigenvalues(block_sym))
    type1 = cluster_roots(block_eigenvalues(block_skew))
    return TypedSpectrum(n=n, rho=complex(rho), type1=_sorted(type1), type2=_sorted(type2))


def count_exceeding(n: int, rho: complex, N: float, k: int) -> int:
    """j^(k)_{n,N}(ρ): 模长大于 N 的 type-k 特征值个数 (计重数)."""
    spectrum = typed_spectrum(n, rho)
    mags = np.abs(np.array(spectrum.of_type(k), dtype=complex))
    gap = np.abs(mags - N)
    if np.any(gap <= settings.tie_tolerance * N):
        raise AmbiguousPointError(
            f"type-{k} eigenvalue magnitude within {settings.tie_tolerance:g}·N of N={N} "
            f"at rho={complex(rho)}"
        )
    return int(np.sum(mags > N))


def kms5_type1_closed_form(rho: complex) -> tuple[complex, complex]:
    """n = 5 时两个 type-1 特征值的显式公式."""
    rho = complex(rho)
    r2 = rho * rho
    base = 2 - r2 - r2 * r2
    spread = rho * (r2 - 1) * cmath.sqrt(r2 + 4)
    return 0.5 * (base + spread), 0.5 * (base - spread)


def _arg_increments(values: np.ndarray) -> np.ndarray:
    return np.angle(np.roll(values, -1) / values)


def _count_outside(
    evaluate: Callable[[np.ndarray], np.ndarray],
    degree: int,
    radius: float,
    points: int,
    max_points: int,
) -> int:
    m = max(points, 64 * degree)
    while m <= max_points:
        theta = 2 * np.pi * np.arange(m) / m
        values = evaluate(radius * np.exp(1j * theta))
        if np.any(values == 0):
            raise AmbiguousPointError(f"characteristic polynomial vanishes on |lambda| = {radius}")
        steps = _arg_increments(values)
        # 每步辐角变化必须远小于 π，否则可能漏计一圈
        if np.abs(steps).max() < np.pi / 4:
            inside = int(round(float(steps.sum()) / (2 * np.pi)))
            return degree - inside
        m *= 4
    raise InsufficientSamplingError(
        f"argument-principle count did not settle on |lambda| = {radius} with {max_points} points"
    )


def argument_principle_count(
    coeffs: Sequence[complex],
    radius: float,
    points: int = 2048,
    max_points: int = 1 << 18,
) -> int:
    """多项式在 |λ| > radius 内的根个数 (计重数)，由 |λ| = radius 上的辐角变化得到."""
    c = np.asarray(coeffs, dtype=complex)
    return _count_outside(lambda lam: _polyval(c, lam), len(c) - 1, radius, points, max_points)


def _det_phases(block: np.ndarray, lam: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """det(λI − B) 的辐角因子 (slogdet 的 sign)，奇异处为 0."""
    eye = np.eye(block.shape[0], dtype=complex)
    phases = np.empty(len(lam), dtype=complex)
    for start in range(0, len(lam), chunk):
        part = lam[start : start + chunk]
        sign, _ = np.linalg.slogdet(part[:, None, None] * eye - block)
        phases[start : start + chunk] = sign
    return phases


def count_by_argument_principle(
    n: int,
    rho: complex,
    N: float,
    k: int,
    points: int = 2048,
    max_points: int = 1 << 18,
) -> int:
    """不求根的计数: 沿 |λ| = N 追踪 type-k 块 det(λI − B) 的辐角."""
    if k not in (1, 2):
        raise DomainError(f"k must be 1 or 2, got k={k}")
    block_sym, block_skew = centro_split(build_kms(n, rho))
    block = block_skew if k == 1 else block_sym
    return _count_outside(
        lambda lam: _det_phases(block, lam), block.shape[0], N, points, max_points
    )
