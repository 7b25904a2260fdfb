"""三次模型 λ(λ − ρ − α²)² + π²α⁴/4 = 0.

等值曲线 |λ| = N 由代数反解得到: 取 λ = N e^{iθ}，
    ρ(θ) = λ − α² + i(πα²/2) λ^{−1/2},  θ ∈ [0, 4π)
计数公式 j_N(ρ) = wind(L_N, ρ) + 2.
"""

import cmath
import math
from typing import Optional

import numpy as np

from kmscurves import spectral_oracle, topology
from kmscurves.config import settings
from kmscurves.errors import (
    AmbiguousPointError,
    ContractError,
    DomainError,
    GuardDistanceError,
    InsufficientSamplingError,
    OrientationError,
)
from kmscurves.models import CubicCriticalData, CubicLevelCurve, CubicParams

_OMEGA = cmath.exp(2j * math.pi / 3)


def _shift(rho: complex, alpha: float) -> complex:
    return complex(rho) + alpha * alpha


def cubic_coefficients(rho: complex, alpha: float) -> np.ndarray:
    """首一展开 [1, −2c, c², π²α⁴/4]，c = ρ + α²."""
    CubicParams(alpha=alpha, N=1.0)
    c = _shift(rho, alpha)
    q = math.pi**2 * alpha**4 / 4
    return np.array([1.0, -2 * c, c * c, q], dtype=complex)


def _cubic_value(lam: complex, c: complex, q: float) -> complex:
    return lam * (lam - c) ** 2 + q


def _cubic_derivative(lam: complex, c: complex) -> complex:
    return (lam - c) * (3 * lam - c)


def cubic_roots(rho: complex, alpha: float) -> list[complex]:
    """三个根，Cardano 公式加受保护的 Newton 修正."""
    CubicParams(alpha=alpha, N=1.0)
    c = _shift(rho, alpha)
    q = math.pi**2 * alpha**4 / 4

    # λ = t + 2c/3: t³ + p t + r = 0
    p = -c * c / 3
    r = 2 * c**3 / 27 + q
    disc = cmath.sqrt(r * r / 4 + p**3 / 27)
    s1, s2 = -r / 2 + disc, -r / 2 - disc
    s = s1 if abs(s1) >= abs(s2) else s2
    if s == 0:
        roots = [2 * c / 3] * 3
    else:
        cube = s ** (1.0 / 3.0)
        roots = []
        for j in range(3):
            w = cube * _OMEGA**j
            roots.append(w - p / (3 * w) + 2 * c / 3)

    polished = []
    for lam in roots:
        value = _cubic_value(lam, c, q)
        for _ in range(3):
            d = _cubic_derivative(lam, c)
            if d == 0 or value == 0:
                break
            candidate = lam - value / d
            candidate_value = _cubic_value(candidate, c, q)
            if abs(candidate_value) >= abs(value):
                break
            lam, value = candidate, candidate_value
        polished.append(lam)
    return polished


def cubic_discriminant(rho: complex, alpha: float) -> tuple[complex, float]:
    """判别式及其相对大小 (除以各项模长的最大值)."""
    _, a, b, d = cubic_coefficients(rho, alpha)
    terms = [18 * a * b * d, -4 * a**3 * d, a * a * b * b, -4 * b**3, -27 * d * d]
    value = sum(terms)
    scale = max(abs(t) for t in terms)
    return value, (abs(value) / scale if scale > 0 else 0.0)


def critical_data(alpha: float) -> CubicCriticalData:
    """临界点 ρ_c(m) 与二重根 λ_c(m) = (ρ_c + α²)/3."""
    CubicParams(alpha=alpha, N=1.0)
    n0 = (math.pi * alpha**2 / 4) ** (2.0 / 3.0)
    rho_c = {}
    lambda_c = {}
    for m in (-1, 0, 1):
        phase = cmath.exp(2j * m * math.pi / 3)
        rho_c[m] = -alpha**2 - 3 * n0 * phase
        lambda_c[m] = -n0 * phase
    return CubicCriticalData(alpha=alpha, rho_c=rho_c, lambda_c=lambda_c, n0=n0)


def critical_parameters(alpha: float) -> dict[int, float]:
    """N = N₀ 曲线经过 ρ_c(m) 时的 θ."""
    CubicParams(alpha=alpha, N=1.0)
    return {-1: math.pi / 3, 0: 3 * math.pi, 1: 5 * math.pi / 3}


def m_matrix(rho: complex, alpha: float) -> np.ndarray:
    """特征多项式等于该三次式的 3×3 矩阵."""
    c = _shift(rho, alpha)
    p = math.pi * alpha**2 / 2
    return np.array([[c, 0, -p], [1, c, 1], [1, p, 0]], dtype=complex)


def m_matrix_check(rho: complex, alpha: float) -> bool:
    """M(ρ) 的特征多项式与三次式逐项比对."""
    actual = spectral_oracle.char_poly(m_matrix(rho, alpha))
    expected = cubic_coefficients(rho, alpha)
    for i, (a, e) in enumerate(zip(actual, expected)):
        if abs(a - e) > 1e-10 * max(1.0, abs(e)):
            raise ContractError(f"M(rho) characteristic coefficient {i}: {a} != {e}")
    return True


def _invert(theta: np.ndarray, alpha: float, N: float) -> tuple[np.ndarray, np.ndarray]:
    lam = N * np.exp(1j * theta)
    inv_sqrt = np.exp(-0.5j * theta) / math.sqrt(N)
    rho = lam - alpha**2 + 1j * (math.pi * alpha**2 / 2) * inv_sqrt
    return rho, lam


def _theta_grid(alpha: float, N: float, samples: int) -> tuple[np.ndarray, tuple[float, ...]]:
    grid = np.linspace(0.0, 4 * math.pi, samples, endpoint=False)
    n0 = critical_data(alpha).n0
    if abs(N - n0) > 1e-12 * n0:
        return grid, ()
    step = grid[1] - grid[0]
    extra = tuple(sorted(critical_parameters(alpha).values()))
    keep = [g for g in grid if all(abs(g - x) > 1e-6 * step for x in extra)]
    return np.array(sorted(keep + list(extra))), extra


def _calibration_points(alpha: float, N: float) -> list[complex]:
    centre = -alpha**2
    return [centre] + [centre + f * N * cmath.exp(1j * a) for f in (0.3, 0.7) for a in (0.5, 2.0)]


def cubic_level_curve(
    alpha: float,
    N: float,
    samples: int = 2000,
    orientation: Optional[str] = None,
) -> CubicLevelCurve:
    """|λ| = N 的等值曲线.

    方向按 j(ρ) = count_cubic(ρ) 校准: 优先 θ 递减；校准点全部失效时保持 θ 递减.
    """
    params = CubicParams(alpha=alpha, N=N)
    if samples < 64:
        raise DomainError(f"samples >= 64 required, got {samples}")

    theta, critical = _theta_grid(alpha, N, samples)
    rho, lam = _invert(theta, alpha, N)

    def build(direction: str) -> CubicLevelCurve:
        order = slice(None, None, -1) if direction.startswith("decreasing") else slice(None)
        t, r, l = theta[order], rho[order], lam[order]
        t = np.append(t, t[0])
        r = np.append(r, r[0])
        l = np.append(l, l[0])
        return CubicLevelCurve(
            params=params, theta=t, rho=r, lam=l, orientation=direction, critical_theta=critical
        )

    if orientation is not None:
        return build(orientation)

    candidate = build("decreasing-theta")
    for point in _calibration_points(alpha, N):
        try:
            expected = count_cubic(point, alpha, N)
            wind = topology.winding_number(candidate, point)
        except (AmbiguousPointError, GuardDistanceError, InsufficientSamplingError):
            continue
        if wind == 0:
            continue
        if wind + 2 == expected:
            return candidate
        if 2 - wind == expected:
            return build("increasing-theta")
    return build("decreasing-theta-uncalibrated")


def count_cubic(rho: complex, alpha: float, N: float) -> int:
    """模长大于 N 的根的个数 (计重数)."""
    mags = [abs(z) for z in cubic_roots(rho, alpha)]
    if any(abs(m - N) <= settings.tie_tolerance * N for m in mags):
        raise AmbiguousPointError(f"cubic root magnitude within tie tolerance of N={N} at rho={rho}")
    return sum(1 for m in mags if m > N)


def j_cubic_by_winding(curve: CubicLevelCurve, rho: complex) -> int:
    """j_N(ρ) = wind(L_N, ρ) + 2."""
    j = topology.winding_number(curve, rho) + 2
    if j < 0:
        raise OrientationError(f"negative count j={j} at rho={complex(rho)}")
    return j


def count_cubic_by_argument_principle(rho: complex, alpha: float, N: float) -> int:
    return spectral_oracle.argument_principle_count(cubic_coefficients(rho, alpha), N)
