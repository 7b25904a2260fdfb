"""环绕数与特征值计数.

    wind(L, ρ)   有向闭合折线绕 ρ 的环绕数 (转角求和)
    j = 1 − wind  KMS 等值曲线 (u 递减方向)
"""

from typing import Optional, Protocol, Union

import numpy as np

from kmscurves.config import settings
from kmscurves.errors import GuardDistanceError, InsufficientSamplingError, OrientationError
from kmscurves.models import CubicLevelCurve, LevelCurve, OrientedPolyline


class _HasPolyline(Protocol):
    def to_polyline(self) -> OrientedPolyline: ...


CurveLike = Union[OrientedPolyline, LevelCurve, CubicLevelCurve, _HasPolyline]


def distance_to_polyline(points: np.ndarray, z: complex) -> float:
    """z 到折线 (逐段) 的最小距离."""
    pts = np.asarray(points, dtype=complex)
    a, b = pts[:-1], pts[1:]
    ab = b - a
    length_sq = np.abs(ab) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(length_sq > 0, ((z - a) * np.conj(ab)).real / length_sq, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return float(np.abs(a + t * ab - z).min())


def winding_number(curve: CurveLike, point: complex) -> int:
    """有向闭合折线绕 point 的环绕数.

    Raises:
        GuardDistanceError: point 离曲线的距离小于 guard (直径的 guard_fraction 倍)
        InsufficientSamplingError: 转角和取整残差 >= winding_residual
    """
    polyline = curve.to_polyline()
    pts = polyline.points
    z = complex(point)
    guard = settings.guard_fraction * polyline.diameter
    distance = distance_to_polyline(pts, z)
    if distance <= guard:
        raise GuardDistanceError(
            f"query point {z} is {distance:.3e} from the curve (guard {guard:.3e})"
        )

    d = pts - z
    turns = float(np.angle(d[1:] / d[:-1]).sum() / (2 * np.pi))
    rounded = round(turns)
    if abs(turns - rounded) >= settings.winding_residual:
        raise InsufficientSamplingError(
            f"winding sum {turns:.4f} is not close to an integer"
        )
    return int(rounded)


def j_by_winding(curve: LevelCurve, rho: complex) -> int:
    """j^(k)_{n,N}(ρ) = 1 − wind(L^(k)_{n,N}, ρ)."""
    j = 1 - winding_number(curve, rho)
    if j < 0:
        raise OrientationError(
            f"negative count j={j} at rho={complex(rho)}: curve orientation is not decreasing-u"
        )
    return j


def probe_counts(
    curve: LevelCurve,
    start: complex,
    end: complex,
    steps: int = 200,
) -> list[Optional[int]]:
    """沿直线探针的 j 值序列，离曲线过近的点记为 None."""
    values: list[Optional[int]] = []
    for t in np.linspace(0.0, 1.0, steps):
        z = start + t * (end - start)
        try:
            values.append(j_by_winding(curve, z))
        except GuardDistanceError:
            values.append(None)
    return values
