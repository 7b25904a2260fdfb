"""数据模型定义 - 各模块之间传递的中间产物.

    ChebZeros / ChebExtrema     Chebyshev 第二类多项式的零点与极值点
    ProblemParams / CaseTag     (n, N, k) 及其所属情形
    URange                      参数 u 的取值范围 R(n, N)
    CurveSample / LevelCurve    追踪得到的等值曲线 L^(k)_{n,N}
    KmsMatrix / TypedSpectrum   谱预言机的输入与输出
    OrientedPolyline            环绕数计算使用的闭合折线
    Cubic*                      三次模型
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from kmscurves.errors import DomainError


@dataclass(frozen=True)
class ChebZeros:
    """U_k 的零点，升序."""
    k: int
    zeros: tuple[float, ...]


@dataclass(frozen=True)
class ChebExtrema:
    """U'_k 的零点，升序，与零点交错."""
    k: int
    extrema: tuple[float, ...]


class CaseTag(Enum):
    """Case 1: N > n；Case 2: N_min(n) < N <= n."""
    CASE_ONE = "CaseOne"
    CASE_TWO = "CaseTwo"


@dataclass(frozen=True)
class ProblemParams:
    """矩阵维数 n、等值 N、特征值类型 k."""
    n: int
    N: float
    k: int

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"n >= 3 required, got n={self.n}")
        if not self.N > 0:
            raise DomainError(f"N > 0 required, got N={self.N}")
        if self.k not in (1, 2):
            raise DomainError(f"k must be 1 or 2, got k={self.k}")

    @property
    def case(self) -> CaseTag:
        return CaseTag.CASE_ONE if self.N > self.n else CaseTag.CASE_TWO

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "k": self.k, "case": self.case.value}


@dataclass(frozen=True)
class URange:
    """R(n, N): Case 1 一个区间，Case 2 两个区间 (负区间在前)."""
    case: CaseTag
    intervals: tuple[tuple[float, float], ...]
    u0: Optional[float] = None


@dataclass(frozen=True)
class CurveSample:
    """曲线上的一个点: ρ = f^(k)(u), λ = b^(k)(u)."""
    u: float
    v: float
    rho: complex
    lam: complex

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "v": self.v,
            "rho": [self.rho.real, self.rho.imag],
            "lambda": [self.lam.real, self.lam.imag],
        }


@dataclass(frozen=True, eq=False)
class OrientedPolyline:
    """闭合有向折线，首点与末点相同."""
    points: np.ndarray
    orientation: str = "counterclockwise"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or len(pts) < 2 or pts[0] != pts[-1]:
            raise DomainError("polyline must be closed (first point repeated last)")
        if len(np.unique(pts[:-1])) < 4:
            raise DomainError("polyline needs at least 4 distinct points")

    @property
    def diameter(self) -> float:
        pts = self.points
        return float(max(np.ptp(pts.real), np.ptp(pts.imag)) * np.sqrt(2.0))

    def reversed(self) -> "OrientedPolyline":
        flipped = {"counterclockwise": "clockwise", "clockwise": "counterclockwise"}
        return OrientedPolyline(self.points[::-1].copy(), flipped.get(self.orientation, "reversed"))

    def to_polyline(self) -> "OrientedPolyline":
        return self


@dataclass(frozen=True, eq=False)
class LevelCurve:
    """L^(k)_{n,N}: 按 u 递减排列的闭合折线 (首样本在末尾重复)."""
    params: ProblemParams
    samples: tuple[CurveSample, ...]
    orientation: str = "decreasing-u"
    # (原参数, 实际使用的参数): 分母过小时的扰动记录
    substitutions: tuple[tuple[float, float], ...] = ()

    @property
    def rho(self) -> np.ndarray:
        return np.array([s.rho for s in self.samples], dtype=complex)

    @property
    def lam(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples], dtype=complex)

    @property
    def u(self) -> np.ndarray:
        return np.array([s.u for s in self.samples])

    @property
    def points(self) -> np.ndarray:
        return self.rho

    def to_polyline(self) -> OrientedPolyline:
        return OrientedPolyline(self.rho, orientation=self.orientation)


@dataclass(frozen=True)
class SelfIntersection:
    """自交点: 两个不同参数映射到同一 ρ."""
    rho: complex
    u_pair: tuple[float, float]
    half_plane: str  # "upper" / "lower"

    def to_dict(self) -> dict:
        return {
            "rho": [self.rho.real, self.rho.imag],
            "u_pair": list(self.u_pair),
            "half_plane": self.half_plane,
        }


@dataclass(frozen=True, eq=False)
class KmsMatrix:
    """K_n(ρ) = [ρ^{|j-l|}]."""
    n: int
    rho: complex
    entries: np.ndarray


@dataclass(frozen=True)
class TypedSpectrum:
    """按特征向量对称性分类的谱: type1 反对称, type2 对称."""
    n: int
    rho: complex
    type1: tuple[complex, ...]
    type2: tuple[complex, ...]

    def of_type(self, k: int) -> tuple[complex, ...]:
        if k == 1:
            return self.type1
        if k == 2:
            return self.type2
        raise DomainError(f"k must be 1 or 2, got k={k}")

    @property
    def all(self) -> tuple[complex, ...]:
        return self.type1 + self.type2

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rho": [self.rho.real, self.rho.imag],
            "type1": [[z.real, z.imag] for z in self.type1],
            "type2": [[z.real, z.imag] for z in self.type2],
        }


@dataclass(frozen=True)
class SymmetryReport:
    """对称性质的数值检查结果: 实轴穿越次数与各性质的最大偏差."""
    n: int
    N: float
    crossings: dict[int, int]
    deviations: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "crossings": {str(k): v for k, v in self.crossings.items()},
            "deviations": dict(self.deviations),
        }


@dataclass(frozen=True)
class SweepRow:
    """Jordan 曲线扫描的一行."""
    n: int
    k: int
    N: float
    case: CaseTag
    intersections: int
    expectation: str  # "none" / "some"
    agrees: bool


@dataclass(frozen=True)
class CubicParams:
    alpha: float
    N: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha > 0 required, got alpha={self.alpha}")
        if not self.N > 0:
            raise DomainError(f"N > 0 required, got N={self.N}")


@dataclass(frozen=True)
class CubicCriticalData:
    """三个临界点 ρ_c(m) 与对应的二重根 λ_c(m)，下标 m = -1, 0, 1."""
    alpha: float
    rho_c: dict[int, complex]
    lambda_c: dict[int, complex]
    n0: float


@dataclass(frozen=True, eq=False)
class CubicLevelCurve:
    """|λ| = N 的三次等值曲线，θ ∈ [0, 4π) 的参数化，首点在末尾重复."""
    params: CubicParams
    theta: np.ndarray
    rho: np.ndarray
    lam: np.ndarray
    orientation: str = "decreasing-theta"
    critical_theta: tuple[float, ...] = field(default_factory=tuple)

    @property
    def points(self) -> np.ndarray:
        return self.rho

    def to_polyline(self) -> OrientedPolyline:
        return OrientedPolyline(self.rho, orientation=self.orientation)
