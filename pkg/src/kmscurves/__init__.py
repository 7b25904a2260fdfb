"""kmscurves - KMS 矩阵特征值等值曲线.

K_n(ρ) = [ρ^{|j-l|}] 对复参数 ρ 的 type-k 特征值模长为 N 的轨迹 L^(k)_{n,N}:

    chebyshev        Chebyshev 多项式、零点与极值点
    thresholds       N_min(n)、x₀/u₀、v₀、v_im 以及 v(n, N, u) 的求解
    curve_engine     曲线追踪、自交点、环、尖点、对称性
    spectral_oracle  独立谱预言机 (中心对称约化 + 特征多项式 + Aberth)
    topology         环绕数与计数公式 j = 1 − wind
    cubic_model      三次模型 λ(λ − ρ − α²)² + π²α⁴/4 = 0
    verify           交叉校验套件
"""

__version__ = "0.1.0"

from kmscurves.models import (
    CaseTag,
    CubicLevelCurve,
    CurveSample,
    LevelCurve,
    OrientedPolyline,
    ProblemParams,
    TypedSpectrum,
)

__all__ = [
    "CaseTag",
    "CubicLevelCurve",
    "CurveSample",
    "LevelCurve",
    "OrientedPolyline",
    "ProblemParams",
    "TypedSpectrum",
]
