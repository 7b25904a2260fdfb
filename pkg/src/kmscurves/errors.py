"""异常定义.

层次:
    KmsCurvesError
    ├── DomainError          参数越界 (exit 2)
    └── NumericalError       数值失败 (exit 3)
        ├── BracketOverflowError
        ├── ConvergenceError
        ├── DenominatorVanishesError
        ├── AmbiguousPointError
        ├── GuardDistanceError
        ├── InsufficientSamplingError
        ├── OrientationError
        └── ContractError
"""

from typing import Optional, Sequence


class KmsCurvesError(Exception):
    """所有库异常的基类."""


class DomainError(KmsCurvesError, ValueError):
    """输入不满足前置条件，消息中写明违反的约束."""


class NumericalError(KmsCurvesError, ArithmeticError):
    """数值计算失败."""


class BracketOverflowError(NumericalError):
    """区间扩张超过上限仍未找到变号."""


class ConvergenceError(NumericalError):
    """迭代未收敛."""

    def __init__(self, message: str, residuals: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class DenominatorVanishesError(NumericalError):
    """f^(k) 的分母过小."""

    def __init__(self, message: str, u: float):
        super().__init__(message)
        self.u = u


class AmbiguousPointError(NumericalError):
    """特征值模长与 N 的差在容差内，无法计数."""


class GuardDistanceError(NumericalError):
    """查询点离曲线太近."""


class InsufficientSamplingError(NumericalError):
    """环绕数取整残差过大."""


class OrientationError(NumericalError):
    """由环绕数得到负的计数."""


class ContractError(NumericalError):
    """内部约定被破坏."""
