"""标量求根: 有界二分 + 受保护的 Newton 修正."""

import math
from typing import Callable, Optional

from kmscurves.errors import BracketOverflowError, DomainError

_MAX_BISECTIONS = 400


def bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    f_lo: Optional[float] = None,
    f_hi: Optional[float] = None,
) -> float:
    """在 [lo, hi] 内二分求根，直到区间宽度 < tol.

    要求 func(lo) 与 func(hi) 异号 (允许一端恰为 0).
    """
    f_lo = func(lo) if f_lo is None else f_lo
    f_hi = func(hi) if f_hi is None else f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise DomainError(f"root not bracketed in [{lo!r}, {hi!r}]")

    for _ in range(_MAX_BISECTIONS):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def newton_polish(
    func: Callable[[float], float],
    dfunc: Callable[[float], float],
    x: float,
    lo: float,
    hi: float,
    steps: int,
) -> float:
    """从 x 出发做至多 steps 次 Newton 迭代.

    越出 [lo, hi] 或残差变大的步被拒绝，保留原值.
    """
    fx = func(x)
    for _ in range(steps):
        if fx == 0.0:
            break
        d = dfunc(x)
        if d == 0.0 or not math.isfinite(d):
            break
        candidate = x - fx / d
        if not lo <= candidate <= hi:
            break
        f_candidate = func(candidate)
        if abs(f_candidate) >= abs(fx):
            break
        x, fx = candidate, f_candidate
    return x


def grow_upper(
    func: Callable[[float], float],
    start: float,
    width: float,
    cap: float,
) -> float:
    """从 start 向右成倍扩张区间，直到 func(upper) >= 0.

    超过 cap 时抛出 BracketOverflowError.
    """
    upper = start + width
    while True:
        if upper > cap:
            upper = cap
            if func(upper) >= 0:
                return upper
            raise BracketOverflowError(f"no sign change below v_cap={cap}")
        if func(upper) >= 0:
            return upper
        width *= 2.0
        upper = start + width
