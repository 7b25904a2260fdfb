"""Chebyshev 多项式 T_k, U_k 及其导数、零点与极值点.

所有求值都走三项递推 (对复数 z 无分支问题)，标量与 numpy 数组均可.
"""

import math

from kmscurves.config import settings
from kmscurves.errors import DomainError
from kmscurves.models import ChebExtrema, ChebZeros
from kmscurves.scalar import bisect, newton_polish


def cheb_t(k: int, z):
    """第一类 Chebyshev 多项式 T_k(z)."""
    if k < 0:
        raise DomainError(f"degree k >= 0 required, got k={k}")
    one = z * 0 + 1
    if k == 0:
        return one
    prev, cur = one, z * one
    for _ in range(k - 1):
        prev, cur = cur, 2 * z * cur - prev
    return cur


def cheb_u(k: int, z):
    """第二类 Chebyshev 多项式 U_k(z)."""
    if k < 0:
        raise DomainError(f"degree k >= 0 required, got k={k}")
    one = z * 0 + 1
    if k == 0:
        return one
    prev, cur = one, 2 * z * one
    for _ in range(k - 1):
        prev, cur = cur, 2 * z * cur - prev
    return cur


def cheb_u_prime(k: int, x):
    """U'_k(x)，由求导后的递推计算 (|x| = 1 处无奇点)."""
    if k < 0:
        raise DomainError(f"degree k >= 0 required, got k={k}")
    one = x * 0 + 1
    if k == 0:
        return 0 * one
    u_prev, u_cur = one, 2 * x * one
    d_prev, d_cur = 0 * one, 2 * one
    for _ in range(k - 1):
        u_next = 2 * x * u_cur - u_prev
        d_next = 2 * u_cur + 2 * x * d_cur - d_prev
        u_prev, u_cur = u_cur, u_next
        d_prev, d_cur = d_cur, d_next
    return d_cur


def cheb_u_second(k: int, x):
    """U''_k(x)."""
    if k < 0:
        raise DomainError(f"degree k >= 0 required, got k={k}")
    one = x * 0 + 1
    if k <= 1:
        return 0 * one
    u_prev, u_cur = one, 2 * x * one
    d_prev, d_cur = 0 * one, 2 * one
    s_prev, s_cur = 0 * one, 0 * one
    for _ in range(k - 1):
        u_next = 2 * x * u_cur - u_prev
        d_next = 2 * u_cur + 2 * x * d_cur - d_prev
        s_next = 4 * d_cur + 2 * x * s_cur - s_prev
        u_prev, u_cur = u_cur, u_next
        d_prev, d_cur = d_cur, d_next
        s_prev, s_cur = s_cur, s_next
    return s_cur


def sin_ratio(k: int, u: float) -> float:
    """sin(ku)/sin(u) = U_{k-1}(cos u)，在 u = 0, ±π 处也有限."""
    if k < 1:
        raise DomainError(f"k >= 1 required, got k={k}")
    return cheb_u(k - 1, math.cos(u))


def sinh_ratio(k: int, v: float) -> float:
    """sinh(kv)/sinh(v) = U_{k-1}(cosh v)."""
    if k < 1:
        raise DomainError(f"k >= 1 required, got k={k}")
    return cheb_u(k - 1, math.cosh(v))


def u_zeros(k: int) -> ChebZeros:
    """U_k 的零点 cos((k+1-m)π/(k+1))，m = 1..k."""
    if k < 2:
        raise DomainError(f"k >= 2 required, got k={k}")
    zeros = tuple(math.cos((k + 1 - m) * math.pi / (k + 1)) for m in range(1, k + 1))
    return ChebZeros(k=k, zeros=zeros)


def u_extrema(k: int) -> ChebExtrema:
    """U'_k 的根: 在相邻零点之间二分，再用 Newton 修正."""
    if k < 2:
        raise DomainError(f"k >= 2 required, got k={k}")
    zeros = u_zeros(k).zeros

    def d(x: float) -> float:
        return cheb_u_prime(k, x)

    def dd(x: float) -> float:
        return cheb_u_second(k, x)

    extrema = []
    for lo, hi in zip(zeros[:-1], zeros[1:]):
        root = bisect(d, lo, hi, settings.tol_root)
        extrema.append(newton_polish(d, dd, root, lo, hi, steps=5))
    return ChebExtrema(k=k, extrema=tuple(extrema))
