"""阈值量: g, h, N_min(n), x₀, u₀, v₀, v_im 以及超越方程 h(v) = g(u) 的求解.

所有根都先用有界二分保证收敛，再用 Newton 修正.
(n, N) -> N_min / x₀ / v₀ 的结果按容差缓存.
"""

import math
from functools import lru_cache

from kmscurves.chebyshev import cheb_u, cheb_u_prime, cheb_u_second
from kmscurves.config import settings
from kmscurves.errors import DomainError
from kmscurves.models import CaseTag
from kmscurves.scalar import bisect, grow_upper, newton_polish


def _sinh_sq(x: float) -> float:
    try:
        return math.sinh(x) ** 2
    except OverflowError:
        return math.inf


def _check_n(n: int) -> None:
    if n < 3:
        raise DomainError(f"n >= 3 required, got n={n}")


def case_tag(n: int, N: float) -> CaseTag:
    """N = n 归入 Case 2."""
    return CaseTag.CASE_ONE if N > n else CaseTag.CASE_TWO


def g_eval(n: int, N: float, u: float) -> float:
    """g_{n,N}(u) = N² sin²u − sin²(nu)."""
    if abs(u) > math.pi:
        raise DomainError(f"|u| <= pi required, got u={u}")
    return N * N * math.sin(u) ** 2 - math.sin(n * u) ** 2


def g_from_x(n: int, N: float, x: float) -> float:
    """g(arccos x) 的因式分解形式 (1−x²)(N+|U|)(N−|U|)，U = U_{n-1}(x)."""
    mag = abs(cheb_u(n - 1, x))
    return (1 - x * x) * (N + mag) * (N - mag)


def h_eval(n: int, N: float, v: float) -> float:
    """h_{n,N}(v) = sinh²(nv) − N² sinh²v."""
    if v < 0:
        raise DomainError(f"v >= 0 required, got v={v}")
    return _sinh_sq(n * v) - N * N * _sinh_sq(v)


def h_prime(n: int, N: float, v: float) -> float:
    try:
        return n * math.sinh(2 * n * v) - N * N * math.sinh(2 * v)
    except OverflowError:
        return math.inf


@lru_cache(maxsize=256)
def _x0_prime_cached(n: int, tol: float, shrink: float) -> float:
    lo = math.cos(2 * math.pi / n) + shrink
    hi = math.cos(math.pi / n) - shrink

    def d(x: float) -> float:
        return cheb_u_prime(n - 1, x)

    root = bisect(d, lo, hi, tol)
    return newton_polish(d, lambda x: cheb_u_second(n - 1, x), root, lo, hi, steps=5)


def x0_prime(n: int) -> float:
    """x'₀(n): U'_{n-1} 在 (cos 2π/n, cos π/n) 内的根."""
    _check_n(n)
    return _x0_prime_cached(n, settings.tol_root, settings.nmin_bracket_shrink)


def n_min(n: int) -> float:
    """N_min(n) = |U_{n-1}(x'₀(n))|，满足 1 <= N_min(n) < n."""
    _check_n(n)
    return abs(cheb_u(n - 1, x0_prime(n)))


def n_min_estimate(n: int) -> float:
    """大 n 近似 1/sin(3π/(2n))."""
    _check_n(n)
    return 1.0 / math.sin(3 * math.pi / (2 * n))


@lru_cache(maxsize=1024)
def _x0_cached(n: int, N: float, tol: float) -> float:
    lo, hi = math.cos(math.pi / n), 1.0

    def f(x: float) -> float:
        return cheb_u(n - 1, x) - N

    root = bisect(f, lo, hi, tol, f_lo=-N, f_hi=n - N)
    return newton_polish(f, lambda x: cheb_u_prime(n - 1, x), root, lo, hi, steps=3)


def x0(n: int, N: float) -> float:
    """|U_{n-1}(x)| = N 在 (cos π/n, 1] 上的唯一解; N = n 时为 1."""
    _check_n(n)
    bound = n_min(n)
    if N <= bound:
        raise DomainError(f"N={N} <= N_min({n})={bound:.10g}")
    if N > n:
        raise DomainError(f"N={N} > n={n}: x0 is defined only for N <= n")
    if N == n:
        return 1.0
    return _x0_cached(n, float(N), settings.tol_root)


def u0(n: int, N: float) -> float:
    """u₀(n, N) = arccos x₀(n, N)，0 <= u₀ < π/n."""
    x = x0(n, N)
    if x >= 1.0:
        return 0.0
    return math.acos(x)


@lru_cache(maxsize=1024)
def _v0_cached(n: int, N: float, tol: float, cap: float) -> float:
    def f(v: float) -> float:
        return cheb_u(n - 1, math.cosh(v)) - N

    upper = grow_upper(f, 0.0, 1.0, cap)
    root = bisect(f, 0.0, upper, tol, f_lo=n - N)

    def df(v: float) -> float:
        return cheb_u_prime(n - 1, math.cosh(v)) * math.sinh(v)

    return newton_polish(f, df, root, 0.0, upper, steps=settings.newton_polish_steps)


def v0(n: int, N: float) -> float:
    """sinh(nv)/sinh(v) = N 的唯一正根 (N > n)."""
    _check_n(n)
    if N <= n:
        raise DomainError(f"N={N} <= n={n}: v0 requires N > n")
    return _v0_cached(n, float(N), settings.tol_root, settings.v_cap)


def v_im(n: int, N: float) -> float:
    """cosh(nv) = N cosh(v) 的唯一非负根 (n 为奇数，1 <= N < n)."""
    _check_n(n)
    if n % 2 == 0:
        raise DomainError(f"v_im requires odd n, got n={n}")
    if N < 1 or N >= n:
        raise DomainError(f"1 <= N < n required, got N={N}, n={n}")
    if N == 1:
        return 0.0

    def f(v: float) -> float:
        return math.cosh(n * v) / math.cosh(v) - N

    upper = grow_upper(f, 0.0, 1.0, settings.v_cap)
    root = bisect(f, 0.0, upper, settings.tol_root, f_lo=1 - N)

    def df(v: float) -> float:
        c = math.cosh(v)
        return (n * math.sinh(n * v) * c - math.cosh(n * v) * math.sinh(v)) / (c * c)

    return newton_polish(f, df, root, 0.0, upper, steps=settings.newton_polish_steps)


def h_stationary_point(n: int, N: float) -> float:
    """Case 1 中 h' 在 (0, v₀) 内的唯一零点."""
    _check_n(n)
    if N <= n:
        raise DomainError(f"N={N} <= n={n}: stationary point requires N > n")
    upper = v0(n, N)

    # h'(v)/sinh(2v) = n U_{n-1}(cosh 2v) − N²，在 v = 0 处取 n² − N² < 0
    def f(v: float) -> float:
        return n * cheb_u(n - 1, math.cosh(2 * v)) - N * N

    return bisect(f, 0.0, upper, settings.tol_root, f_lo=n * n - N * N)


def in_range(n: int, N: float, u: float, slack: float = 1e-12) -> bool:
    """u ∈ R(n, N)."""
    a = abs(u)
    if a > math.pi + slack:
        return False
    if N > n:
        return True
    lo = u0(n, N)
    return lo - slack <= a <= math.pi - lo + slack


def solve_v(n: int, N: float, u: float) -> float:
    """超越方程 h_{n,N}(v) = g_{n,N}(u) 的根 v(n, N, u).

    Case 1 的根 >= v₀(n, N)，Case 2 的根 >= 0. 只依赖 |u|.
    """
    _check_n(n)
    bound = n_min(n)
    if N <= bound:
        raise DomainError(f"N={N} <= N_min({n})={bound:.10g}")
    if not in_range(n, N, u):
        raise DomainError(f"u={u} outside R({n}, {N})")

    a = min(abs(u), math.pi)
    g = g_eval(n, N, a)
    lower = v0(n, N) if N > n else 0.0
    if g <= 0.0:
        return lower

    def f(v: float) -> float:
        return h_eval(n, N, v) - g

    f_lower = f(lower)
    if f_lower >= 0.0:
        return lower
    upper = grow_upper(f, lower, 1.0, settings.v_cap)
    root = bisect(f, lower, upper, settings.tol_root, f_lo=f_lower)
    return newton_polish(
        f,
        lambda v: h_prime(n, N, v),
        root,
        lower,
        upper,
        steps=settings.newton_polish_steps,
    )
