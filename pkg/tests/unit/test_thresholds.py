"""Unit tests for threshold quantities and the v(n, N, u) solve."""

import math

import numpy as np
import pytest

from kmscurves import thresholds as th
from kmscurves.chebyshev import cheb_u
from kmscurves.errors import BracketOverflowError, DomainError
from kmscurves.models import CaseTag
from kmscurves.scalar import bisect, grow_upper, newton_polish


class TestScalar:
    """测试二分 / Newton / 区间扩张."""

    def test_bisect(self):
        root = bisect(lambda x: x * x - 2, 0.0, 2.0, 1e-14)
        assert root == pytest.approx(math.sqrt(2), abs=1e-13)

    def test_bisect_requires_bracket(self):
        with pytest.raises(DomainError):
            bisect(lambda x: x * x + 1, -1.0, 1.0, 1e-12)

    def test_bisect_endpoint_root(self):
        assert bisect(lambda x: x, 0.0, 1.0, 1e-12) == 0.0

    def test_newton_rejects_leaving_bracket(self):
        # 从 0.1 出发的 Newton 步会跳出 [0, 0.5]
        x = newton_polish(lambda x: x**3 - 2 * x + 2, lambda x: 3 * x * x - 2, 0.1, 0.0, 0.5, 5)
        assert x == 0.1

    def test_grow_upper(self):
        upper = grow_upper(lambda v: v - 5.0, 0.0, 1.0, 50.0)
        assert upper >= 5.0

    def test_grow_upper_overflow(self):
        with pytest.raises(BracketOverflowError):
            grow_upper(lambda v: -1.0, 0.0, 1.0, 50.0)


class TestNMin:
    """测试 N_min(n)."""

    def test_anchor_values(self, anchors):
        for n, value in anchors["n_min"].items():
            assert th.n_min(int(n)) == pytest.approx(value, abs=1e-10)

    def test_n_eight(self, anchors):
        ref = anchors["n_min_approx"]["8"]
        assert th.n_min(8) == pytest.approx(ref["value"], abs=ref["tol"])

    def test_linear_growth(self, anchors):
        ref = anchors["n_min_approx"]["200"]
        assert th.n_min(200) / 200 == pytest.approx(ref["ratio"], abs=ref["tol"])

    def test_bounds(self):
        for n in range(3, 30):
            assert 1 <= th.n_min(n) < n

    def test_x0_prime(self, anchors):
        assert th.x0_prime(5) == pytest.approx(anchors["x0_prime"]["5"], abs=1e-12)

    def test_estimate_tracks_n_min(self):
        for n in (50, 100, 200):
            assert 0.95 < th.n_min_estimate(n) / th.n_min(n) < 1.0

    def test_small_n(self):
        with pytest.raises(DomainError):
            th.n_min(2)


class TestX0U0:
    """测试 Case 2 的 x₀, u₀."""

    def test_anchor(self, anchors):
        ref = anchors["x0"]["5,3"]
        assert th.x0(5, 3.0) == pytest.approx(ref["value"], abs=ref["tol"])
        ref = anchors["u0"]["5,3"]
        assert th.u0(5, 3.0) == pytest.approx(ref["value"], abs=ref["tol"])

    def test_solves_equation(self):
        for n, N in ((5, 3.0), (8, 1.85), (11, 5.0), (12, 7.0)):
            assert cheb_u(n - 1, th.x0(n, N)) == pytest.approx(N, rel=1e-10)

    def test_borderline(self):
        assert th.x0(5, 5.0) == 1.0
        assert th.u0(5, 5.0) == 0.0

    def test_u0_below_pi_over_n(self):
        for N in (1.3, 2.0, 3.0, 4.9):
            assert 0 < th.u0(5, N) < math.pi / 5

    def test_rejects_case_one(self):
        with pytest.raises(DomainError):
            th.x0(5, 6.0)

    def test_rejects_below_n_min(self):
        with pytest.raises(DomainError, match=r"N_min\(5\)"):
            th.x0(5, 1.2)


class TestV0:
    def test_anchor(self, anchors):
        assert th.v0(3, 7.0) == pytest.approx(anchors["v0"]["3,7"], abs=1e-12)

    def test_solves_equation(self):
        v = th.v0(12, 200.0)
        assert math.sinh(12 * v) / math.sinh(v) == pytest.approx(200.0, rel=1e-10)

    def test_requires_case_one(self):
        with pytest.raises(DomainError):
            th.v0(5, 5.0)

    def test_h_stationary_point(self):
        """h' 的零点等于 ½ v₀(n, N²/n)."""
        for n, N in ((5, 6.0), (5, 30.0), (12, 20.0)):
            v = th.h_stationary_point(n, N)
            assert 0 < v < th.v0(n, N)
            assert v == pytest.approx(0.5 * th.v0(n, N * N / n), abs=1e-10)
            assert th.h_prime(n, N, v) == pytest.approx(0.0, abs=1e-8 * N * N)


class TestVIm:
    def test_anchor(self, anchors):
        assert th.v_im(3, 2.0) == pytest.approx(anchors["v_im"]["3,2"], abs=1e-12)

    def test_level_one(self):
        assert th.v_im(5, 1.0) == 0.0

    def test_solves_equation(self):
        v = th.v_im(5, 3.0)
        assert math.cosh(5 * v) == pytest.approx(3.0 * math.cosh(v), rel=1e-10)

    def test_even_n_rejected(self):
        with pytest.raises(DomainError):
            th.v_im(6, 3.0)


class TestGH:
    """测试 g, h 及其因式分解形式."""

    def test_case_tag(self):
        assert th.case_tag(5, 5.0) is CaseTag.CASE_TWO
        assert th.case_tag(5, 5.5) is CaseTag.CASE_ONE

    def test_g_factorized(self, rng):
        for x in rng.uniform(-1, 1, 50):
            assert th.g_from_x(7, 3.0, x) == pytest.approx(
                th.g_eval(7, 3.0, math.acos(x)), abs=1e-10
            )

    def test_g_domain(self):
        with pytest.raises(DomainError):
            th.g_eval(5, 3.0, 4.0)

    def test_h_domain(self):
        with pytest.raises(DomainError):
            th.h_eval(5, 3.0, -0.1)

    def test_h_prime_matches_difference(self):
        v, h = 0.4, 1e-6
        fd = (th.h_eval(5, 3.0, v + h) - th.h_eval(5, 3.0, v - h)) / (2 * h)
        assert th.h_prime(5, 3.0, v) == pytest.approx(fd, rel=1e-6)

    @pytest.mark.parametrize("n,N", [(5, 3.0), (8, 4.0), (11, 5.0)])
    def test_g_sign_case_two(self, n, N):
        """Case 2: (u₀, π − u₀) 内 g > 0，两侧 g < 0，边界处为零."""
        lo = th.u0(n, N)
        hi = math.pi - lo
        for u in np.linspace(0.0, math.pi, 1001):
            if min(abs(u - b) for b in (0.0, lo, hi, math.pi)) < 1e-6:
                continue
            g = th.g_eval(n, N, u)
            assert (g > 0) if lo < u < hi else (g < 0), u
            assert th.g_eval(n, N, -u) == g
        for b in (0.0, lo, hi, math.pi):
            assert abs(th.g_eval(n, N, b)) < 1e-10

    @pytest.mark.parametrize("n,N", [(5, 30.0), (12, 20.0)])
    def test_g_sign_case_one(self, n, N):
        """Case 1: g >= 0，只在 u = 0, ±π 处为零."""
        for u in np.linspace(-math.pi, math.pi, 1001)[1:-1]:
            if abs(u) < 1e-6:
                continue
            assert th.g_eval(n, N, u) > 0, u
        for b in (0.0, math.pi, -math.pi):
            assert abs(th.g_eval(n, N, b)) < 1e-10

    @pytest.mark.parametrize("n,N", [(5, 30.0), (12, 20.0)])
    def test_h_sign_case_one(self, n, N):
        """Case 1: h 在 (0, v₀) 内为负，v₀ 处为零，之后为正且严格递增."""
        v0 = th.v0(n, N)
        for v in np.linspace(0.0, v0, 201)[1:-1]:
            assert th.h_eval(n, N, v) < 0, v
        assert th.h_eval(n, N, 0.0) == 0.0
        assert abs(th.h_eval(n, N, v0)) < 1e-8 * math.sinh(n * v0) ** 2
        beyond = [th.h_eval(n, N, v) for v in v0 * (1 + np.linspace(0.01, 2.0, 50))]
        assert all(h > 0 for h in beyond)
        assert all(b > a for a, b in zip(beyond, beyond[1:]))


class TestSolveV:
    """测试超越方程 h(v) = g(u)."""

    @pytest.mark.parametrize("n,N", [(5, 3.0), (5, 30.0), (8, 1.85), (12, 200.0)])
    def test_residual(self, n, N):
        lo = th.u0(n, N) if N <= n else 0.0
        for u in (lo + 0.01, 1.0, 2.0, math.pi - lo - 0.01):
            v = th.solve_v(n, N, u)
            g = th.g_eval(n, N, u)
            assert abs(th.h_eval(n, N, v) - g) <= 1e-9 * max(1.0, abs(g), N * N)

    def test_even_in_u(self):
        assert th.solve_v(5, 3.0, 1.2) == th.solve_v(5, 3.0, -1.2)

    def test_case_one_lower_bound(self):
        v0 = th.v0(5, 6.0)
        assert th.solve_v(5, 6.0, 0.0) == pytest.approx(v0)
        assert th.solve_v(5, 6.0, 1.0) >= v0

    def test_range_endpoint(self):
        assert th.solve_v(5, 3.0, th.u0(5, 3.0)) == pytest.approx(0.0, abs=1e-6)

    def test_outside_range(self):
        with pytest.raises(DomainError):
            th.solve_v(5, 3.0, 0.1)

    def test_below_n_min(self):
        with pytest.raises(DomainError):
            th.solve_v(5, 1.1, 1.0)

    def test_in_range(self):
        assert th.in_range(5, 6.0, 0.0)
        assert not th.in_range(5, 3.0, 0.0)
        assert th.in_range(5, 3.0, math.pi / 2)
