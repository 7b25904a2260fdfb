"""Unit tests for Chebyshev polynomials."""

import math

import numpy as np
import pytest

from kmscurves.chebyshev import (
    cheb_t,
    cheb_u,
    cheb_u_prime,
    cheb_u_second,
    sin_ratio,
    sinh_ratio,
    u_extrema,
    u_zeros,
)
from kmscurves.errors import DomainError


class TestEvaluation:
    """测试三项递推求值."""

    def test_degree_zero(self):
        assert cheb_t(0, 0.3 + 2j) == 1
        assert cheb_u(0, -7.0) == 1

    def test_known_values(self):
        assert cheb_t(2, 0.5) == pytest.approx(-0.5)
        assert cheb_u(4, 1.0) == pytest.approx(5.0)
        assert cheb_u(4, -1.0) == pytest.approx(5.0)

    def test_hyperbolic_identity(self):
        assert cheb_t(4, 1.3) == pytest.approx(math.cosh(4 * math.acosh(1.3)), rel=1e-12)

    def test_trig_identity(self):
        u = 0.7
        assert cheb_u(6, math.cos(u)) == pytest.approx(math.sin(7 * u) / math.sin(u), rel=1e-12)

    def test_u_at_extremum_of_degree_four(self):
        """U_4(√(3/8)) = −1.25."""
        assert cheb_u(4, math.sqrt(3 / 8)) == pytest.approx(-1.25, abs=1e-14)

    def test_recurrence_relation(self, rng):
        """U_k(z) = z U_{k−1}(z) + T_k(z)."""
        z = rng.normal(size=50) + 1j * rng.normal(size=50)
        for k in range(1, 15):
            lhs = cheb_u(k, z)
            rhs = z * cheb_u(k - 1, z) + cheb_t(k, z)
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_array_input(self):
        x = np.linspace(-1, 1, 11)
        assert cheb_t(3, x).shape == (11,)

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            cheb_t(-1, 0.5)
        with pytest.raises(DomainError):
            cheb_u(-1, 0.5)


class TestDerivatives:
    """测试导数."""

    def test_odd_derivative_at_zero(self):
        assert cheb_u_prime(4, 0.0) == 0.0

    def test_root_of_derivative(self):
        assert cheb_u_prime(4, math.sqrt(3 / 8)) == pytest.approx(0.0, abs=1e-12)

    def test_endpoint_matches_finite_difference(self):
        h = 1e-6
        fd = (cheb_u(3, 1 + h) - cheb_u(3, 1 - h)) / (2 * h)
        assert cheb_u_prime(3, 1.0) == pytest.approx(20.0)
        assert cheb_u_prime(3, 1.0) == pytest.approx(fd, rel=1e-6)

    def test_second_derivative(self):
        """U_4 = 16x⁴ − 12x² + 1，U_4'' = 192x² − 24."""
        for x in (-0.8, 0.0, 0.3, 1.0):
            assert cheb_u_second(4, x) == pytest.approx(192 * x * x - 24)


class TestRatios:
    def test_sin_ratio_finite_at_zero(self):
        assert sin_ratio(5, 0.0) == pytest.approx(5.0)
        assert abs(sin_ratio(5, math.pi)) == pytest.approx(5.0)

    def test_sin_ratio_bound(self, rng):
        for u in rng.uniform(-10, 10, 200):
            assert abs(sin_ratio(7, u)) <= 7 + 1e-9

    def test_sinh_ratio(self):
        assert sinh_ratio(4, 0.0) == pytest.approx(4.0)
        assert sinh_ratio(4, 0.5) == pytest.approx(math.sinh(2.0) / math.sinh(0.5), rel=1e-12)
        assert sinh_ratio(4, 0.6) > sinh_ratio(4, 0.5)


class TestZerosAndExtrema:
    """测试零点与极值点."""

    def test_zeros_degree_two(self):
        assert u_zeros(2).zeros == pytest.approx((-0.5, 0.5))

    def test_zeros_degree_four(self):
        expected = tuple(math.cos(m * math.pi / 5) for m in (4, 3, 2, 1))
        assert u_zeros(4).zeros == pytest.approx(expected)

    def test_zeros_are_roots_and_symmetric(self):
        for k in range(2, 12):
            zeros = u_zeros(k).zeros
            assert all(abs(cheb_u(k, x)) < 1e-12 for x in zeros)
            assert all(abs(a + b) < 1e-14 for a, b in zip(zeros, reversed(zeros)))
            assert list(zeros) == sorted(zeros)

    def test_extrema_degree_two(self):
        assert u_extrema(2).extrema == pytest.approx((0.0,), abs=1e-13)

    def test_extrema_degree_four(self):
        r = math.sqrt(3 / 8)
        assert u_extrema(4).extrema == pytest.approx((-r, 0.0, r), abs=1e-12)

    @pytest.mark.parametrize("k", range(2, 21))
    def test_interlacing(self, k):
        zeros = u_zeros(k).zeros
        extrema = u_extrema(k).extrema
        assert len(extrema) == k - 1
        assert all(a < b < c for a, b, c in zip(zeros[:-1], extrema, zeros[1:]))

    def test_extremal_magnitudes_symmetric(self):
        for k in range(3, 15):
            ext = u_extrema(k).extrema
            assert abs(cheb_u(k, ext[0])) == pytest.approx(abs(cheb_u(k, ext[-1])), abs=1e-12)

    def test_small_degree_rejected(self):
        with pytest.raises(DomainError):
            u_zeros(1)
        with pytest.raises(DomainError):
            u_extrema(1)


class TestProperties:
    """10⁴ 随机样本上的不等式与恒等式."""

    def test_boundedness(self, rng):
        x = rng.uniform(-1, 1, 10_000)
        for k in range(0, 21):
            assert np.all(np.abs(cheb_t(k, x)) <= 1 + 1e-12)
            assert np.all(np.abs(cheb_u(k, x)) <= k + 1 + 1e-9)

    def test_monotone_beyond_one(self, rng):
        x1 = rng.uniform(1, 3, 2000)
        x2 = x1 + rng.uniform(1e-6, 1, 2000)
        for k in range(1, 21):
            assert np.all(cheb_t(k, x1) < cheb_t(k, x2))
            assert np.all(cheb_u(k, x1) < cheb_u(k, x2))

    def test_summation_identity(self, rng):
        """U_k(z) = Σ z^m T_{k−m}(z)."""
        z = 2 * np.sqrt(rng.random(500)) * np.exp(2j * np.pi * rng.random(500))
        for k in range(0, 21):
            terms = [z**m * cheb_t(k - m, z) for m in range(k + 1)]
            scale = np.sum(np.abs(terms), axis=0) + 1
            assert np.all(np.abs(cheb_u(k, z) - np.sum(terms, axis=0)) <= 1e-10 * scale)
