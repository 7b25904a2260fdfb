"""Unit tests for level-curve tracing."""

import math

import numpy as np
import pytest

from kmscurves import curve_engine as ce
from kmscurves import thresholds as th
from kmscurves.config import override_settings
from kmscurves.errors import DenominatorVanishesError, DomainError
from kmscurves.models import CaseTag

ROOT2 = math.sqrt(2.0)


class TestRanges:
    """测试参数范围与特殊参数."""

    def test_case_one_range(self):
        r = ce.u_range(5, 30.0)
        assert r.case is CaseTag.CASE_ONE
        assert r.intervals == ((-math.pi, math.pi),)

    def test_case_two_range(self):
        r = ce.u_range(5, 3.0)
        assert r.case is CaseTag.CASE_TWO
        (a0, a1), (b0, b1) = r.intervals
        assert a1 == pytest.approx(-r.u0)
        assert b0 == pytest.approx(r.u0)
        assert b1 == pytest.approx(math.pi - r.u0)

    def test_below_n_min(self):
        with pytest.raises(DomainError, match=r"N_min\(5\)=1\.25"):
            ce.u_range(5, 1.2)

    @pytest.mark.parametrize("n,N,k", [(5, 3.0, 1), (5, 30.0, 2), (8, 1.85, 2), (7, 4.0, 1)])
    def test_real_axis_parameters(self, n, N, k):
        for u in ce.real_axis_parameters(n, N):
            rho = ce.eval_point(n, N, k, u).rho
            assert abs(rho.imag) <= 1e-6 * max(1.0, abs(rho))

    def test_imaginary_axis_parameters(self):
        for u in ce.imaginary_axis_parameters(5, 3.0):
            rho = ce.eval_point(5, 3.0, 1, u).rho
            assert abs(rho.real) <= 1e-8 * max(1.0, abs(rho))

    def test_imaginary_axis_requires_odd_n(self):
        with pytest.raises(DomainError):
            ce.imaginary_axis_parameters(8, 3.0)

    def test_loop_type(self):
        assert ce.loop_type(5) == 1
        assert ce.loop_type(7) == 2
        assert ce.loop_type(9) == 1
        with pytest.raises(DomainError):
            ce.loop_type(6)

    def test_circle_radius(self):
        assert ce.circle_radius(5, 30.0) == pytest.approx(30.0**0.25)
        assert ce.circle_radius(12, 200.0) == pytest.approx(1.6188, abs=1e-4)


class TestEvalPoint:
    """测试 f^(k), b^(k)."""

    def test_loop_tip_at_half_pi(self):
        """u = π/2 落在下半平面环的顶端，不是自交点: ρ = −i cosh(3v)/sinh(2v)，λ = −3."""
        v = th.v_im(5, 3.0)
        s = ce.eval_point(5, 3.0, 1, math.pi / 2)
        assert s.rho == pytest.approx(-1j * math.cosh(3 * v) / math.sinh(2 * v), abs=1e-9)
        assert s.rho.imag == pytest.approx(-2.0838, abs=1e-3)
        assert s.lam == pytest.approx(-3.0, abs=1e-9)

    def test_anchor(self, anchors):
        ref = anchors["eval_point"]
        s = ce.eval_point(ref["n"], ref["N"], ref["k"], ref["u"])
        assert s.rho == pytest.approx(complex(*ref["rho"]), abs=1e-8)
        assert s.lam == pytest.approx(complex(*ref["lambda"]), abs=1e-8)

    @pytest.mark.parametrize("n,N,k", [(5, 3.0, 1), (5, 3.0, 2), (12, 200.0, 2), (8, 1.85, 1)])
    def test_lambda_on_level(self, n, N, k):
        lo = 0.0 if N > n else ce.u_range(n, N).u0
        for u in np.linspace(lo + 1e-3, math.pi - lo - 1e-3, 7):
            s = ce.eval_point(n, N, k, float(u))
            assert abs(s.lam) == pytest.approx(N, rel=1e-8)

    def test_type_sign(self):
        """type 1 与 type 2 的 λ 符号相反."""
        u = 1.0
        lam1 = ce.eval_point(5, 30.0, 1, u).lam
        lam2 = ce.eval_point(5, 30.0, 2, u).lam
        assert lam1 == pytest.approx(-lam2)

    def test_scaled_evaluation_continuous(self):
        """大 v 时提出指数因子的求值与直接求值一致."""
        with override_settings(scaled_eval_threshold=1e9):
            direct = ce.rho_lambda(5, 1, 1.0, 3.0)
        with override_settings(scaled_eval_threshold=0.5):
            scaled = ce.rho_lambda(5, 1, 1.0, 3.0)
        assert scaled[0] == pytest.approx(direct[0], rel=1e-12)
        assert scaled[1] == pytest.approx(direct[1], rel=1e-12)

    def test_denominator_vanishes(self):
        with pytest.raises(DenominatorVanishesError) as exc:
            ce.rho_lambda(5, 1, 0.0, 0.0)
        assert exc.value.u == 0.0

    def test_outside_range(self):
        with pytest.raises(DomainError):
            ce.eval_point(5, 3.0, 1, 0.0)


class TestTraceCurve:
    """测试曲线追踪."""

    @pytest.mark.parametrize("n,N,k", [(5, 3.0, 1), (5, 30.0, 1), (8, 1.85, 2)])
    def test_closed_and_decreasing(self, traced_curve, n, N, k):
        curve = traced_curve(n, N, k, 400)
        assert curve.rho[0] == curve.rho[-1]
        assert curve.orientation == "decreasing-u"
        assert np.all(np.diff(curve.u) < 0)
        assert np.allclose(np.abs(curve.lam), N, rtol=1e-8)

    @pytest.mark.parametrize("n,N,k", [(5, 3.0, 1), (5, 30.0, 1), (12, 20.0, 2)])
    def test_conjugate_symmetry(self, traced_curve, n, N, k):
        curve = traced_curve(n, N, k, 400)
        assert np.array_equal(curve.rho, np.conj(curve.rho[::-1]))

    def test_lower_half_first(self, traced_curve):
        """u > 0 映射到下半平面."""
        curve = traced_curve(5, 30.0, 1, 400)
        positive = [s.rho.imag for s in curve.samples if 0 < s.u < math.pi]
        assert max(positive) <= 0

    def test_borderline_substitutions(self, traced_curve):
        curve = traced_curve(5, 5.0, 1, 400)
        assert curve.substitutions
        for original, used in curve.substitutions:
            assert original != used

    def test_too_few_samples(self):
        with pytest.raises(DomainError):
            ce.trace_curve(5, 3.0, 1, 8)

    def test_worker_pool_matches_serial(self, traced_curve):
        serial = traced_curve(5, 3.0, 1, 64)
        with override_settings(max_workers=4):
            pooled = ce.trace_curve(5, 3.0, 1, 64)
        assert np.array_equal(serial.rho, pooled.rho)

    def test_real_crossings(self, traced_curve):
        assert ce.count_real_crossings(traced_curve(5, 30.0, 1, 400)) == 2
        assert ce.count_real_crossings(traced_curve(5, 3.0, 1, 400)) == 2


class TestLoopsAndIntersections:
    """测试环、自交点与尖点."""

    def test_loop_points(self):
        upper, lower = ce.loop_points(5, 3.0)
        assert upper == pytest.approx(1j * ROOT2, abs=1e-6)
        assert lower == pytest.approx(-1j * ROOT2, abs=1e-6)

    def test_loop_parameters_map_to_same_point(self):
        (a, b), (c, d) = ce.loop_parameters(5, 3.0)
        assert ce.eval_point(5, 3.0, 1, a).rho == pytest.approx(ce.eval_point(5, 3.0, 1, b).rho)
        assert ce.eval_point(5, 3.0, 1, c).rho == pytest.approx(ce.eval_point(5, 3.0, 1, d).rho)

    def test_loop_points_preconditions(self):
        with pytest.raises(DomainError):
            ce.loop_points(8, 3.0)
        with pytest.raises(DomainError):
            ce.loop_points(5, 5.0)

    def test_loop_shrinks_to_cusp(self):
        upper, _ = ce.loop_points(5, 4.999)
        assert abs(upper - 2j) < 0.05

    def test_self_intersections_n5(self, traced_curve):
        found = ce.self_intersections(traced_curve(5, 3.0, 1, 400))
        assert len(found) == 2
        points = sorted((f.rho for f in found), key=lambda z: z.imag)
        assert points[0] == pytest.approx(-1j * ROOT2, abs=1e-6)
        assert points[1] == pytest.approx(1j * ROOT2, abs=1e-6)
        assert {f.half_plane for f in found} == {"upper", "lower"}

    def test_no_self_intersections_large_level(self, traced_curve):
        assert ce.self_intersections(traced_curve(5, 30.0, 1, 400)) == []

    def test_cusps_n5(self, traced_curve, anchors):
        cusps = ce.find_cusps(traced_curve(5, 5.0, 1, 2000))
        assert len(cusps) == anchors["cusps"]["5,1"]
        for c in cusps:
            assert abs(c.rho) == pytest.approx(2.0, abs=1e-6)
            assert c.lam == pytest.approx(-5.0, abs=1e-3)

    @pytest.mark.slow
    def test_cusps_n12(self, traced_curve, anchors):
        cusps = ce.find_cusps(traced_curve(12, 12.0, 2, 2000))
        assert len(cusps) == anchors["cusps"]["12,2"]

    def test_no_cusps_off_borderline(self, traced_curve):
        assert ce.find_cusps(traced_curve(5, 3.0, 1, 400)) == []


class TestSymmetry:
    def test_odd_n(self):
        report = ce.symmetry_report(5, 3.0, samples=200)
        assert set(report.deviations) == {"conjugation", "origin_union", "imaginary_axis"}
        assert max(report.deviations.values()) < 1e-6
        assert report.crossings[1] == 2

    @pytest.mark.slow
    def test_even_n(self):
        report = ce.symmetry_report(8, 1.85, samples=200)
        assert "type_mirror" in report.deviations
        assert max(report.deviations.values()) < 1e-6

    def test_distance_to_curve_of_sample(self, traced_curve):
        curve = traced_curve(5, 3.0, 1, 400)
        assert ce.distance_to_curve(curve, curve.rho[37]) == 0.0


@pytest.mark.slow
class TestJordanSweep:
    def test_sweep_rows(self):
        rows = ce.jordan_sweep(range(3, 6), samples=200, quiet=True)
        assert len(rows) == 3 * 2 * 4
        # 大 N 时曲线接近圆
        assert all(r.intersections == 0 for r in rows if r.N == 10.0 * r.n)

    def test_three_type_one_has_no_loop(self):
        """n = 3 的 type-1 曲线为 |1 − ρ²| = N，没有环."""
        rows = ce.jordan_sweep([3], samples=200, quiet=True)
        inner = [r for r in rows if r.k == 1 and r.N < 3]
        assert len(inner) == 1
        assert inner[0].expectation == "none"
        assert inner[0].intersections == 0
        assert inner[0].agrees


class TestLargeLevelCircle:
    """N 很大时曲线接近圆 |ρ| = N^{1/(n−1)}，偏差是曲线本身的性质."""

    @pytest.mark.parametrize(
        "n,N,k,expected", [(5, 30.0, 1, 0.0754), (12, 200.0, 2, 0.0533), (5, 30.0, 2, 0.0858)]
    )
    def test_relative_deviation(self, traced_curve, n, N, k, expected):
        curve = traced_curve(n, N, k, 400)
        radius = ce.circle_radius(n, N)
        deviation = float(np.max(np.abs(np.abs(curve.rho) - radius)) / radius)
        assert deviation == pytest.approx(expected, abs=2e-3)
        assert deviation < 0.10
