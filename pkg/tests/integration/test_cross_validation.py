"""Integration tests: the verify suite and deliberately broken curve tracers.

Run:
    pytest tests/integration/ -v
    pytest tests/integration/ -v -m slow   # full verify, several minutes
"""

import numpy as np
import pytest

from kmscurves import curve_engine
from kmscurves.errors import DomainError
from kmscurves.models import LevelCurve, ProblemParams
from kmscurves.stats import CheckRecord
from kmscurves.verify import (
    CIRCLE_BAND,
    check_curve_oracle,
    check_j_agreement,
    check_large_n_circle,
    run_verify,
)

_ORIGINAL_TRACE = curve_engine.trace_curve


def _reversed_trace(n, N, k, samples_per_interval=None, verbose=False):
    """方向错误的实现: 样本顺序反转，但仍标记为 u 递减."""
    curve = _ORIGINAL_TRACE(n, N, k, samples_per_interval, verbose)
    return LevelCurve(
        params=curve.params,
        samples=curve.samples[::-1],
        orientation="decreasing-u",
        substitutions=curve.substitutions,
    )


def _wrong_level_trace(n, N, k, samples_per_interval=None, verbose=False):
    """等值取错的实现."""
    curve = _ORIGINAL_TRACE(n, 1.1 * N, k, samples_per_interval, verbose)
    return LevelCurve(params=ProblemParams(n, N, k), samples=curve.samples)


@pytest.mark.integration
class TestQuickVerify:
    """quick 级别的校验套件."""

    def test_passes(self):
        report = run_verify("quick", quiet=True)
        assert report.passed, report.summary_text()
        names = [r.name for r in report.records]
        assert names == [
            "nmin-anchors",
            "cusp-anchor",
            "loop-anchor",
            "curve-oracle",
            "j-agreement",
            "argument-principle",
            "cubic",
            "chebyshev",
        ]

    def test_unknown_level(self):
        with pytest.raises(DomainError):
            run_verify("medium", quiet=True)


@pytest.mark.integration
class TestBrokenTracers:
    """替换曲线追踪实现后，校验必须失败."""

    def test_reversed_orientation_fails_agreement(self, monkeypatch):
        monkeypatch.setattr(curve_engine, "trace_curve", _reversed_trace)
        record = CheckRecord(name="j-agreement")
        check_j_agreement(
            record, ((5, 3.0, 1),), points_per_config=20, samples=200, rng=np.random.default_rng(7)
        )
        assert not record.passed
        assert "winding" in record.detail

    def test_reversed_orientation_names_check(self, monkeypatch):
        monkeypatch.setattr(curve_engine, "trace_curve", _reversed_trace)
        report = run_verify("quick", quiet=True)
        assert not report.passed
        assert "j-agreement" in [r.name for r in report.failures]

    def test_wrong_level_fails_oracle(self, monkeypatch):
        monkeypatch.setattr(curve_engine, "trace_curve", _wrong_level_trace)
        record = CheckRecord(name="curve-oracle")
        check_curve_oracle(record, ((5, 30.0, 1),))
        assert not record.passed


@pytest.mark.integration
class TestLargeLevelCheck:
    def test_passes_with_measured_deviation(self):
        record = CheckRecord(name="large-n-circle")
        check_large_n_circle(record)
        assert record.passed, record.detail
        assert CIRCLE_BAND == 0.10
        assert "(5, 30.0, 1): 0.07" in record.detail


@pytest.mark.slow
@pytest.mark.integration
class TestFullVerify:
    def test_full(self, tmp_path):
        report = run_verify("full", out_dir=tmp_path, quiet=True)
        assert report.passed, report.summary_text()
        assert (tmp_path / "figures" / "l2_8_N1.85.svg").exists()
        assert (tmp_path / "figures" / "cubic_N0.csv").exists()
        advisory = [r.name for r in report.records if r.advisory]
        assert advisory == ["jordan-sweep"]
