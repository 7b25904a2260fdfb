"""Shared fixtures.

- anchors:       known values from tests/fixtures/anchors.json
- traced_curve:  session cache of traced level curves, keyed by (n, N, k, samples)
- rng:           seeded generator, fresh per test
- debug_output_dir: test_outputs/results/<test name>/, kept after the run

Curve tracing dominates test time, so unit tests share curves through
traced_curve and keep samples between 64 and 400.
"""

import json
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).parent.parent
TEST_OUTPUTS_DIR = PROJECT_ROOT / "test_outputs"
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def anchors() -> dict:
    """已知数值锚点."""
    path = FIXTURES_DIR / "anchors.json"
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def traced_curve():
    """(n, N, k, samples) -> LevelCurve，整个会话内缓存."""
    from kmscurves.curve_engine import trace_curve

    cache = {}

    def get(n: int, N: float, k: int, samples: int = 400):
        key = (n, float(N), k, samples)
        if key not in cache:
            cache[key] = trace_curve(n, N, k, samples)
        return cache[key]

    return get


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def debug_output_dir(request) -> Path:
    """保留到测试结束后的输出目录，用于人工查看 SVG."""
    output_dir = TEST_OUTPUTS_DIR / "results" / request.node.name
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir
