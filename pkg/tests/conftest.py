import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from spinorbit.modes import PoincareAngles

finite_angle = st.floats(min_value=-4 * math.pi, max_value=4 * math.pi, allow_nan=False)
polar = st.floats(min_value=0.0, max_value=math.pi)
azimuth = st.floats(min_value=-math.pi, max_value=math.pi)
angles_strategy = st.builds(PoincareAngles, polar, azimuth, polar, azimuth)
delta_strategy = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi)

BALANCED = PoincareAngles(math.pi / 2, math.pi, math.pi / 2, 0.0)


def random_angles(rng) -> PoincareAngles:
    t, a = rng.uniform(0, math.pi, 2)
    p, b = rng.uniform(-math.pi, math.pi, 2)
    return PoincareAngles(float(t), float(p), float(a), float(b))


def literal_transfer(j: int, k: int, delta: float) -> np.ndarray:
    """Transfer matrices typed in from their defining formulas."""
    s, c = math.sin(delta / 2), math.cos(delta / 2)
    if (j + k) % 2 == 0:
        return 1j * np.array([[s, c], [c, -s]])
    return np.array([[c, s], [s, -c]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in mod.RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
