import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from xdiscord.xstate import XState

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

EQ7 = XState(0.027180, 0.000224, 0.027327, 0.945269, 0.141651, 0.0)
EQ9 = XState(0.021726, 0.010288, 0.010288, 0.957698, 0.128057, 0.0)
BELL = XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)
MIXED = XState(0.25, 0.25, 0.25, 0.25)


@st.composite
def xstates(draw, symmetric=False, bell_diagonal=False):
    unit = st.floats(0.0, 1.0, allow_nan=False)
    if bell_diagonal:
        a = draw(st.floats(0.0, 0.5))
        diag = [a, 0.5 - a, 0.5 - a, a]
    elif symmetric:
        w = [draw(unit) for _ in range(3)]
        tot = w[0] + 2 * w[1] + w[2]
        if tot == 0:
            w, tot = [1.0, 0.0, 0.0], 1.0
        diag = [w[0] / tot, w[1] / tot, w[1] / tot, w[2] / tot]
    else:
        w = [draw(unit) for _ in range(4)]
        tot = sum(w)
        if tot == 0:
            w, tot = [1.0, 0, 0, 0], 1.0
        diag = [x / tot for x in w]
    a, b, c, d = diag
    diag[3] = 1.0 - a - b - c
    if diag[3] < 0:
        diag[3] = 0.0
    a, b, c, d = diag
    alpha = math.sqrt(a * d) * draw(unit)
    beta = math.sqrt(b * c) * draw(unit)
    return XState(a, b, c, d, alpha, beta)


@pytest.fixture
def rng():
    return np.random.default_rng(20121003)


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    def record(number, name, passed, detail=""):
        _ACCEPTANCE.append((number, name, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {name}: {detail}")
