import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from xdiscord.discord import MeasurementAngles
from xdiscord.entropy import (
    DomainError,
    conditional_entropy_measured,
    conditional_entropy_measured_arrays,
    conditional_entropy_unmeasured,
    post_measurement_spectrum,
    shannon_term,
    to_bits,
    von_neumann_entropy,
    xstate_spectrum,
)
from xdiscord.xstate import XState, reduce_B

import dense
from conftest import BELL, EQ7, EQ9, MIXED, xstates

LN2 = math.log(2)

# Values below come from tests/dense.py (eigvalsh of explicitly built matrices).
EQ7_EIGS = [0.00022400000000000198, 0.005821691118484407, 0.027327, 0.9666273088815156]
EQ7_COND_UNMEASURED = -0.04855254301232956
EQ9_ENTROPY = 0.1433646600429754
EQ9_COND_AT_THETA = 0.07651339331600315  # theta = 0.477918, phi = 0


def test_shannon_term():
    assert shannon_term(0.0) == 0.0
    assert shannon_term(1.0) == 0.0
    assert shannon_term(0.5) == pytest.approx(0.34657359, abs=1e-8)
    assert shannon_term(-1e-13) == 0.0
    with pytest.raises(DomainError):
        shannon_term(-1e-6)
    with pytest.raises(DomainError):
        shannon_term(1.1)


def test_von_neumann_entropy():
    assert von_neumann_entropy((1.0, 0.0, 0.0, 0.0)) == 0.0
    assert von_neumann_entropy((0.25,) * 4) == pytest.approx(1.38629436, abs=1e-8)
    assert von_neumann_entropy(xstate_spectrum(EQ9)) == pytest.approx(EQ9_ENTROPY, abs=1e-12)
    with pytest.raises(DomainError):
        von_neumann_entropy((0.5, 0.4))
    assert to_bits(LN2) == pytest.approx(1.0)


def test_xstate_spectrum():
    assert sorted(xstate_spectrum(MIXED)) == [0.25] * 4
    assert sorted(xstate_spectrum(BELL)) == [0.0, 0.0, 0.0, 1.0]
    assert sorted(xstate_spectrum(EQ7)) == pytest.approx(EQ7_EIGS, abs=1e-12)


def test_post_measurement_spectrum_examples():
    diag = XState(0.1, 0.2, 0.3, 0.4)
    lam, Lam = post_measurement_spectrum(diag, MeasurementAngles(0.0))
    assert sorted(lam) == pytest.approx([0.1, 0.2, 0.3, 0.4], abs=1e-15)
    assert Lam == pytest.approx((0.4, 0.6), abs=1e-15)

    lam, Lam = post_measurement_spectrum(BELL, MeasurementAngles(math.pi / 2))
    assert lam == pytest.approx((0.5, 0.0, 0.5, 0.0), abs=1e-15)
    assert Lam == pytest.approx((0.5, 0.5), abs=1e-15)

    th = 0.607573
    lam, Lam = post_measurement_spectrum(EQ7, MeasurementAngles(th))
    rho_p = dense.post_measurement(EQ7.matrix(), th, 0.0)
    assert sorted(lam) == pytest.approx(np.linalg.eigvalsh(rho_p), abs=1e-12)
    assert sorted(Lam) == pytest.approx(np.linalg.eigvalsh(dense.ptrace_A(rho_p)), abs=1e-12)


def test_conditional_entropies():
    assert conditional_entropy_unmeasured(BELL) == pytest.approx(-LN2, abs=1e-12)
    assert conditional_entropy_unmeasured(MIXED) == pytest.approx(LN2, abs=1e-12)
    assert conditional_entropy_unmeasured(EQ7) == pytest.approx(EQ7_COND_UNMEASURED, abs=1e-12)

    for th in np.linspace(0, math.pi, 7):
        assert conditional_entropy_measured(BELL, MeasurementAngles(th)) == pytest.approx(0.0, abs=1e-12)
    diag = XState(0.1, 0.2, 0.3, 0.4)
    expect = von_neumann_entropy((0.1, 0.2, 0.3, 0.4)) - von_neumann_entropy(reduce_B(diag))
    assert conditional_entropy_measured(diag, MeasurementAngles(0.0)) == pytest.approx(expect, abs=1e-12)
    assert conditional_entropy_measured(EQ9, MeasurementAngles(0.477918)) == pytest.approx(
        EQ9_COND_AT_THETA, abs=1e-12
    )


def _angles():
    return st.floats(0, math.pi), st.floats(0, 2 * math.pi, exclude_max=True)


@given(xstates(), *_angles())
def test_spectra_normalized(s, th, ph):
    lam, Lam = post_measurement_spectrum(s, MeasurementAngles(th, ph))
    assert abs(sum(lam) - 1) <= 1e-10
    assert abs(sum(Lam) - 1) <= 1e-12
    assert min(lam) >= -1e-12


@given(xstates(), *_angles())
def test_spectra_match_dense(s, th, ph):
    lam, Lam = post_measurement_spectrum(s, MeasurementAngles(th, ph))
    rho_p = dense.post_measurement(s.matrix(), th, ph)
    assert np.abs(np.sort(lam) - np.linalg.eigvalsh(rho_p)).max() <= 1e-12
    assert np.abs(np.sort(Lam) - np.linalg.eigvalsh(dense.ptrace_A(rho_p))).max() <= 1e-12


@given(xstates(), *_angles())
def test_theta_reflection(s, th, ph):
    f = lambda t: conditional_entropy_measured(s, MeasurementAngles(t, ph))  # noqa: E731
    assert f(th) == pytest.approx(f(math.pi - th), abs=1e-12)


@given(xstates(), st.floats(0, math.pi), st.floats(0, math.pi))
def test_phi_enters_through_cos2phi(s, th, ph):
    f = lambda p: conditional_entropy_measured(s, MeasurementAngles(th, p))  # noqa: E731
    assert f(ph) == pytest.approx(f(math.pi - ph), abs=1e-12)


@given(xstates(), st.floats(0.0, math.pi))
def test_phi_zero_is_minimal(s, th):
    phis = np.linspace(0, 2 * math.pi, 40, endpoint=False)
    p = (s.a, s.b, s.c, s.d, s.alpha, s.beta)
    vals = conditional_entropy_measured_arrays(*p, th, phis)
    assert np.all(vals[0] <= vals + 1e-12)


@given(xstates(), st.floats(0, math.pi), st.floats(0, 1))
def test_antidiagonals_enter_through_sum_at_phi_zero(s, th, frac):
    total = s.alpha + s.beta
    alpha = min(total * frac, math.sqrt(s.a * s.d))
    beta = total - alpha
    if beta > math.sqrt(s.b * s.c):
        alpha, beta = total - math.sqrt(s.b * s.c), math.sqrt(s.b * s.c)
    other = XState(s.a, s.b, s.c, s.d, alpha, max(beta, 0.0))
    angles = MeasurementAngles(th)
    assert conditional_entropy_measured(s, angles) == pytest.approx(
        conditional_entropy_measured(other, angles), abs=1e-12
    )


@given(xstates(), *_angles())
def test_measured_conditional_entropy_nonnegative(s, th, ph):
    assert conditional_entropy_measured(s, MeasurementAngles(th, ph)) >= -1e-12
