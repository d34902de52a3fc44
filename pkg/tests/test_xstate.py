import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from xdiscord.entropy import xstate_spectrum
from xdiscord.xstate import (
    NonPositive,
    PositivityViolation,
    TraceError,
    XState,
    XStateRaw,
    apply_flips,
    canonicalize,
    reduce_A,
    reduce_B,
    transpose_parties,
)

from conftest import BELL, EQ7, EQ9, MIXED, xstates


def test_canonicalize_pure_product_ignores_phases():
    s = canonicalize(XStateRaw(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.3, -0.4))
    assert s == XState(1.0, 0.0, 0.0, 0.0)


def test_canonicalize_drops_phase_keeps_modulus():
    s = canonicalize(XStateRaw(0.5, 0.0, 0.0, 0.5, alpha_mod=0.5, alpha_phase=math.pi / 3))
    assert s == XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)


def test_canonicalize_leaves_counterexample_unchanged():
    raw = XStateRaw(0.027180, 0.000224, 0.027327, 0.945269, 0.141651, 0.0)
    assert canonicalize(raw) == EQ7


def test_canonicalize_renormalizes_within_tolerance():
    s = canonicalize(XStateRaw(0.25 + 4e-10, 0.25, 0.25, 0.25))
    assert abs(math.fsum(s.diagonal) - 1.0) <= 1e-12
    assert s.a > s.b


@pytest.mark.parametrize(
    "raw, err",
    [
        (XStateRaw(-0.1, 0.4, 0.4, 0.3), NonPositive),
        (XStateRaw(0.3, 0.3, 0.3, 0.3), TraceError),
        (XStateRaw(0.5, 0.0, 0.0, 0.5, alpha_mod=0.6), PositivityViolation),
        (XStateRaw(0.25, 0.25, 0.25, 0.25, beta_mod=0.3), PositivityViolation),
        (XStateRaw(float("nan"), 0.5, 0.5, 0.0), NonPositive),
    ],
)
def test_canonicalize_rejects(raw, err):
    with pytest.raises(err):
        canonicalize(raw)


def test_small_negative_diagonal_is_clipped():
    s = canonicalize(XStateRaw(-5e-10, 0.5, 0.5, 5e-10))
    assert s.a == 0.0


def test_xstate_constructor_validates():
    with pytest.raises(PositivityViolation):
        XState(0.5, 0.0, 0.0, 0.5, -0.1, 0.0)
    with pytest.raises(TraceError):
        XState(0.5, 0.5, 0.5, 0.0)


def test_reductions():
    assert reduce_A(XState(1.0, 0, 0, 0)) == (1.0, 0.0)
    assert reduce_B(XState(1.0, 0, 0, 0)) == (1.0, 0.0)
    assert reduce_A(MIXED) == (0.5, 0.5)
    assert reduce_B(BELL) == (0.5, 0.5)
    assert reduce_A(EQ7) == pytest.approx((0.027404, 0.972596), abs=1e-15)
    assert reduce_B(EQ9) == pytest.approx((0.032014, 0.967986), abs=1e-15)


def test_reductions_match_partial_trace():
    from dense import ptrace_A, ptrace_B

    rho = EQ7.matrix()
    assert np.allclose(ptrace_B(rho).diagonal().real, reduce_A(EQ7), atol=1e-15)
    assert np.allclose(ptrace_A(rho).diagonal().real, reduce_B(EQ7), atol=1e-15)


def test_flips():
    assert apply_flips(EQ7) == EQ7
    assert apply_flips(XState(1.0, 0, 0, 0), flip_A=True) == XState(0, 0, 1.0, 0)
    both = apply_flips(EQ7, flip_A=True, flip_B=True)
    assert both.diagonal == (0.945269, 0.027327, 0.000224, 0.027180)
    assert (both.alpha, both.beta) == (0.141651, 0.0)


def test_flips_match_pauli_x_conjugation():
    X = np.array([[0, 1], [1, 0]])
    rho = EQ9.matrix()
    for fa, fb in [(True, False), (False, True), (True, True)]:
        U = np.kron(X if fa else np.eye(2), X if fb else np.eye(2))
        assert np.allclose(U @ rho @ U, apply_flips(EQ9, fa, fb).matrix(), atol=0)


def test_symmetric_predicate():
    assert EQ9.symmetric()
    assert not EQ7.symmetric()
    assert transpose_parties(EQ7).b == EQ7.c


def test_json_roundtrip():
    assert XState.from_dict(EQ7.to_dict()) == EQ7
    raw = {"a": 0.5, "d": 0.5, "alpha": 0.5, "alpha_phase": 2.0}
    assert XState.from_dict(raw) == BELL


@given(xstates(), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_canonicalize_idempotent(s, pa, pb):
    once = canonicalize(XStateRaw(s.a, s.b, s.c, s.d, s.alpha, s.beta, pa, pb))
    assert canonicalize(once) == once


@given(xstates())
def test_xstate_is_positive_semidefinite(s):
    assert min(xstate_spectrum(s)) >= -1e-12


@given(xstates())
def test_reductions_normalized(s):
    assert abs(sum(reduce_A(s)) - 1.0) <= 1e-12
    assert abs(sum(reduce_B(s)) - 1.0) <= 1e-12


@given(xstates(), st.booleans(), st.booleans())
def test_flips_are_involutions(s, fa, fb):
    assert apply_flips(apply_flips(s, fa, fb), fa, fb) == s
