"""Entropy primitives and closed-form spectra of X states.

All entropies are in nats.  The array-level helpers (``*_arrays``) broadcast
over numpy inputs and are what the optimizers and sweeps call; the scalar
operations wrap them for single states.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np

from .xstate import XState, reduce_B

NATS_PER_BIT = math.log(2.0)
EIG_TOL = 1e-12
SQRT_TOL = 1e-14


class DomainError(ValueError):
    pass


class Spectrum4(NamedTuple):
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float


class Spectrum2(NamedTuple):
    Lambda1: float
    Lambda2: float


def to_bits(value):
    return value / NATS_PER_BIT


def _safe_sqrt(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < -SQRT_TOL):
        raise DomainError(f"negative square-root argument {x.min()!r}")
    return np.sqrt(np.maximum(x, 0.0))


def shannon_terms(p):
    """Elementwise -p ln p with 0 ln 0 = 0.

    Entries in [-1e-12, 0) are treated as zero; anything further outside
    [0, 1] raises DomainError.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < -EIG_TOL) or np.any(p > 1.0 + EIG_TOL) or np.any(np.isnan(p)):
        raise DomainError(f"probability outside [0, 1]: min={np.nanmin(p)!r}, max={np.nanmax(p)!r}")
    q = np.clip(p, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -q * np.log(q)
    return np.where(q > 0.0, out, 0.0)


def shannon_term(p: float) -> float:
    return float(shannon_terms(p))


def von_neumann_entropy(spectrum: Iterable[float]) -> float:
    """Entropy of a density matrix given its eigenvalues."""
    p = np.asarray(tuple(spectrum), dtype=float)
    if abs(math.fsum(p) - 1.0) > 1e-10:
        raise DomainError(f"spectrum sums to {math.fsum(p)!r}, not 1")
    return float(math.fsum(shannon_terms(p)))


def xstate_spectrum(s: XState) -> Spectrum4:
    r1 = math.sqrt(max((s.a - s.d) ** 2 + 4 * s.alpha**2, 0.0))
    r2 = math.sqrt(max((s.b - s.c) ** 2 + 4 * s.beta**2, 0.0))
    return Spectrum4(
        (s.a + s.d + r1) / 2,
        (s.a + s.d - r1) / 2,
        (s.b + s.c + r2) / 2,
        (s.b + s.c - r2) / 2,
    )


def post_measurement_arrays(a, b, c, d, alpha, beta, theta, phi=0.0):
    """Closed-form eigenvalues after a projective measurement on qubit B.

    The measurement basis is cos(t/2)|0> + e^{i p} sin(t/2)|1> and its
    orthogonal complement.  Returns ``(lam, Lam)`` where ``lam`` has a leading
    axis of length 4 (the joint spectrum) and ``Lam`` one of length 2 (the
    spectrum of the measured qubit).  All arguments broadcast.
    """
    ct = np.cos(theta)
    st2 = np.sin(theta) ** 2
    z = a - b + c - d
    u = a + b - c - d
    v = a - b - c + d
    coh = 4.0 * (alpha * alpha + beta * beta + 2.0 * alpha * beta * np.cos(2.0 * phi)) * st2
    r_plus = _safe_sqrt((u + v * ct) ** 2 + coh)
    r_minus = _safe_sqrt((u - v * ct) ** 2 + coh)
    zc = z * ct
    lam = np.stack(
        np.broadcast_arrays(
            (1.0 + zc + r_plus) / 4.0,
            (1.0 + zc - r_plus) / 4.0,
            (1.0 - zc + r_minus) / 4.0,
            (1.0 - zc - r_minus) / 4.0,
        )
    )
    Lam = np.stack(np.broadcast_arrays((1.0 + zc) / 2.0, (1.0 - zc) / 2.0))
    return lam, Lam


def conditional_entropy_measured_arrays(a, b, c, d, alpha, beta, theta, phi=0.0):
    """S(rho'_AB) - S(rho'_B), broadcast over all arguments."""
    lam, Lam = post_measurement_arrays(a, b, c, d, alpha, beta, theta, phi)
    return shannon_terms(lam).sum(axis=0) - shannon_terms(Lam).sum(axis=0)


def conditional_entropy_unmeasured_arrays(a, b, c, d, alpha, beta):
    r1 = _safe_sqrt((a - d) ** 2 + 4.0 * alpha * alpha)
    r2 = _safe_sqrt((b - c) ** 2 + 4.0 * beta * beta)
    joint = (
        shannon_terms((a + d + r1) / 2.0)
        + shannon_terms((a + d - r1) / 2.0)
        + shannon_terms((b + c + r2) / 2.0)
        + shannon_terms((b + c - r2) / 2.0)
    )
    return joint - shannon_terms(a + c) - shannon_terms(b + d)


def post_measurement_spectrum(s: XState, angles) -> tuple[Spectrum4, Spectrum2]:
    lam, Lam = post_measurement_arrays(s.a, s.b, s.c, s.d, s.alpha, s.beta, angles.theta, angles.phi)
    return Spectrum4(*map(float, lam)), Spectrum2(*map(float, Lam))


def conditional_entropy_unmeasured(s: XState) -> float:
    return von_neumann_entropy(xstate_spectrum(s)) - von_neumann_entropy(reduce_B(s))


def conditional_entropy_measured(s: XState, angles) -> float:
    """Conditional entropy of qubit A given the outcome of measuring B."""
    lam, Lam = post_measurement_spectrum(s, angles)
    return float(shannon_terms(lam).sum() - shannon_terms(Lam).sum())
