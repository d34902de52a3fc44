"""Two-qubit X states: validation, phase canonicalization, reductions and flips.

Basis ordering is |00>, |01>, |10>, |11>.  The density matrix is

    [[a, 0, 0, alpha],
     [0, b, beta, 0],
     [0, conj(beta), c, 0],
     [conj(alpha), 0, 0, d]]

Qubit A is the first tensor factor, qubit B (the measured one) the second.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

INPUT_TOL = 1e-9
CANON_TOL = 1e-12
# fsum of a renormalized diagonal lands within a few ulps of 1
_UNIT_SUM_SLACK = 4 * np.finfo(float).eps


class XStateError(ValueError):
    """Base class for invalid X-state input."""


class NonPositive(XStateError):
    pass


class TraceError(XStateError):
    pass


class PositivityViolation(XStateError):
    pass


@dataclass(frozen=True)
class XStateRaw:
    """Unvalidated X state; the antidiagonals carry a modulus and a phase."""

    a: float
    b: float
    c: float
    d: float
    alpha_mod: float = 0.0
    beta_mod: float = 0.0
    alpha_phase: float = 0.0
    beta_phase: float = 0.0

    def matrix(self) -> np.ndarray:
        alpha = self.alpha_mod * np.exp(1j * self.alpha_phase)
        beta = self.beta_mod * np.exp(1j * self.beta_phase)
        return _build_matrix(self.a, self.b, self.c, self.d, alpha, beta)

    @classmethod
    def from_dict(cls, data: dict) -> "XStateRaw":
        return cls(
            a=float(data.get("a", 0.0)),
            b=float(data.get("b", 0.0)),
            c=float(data.get("c", 0.0)),
            d=float(data.get("d", 0.0)),
            alpha_mod=float(data.get("alpha", 0.0)),
            beta_mod=float(data.get("beta", 0.0)),
            alpha_phase=float(data.get("alpha_phase", 0.0)),
            beta_phase=float(data.get("beta_phase", 0.0)),
        )


@dataclass(frozen=True)
class XState:
    """Canonical X state with real nonnegative antidiagonal entries."""

    a: float
    b: float
    c: float
    d: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        _check(self.a, self.b, self.c, self.d, self.alpha, self.beta, CANON_TOL)
        if self.alpha < 0 or self.beta < 0:
            raise PositivityViolation(
                f"antidiagonals must be nonnegative, got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def diagonal(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def symmetric(self) -> bool:
        return abs(self.b - self.c) <= CANON_TOL

    def matrix(self) -> np.ndarray:
        return _build_matrix(self.a, self.b, self.c, self.d, self.alpha, self.beta)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "XState":
        """Accepts canonical or raw JSON encodings; raw ones are canonicalized."""
        return canonicalize(XStateRaw.from_dict(data))


class ReducedState(NamedTuple):
    """Diagonal single-qubit density matrix diag(p0, p1)."""

    p0: float
    p1: float


def _build_matrix(a, b, c, d, alpha, beta) -> np.ndarray:
    rho = np.diag(np.array([a, b, c, d], dtype=complex))
    rho[0, 3] = alpha
    rho[3, 0] = np.conj(alpha)
    rho[1, 2] = beta
    rho[2, 1] = np.conj(beta)
    return rho


def _check(a, b, c, d, alpha_mod, beta_mod, tol):
    for name, v in zip("abcd", (a, b, c, d)):
        if not math.isfinite(v):
            raise NonPositive(f"diagonal entry {name}={v} is not finite")
        if v < -tol:
            raise NonPositive(f"diagonal entry {name}={v} is negative")
    total = math.fsum((a, b, c, d))
    if abs(total - 1.0) > tol:
        raise TraceError(f"trace a+b+c+d={total!r} deviates from 1 by more than {tol:g}")
    if not (math.isfinite(alpha_mod) and math.isfinite(beta_mod)):
        raise PositivityViolation("antidiagonal modulus is not finite")
    if alpha_mod * alpha_mod > max(a, 0.0) * max(d, 0.0) + tol:
        raise PositivityViolation(f"|alpha|^2={alpha_mod**2!r} exceeds a*d={a * d!r}")
    if beta_mod * beta_mod > max(b, 0.0) * max(c, 0.0) + tol:
        raise PositivityViolation(f"|beta|^2={beta_mod**2!r} exceeds b*c={b * c!r}")


def canonicalize(raw: XStateRaw | XState) -> XState:
    """Validate ``raw`` and map it to the canonical X state.

    Phases are removed by the local unitary exp(-i t1 Z) x exp(-i t2 Z), so
    only the moduli survive.  Diagonals within tolerance of the simplex are
    clipped at zero and rescaled to unit trace; antidiagonals are clipped to
    the positivity boundary.  The map is idempotent.
    """
    if isinstance(raw, XState):
        raw = XStateRaw(raw.a, raw.b, raw.c, raw.d, raw.alpha, raw.beta)
    alpha_mod, beta_mod = abs(raw.alpha_mod), abs(raw.beta_mod)
    _check(raw.a, raw.b, raw.c, raw.d, alpha_mod, beta_mod, INPUT_TOL)

    diag = [max(float(v), 0.0) for v in (raw.a, raw.b, raw.c, raw.d)]
    total = math.fsum(diag)
    if abs(total - 1.0) > _UNIT_SUM_SLACK:
        diag = [v / total for v in diag]
    a, b, c, d = diag
    alpha = min(float(alpha_mod), math.sqrt(a * d))
    beta = min(float(beta_mod), math.sqrt(b * c))
    return XState(a, b, c, d, alpha, beta)


def reduce_A(s: XState) -> ReducedState:
    return ReducedState(s.a + s.b, s.c + s.d)


def reduce_B(s: XState) -> ReducedState:
    return ReducedState(s.a + s.c, s.b + s.d)


def apply_flips(s: XState, flip_A: bool = False, flip_B: bool = False) -> XState:
    """Apply sigma_x on qubit A and/or qubit B.

    Flipping either qubit exchanges the two antidiagonal blocks, so alpha and
    beta swap once per flip.
    """
    a, b, c, d, alpha, beta = s.a, s.b, s.c, s.d, s.alpha, s.beta
    if flip_A:
        a, b, c, d = c, d, a, b
        alpha, beta = beta, alpha
    if flip_B:
        a, b, c, d = b, a, d, c
        alpha, beta = beta, alpha
    return XState(a, b, c, d, alpha, beta)


def transpose_parties(s: XState) -> XState:
    """Swap the roles of qubits A and B (exchanges b and c)."""
    return XState(s.a, s.c, s.b, s.d, s.alpha, s.beta)


BELL_PHI_PLUS = XState(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)
MAXIMALLY_MIXED = XState(0.25, 0.25, 0.25, 0.25)
