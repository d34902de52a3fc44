"""Discord of X states: exact 1-D minimization, the two-branch formula, oracles.

The measured qubit is B.  At phi = 0 the objective depends on the antidiagonals
only through alpha + beta, and the phi dependence is monotone in cos(2 phi), so
the exact discord is a minimization over theta in [0, pi/2] alone.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .entropy import (
    conditional_entropy_measured_arrays,
    conditional_entropy_unmeasured_arrays,
    von_neumann_entropy,
    xstate_spectrum,
)
from .xstate import XState, reduce_A, reduce_B

N_GRID = 2001
THETA_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MeasurementAngles:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi={self.phi} outside [0, 2 pi)")


@dataclass(frozen=True)
class DiscordResult:
    discord_exact: float
    theta_opt: float
    d_sigma_x: float
    d_sigma_z: float
    discord_ara: float
    gap: float
    evaluations: int
    ara_branch: str = "sigma_z"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class BatchResult:
    """Per-state arrays from :func:`minimize_theta_batch`."""

    discord_exact: np.ndarray
    theta_opt: np.ndarray
    d_sigma_x: np.ndarray
    d_sigma_z: np.ndarray
    evaluations: np.ndarray

    @property
    def discord_ara(self) -> np.ndarray:
        return np.minimum(self.d_sigma_x, self.d_sigma_z)

    @property
    def gap(self) -> np.ndarray:
        return self.discord_ara - self.discord_exact

    def __len__(self):
        return len(self.discord_exact)

    def result(self, i: int) -> DiscordResult:
        dx, dz = float(self.d_sigma_x[i]), float(self.d_sigma_z[i])
        exact = float(self.discord_exact[i])
        ara = min(dx, dz)
        return DiscordResult(
            discord_exact=exact,
            theta_opt=float(self.theta_opt[i]),
            d_sigma_x=dx,
            d_sigma_z=dz,
            discord_ara=ara,
            gap=ara - exact,
            evaluations=int(self.evaluations[i]),
            ara_branch="sigma_z" if dz <= dx else "sigma_x",
        )


def _state_arrays(states):
    arr = np.array([[s.a, s.b, s.c, s.d, s.alpha, s.beta] for s in states], dtype=float)
    return arr.reshape(-1, 6).T


def discord_for_measurement(s: XState, angles: MeasurementAngles) -> float:
    """Discord of ``s`` for a single projective measurement on qubit B."""
    p = (s.a, s.b, s.c, s.d, s.alpha, s.beta)
    measured = conditional_entropy_measured_arrays(*p, angles.theta, angles.phi)
    return float(measured - conditional_entropy_unmeasured_arrays(*p))


def ara_discord(s: XState) -> tuple[float, float, float]:
    """Return ``(d_sigma_x, d_sigma_z, min of the two)``."""
    p = (s.a, s.b, s.c, s.d, s.alpha, s.beta)
    vals = conditional_entropy_measured_arrays(*p, np.array([math.pi / 2, 0.0]))
    dx, dz = (vals - conditional_entropy_unmeasured_arrays(*p)).tolist()
    return dx, dz, min(dx, dz)


def _golden_batch(f, lo, hi, tol):
    """Golden-section search on many brackets at once.

    ``f`` maps an array of abscissae (one per bracket) to objective values.
    Returns the best abscissa and value seen per bracket, and the number of
    evaluations spent per bracket.
    """
    h = hi - lo
    n = max(int(math.ceil(math.log(tol / float(h.max())) / math.log(_INV_PHI))), 1)
    x1 = hi - _INV_PHI * h
    x2 = lo + _INV_PHI * h
    f1, f2 = f(x1), f(x2)
    for _ in range(n):
        left = f1 < f2
        # minimum lies in [lo, x2] when left, else [x1, hi]
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        new_x = np.where(left, hi - _INV_PHI * (hi - lo), lo + _INV_PHI * (hi - lo))
        new_f = f(new_x)
        x2, f2, x1, f1 = (
            np.where(left, x1, new_x),
            np.where(left, f1, new_f),
            np.where(left, new_x, x2),
            np.where(left, new_f, f2),
        )
    take1 = f1 <= f2
    return np.where(take1, x1, x2), np.where(take1, f1, f2), n + 2


def minimize_theta_batch(a, b, c, d, alpha, beta, n_grid: int = N_GRID, tol: float = THETA_TOL) -> BatchResult:
    """Exact discord for many X states given as parallel 1-D arrays.

    Each state's objective is sampled on a uniform grid of ``n_grid`` points
    over [0, pi/2] (both endpoints included).  Every strict interior local
    minimum of the samples is bracketed by its neighbours and polished with
    golden-section search down to a bracket of width ``tol``.
    """
    a, b, c, d, alpha, beta = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (a, b, c, d, alpha, beta))
    m = a.size
    grid = np.linspace(0.0, math.pi / 2, n_grid)
    col = lambda x: x[:, None]  # noqa: E731
    vals = conditional_entropy_measured_arrays(
        col(a), col(b), col(c), col(d), col(alpha), col(beta), grid[None, :]
    )
    base = conditional_entropy_unmeasured_arrays(a, b, c, d, alpha, beta)
    evaluations = np.full(m, n_grid, dtype=np.int64)

    # first index wins ties, which favours theta = 0
    best_idx = np.argmin(vals, axis=1)
    best_val = vals[np.arange(m), best_idx]
    best_theta = grid[best_idx]

    inner = vals[:, 1:-1]
    is_min = (inner < vals[:, :-2]) & (inner <= vals[:, 2:])
    rows, cols = np.nonzero(is_min)
    if rows.size:
        cols = cols + 1
        lo, hi = grid[cols - 1], grid[cols + 1]
        pr = tuple(x[rows] for x in (a, b, c, d, alpha, beta))
        x_opt, f_opt, n_eval = _golden_batch(
            lambda t: conditional_entropy_measured_arrays(*pr, t), lo, hi, tol
        )
        np.add.at(evaluations, rows, n_eval)
        # visit candidates best-first so a row keeps its smallest refined value
        order = np.lexsort((x_opt, f_opt))
        rows_o, x_o, f_o = rows[order], x_opt[order], f_opt[order]
        _, first = np.unique(rows_o, return_index=True)
        r, xb, fb = rows_o[first], x_o[first], f_o[first]
        better = fb < best_val[r]
        best_val[r[better]] = fb[better]
        best_theta[r[better]] = xb[better]

    return BatchResult(
        discord_exact=best_val - base,
        theta_opt=best_theta,
        d_sigma_x=vals[:, -1] - base,
        d_sigma_z=vals[:, 0] - base,
        evaluations=evaluations,
    )


def minimize_theta(s: XState, n_grid: int = N_GRID, tol: float = THETA_TOL) -> DiscordResult:
    return minimize_theta_batch(*_state_arrays([s]), n_grid=n_grid, tol=tol).result(0)


def oracle_discord_2d(s: XState, grid_theta: int = 2001, grid_phi: int = 64, tie_tol: float = 1e-14):
    """Brute-force discord over a (theta, phi) grid on [0, pi] x [0, pi).

    Independent of the phi reduction and of the 1-D optimizer; use only as a
    test oracle.  The grid is symmetric under theta -> pi - theta, so values
    within ``tie_tol`` of the minimum count as ties and the lowest
    (theta, phi) index wins.
    """
    if grid_theta < 2 or grid_phi < 2:
        raise ValueError("grid counts must be >= 2")
    theta = np.linspace(0.0, math.pi, grid_theta)
    phi = np.linspace(0.0, math.pi, grid_phi, endpoint=False)
    p = (s.a, s.b, s.c, s.d, s.alpha, s.beta)
    vals = conditional_entropy_measured_arrays(*p, theta[:, None], phi[None, :])
    vals = vals - conditional_entropy_unmeasured_arrays(*p)
    best = float(vals.min())
    i, j = np.unravel_index(np.argmax(vals <= best + tie_tol), vals.shape)
    return best, MeasurementAngles(float(theta[i]), float(phi[j]))


def mutual_information(s: XState) -> float:
    return (
        von_neumann_entropy(reduce_A(s))
        + von_neumann_entropy(reduce_B(s))
        - von_neumann_entropy(xstate_spectrum(s))
    )


def classical_correlation(s: XState, result: DiscordResult | None = None) -> float:
    if result is None:
        result = minimize_theta(s)
    return mutual_information(s) - result.discord_exact
