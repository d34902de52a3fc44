"""Worst-case search for the gap between the two-branch formula and exact discord.

The gap depends on the state only through the diagonal (a, b, c, d) and
s = alpha + beta.  Qubit flips let us restrict to a + b <= c + d and a >= b.
Cells are addressed by coordinates t in the unit box,

    general:   a = t0^2 / 2, b = t1^2 / 2, c = t2^2, u = t3,  d = 1 - a - b - c
    symmetric: a = t0^2 / 2, b = c = t1^2 / 2,       u = t2,  d = 1 - a - 2b

where u = s / s_max(a, b, c, d) is the relative position along the feasible
s-range.  The quadratic warp concentrates cells near the nearly-pure corner
where large gaps live.  Level 0 is a uniform grid in t; each refinement level
re-grids a shrunken box around the current top-K cells.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .discord import N_GRID, minimize_theta_batch
from .xstate import XState

CHUNK = 256
FEAS_EPS = 1e-15
HIST_EDGES = (-math.inf, 1e-9, 1e-6, 1e-5, 1e-4, 2e-4, 5e-4, 1e-3, 1.5e-3, 2e-3, 2.1e-3, math.inf)
CHECKPOINT_VERSION = 1


class InfeasibleS(ValueError):
    pass


class VerificationFailed(AssertionError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    mode: str = "general"
    coarse_steps: int = 12
    refine_levels: int = 2
    refine_top_k: int = 16
    refine_shrink: float = 0.5
    refine_steps: int = 5
    seed: int = 0
    jitter: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if self.mode not in ("general", "symmetric"):
            raise ValueError(f"mode must be 'general' or 'symmetric', got {self.mode!r}")
        if self.coarse_steps < 4:
            raise ValueError("coarse_steps must be >= 4")
        if self.refine_levels < 0:
            raise ValueError("refine_levels must be >= 0")
        if self.refine_top_k < 1:
            raise ValueError("refine_top_k must be >= 1")
        if not 0.0 < self.refine_shrink < 1.0:
            raise ValueError("refine_shrink must lie in (0, 1)")
        if self.refine_steps < 2:
            raise ValueError("refine_steps must be >= 2")
        if not 0.0 <= self.jitter <= 1.0:
            raise ValueError("jitter must lie in [0, 1]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def result_key(self) -> dict:
        """Fields that determine the sweep output (worker count does not)."""
        d = asdict(self)
        d.pop("workers")
        return d


@dataclass(frozen=True)
class SweepCell:
    a: float
    b: float
    c: float
    d: float
    s: float
    gap: float
    theta_opt: float


@dataclass
class SweepReport:
    config: SweepConfig
    cells_evaluated: int
    max_gap: float
    witness: SweepCell
    histogram: list
    wall_time: float
    level_max: list = field(default_factory=list)
    top_cells: list = field(default_factory=list)
    records: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "cells_evaluated": self.cells_evaluated,
            "max_gap": self.max_gap,
            "witness": asdict(self.witness),
            "histogram": self.histogram,
            "wall_time": self.wall_time,
            "level_max": self.level_max,
            "top_cells": [asdict(c) for c in self.top_cells],
        }

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f.name for f in fields(SweepCell)])
        for row in self.records if self.records is not None else ():
            w.writerow([f"{x:.12g}" for x in row])
        return buf.getvalue()


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- gap evaluation ----------------------------------------------------------


def s_max(a, b, c, d):
    return np.sqrt(a * d) + np.sqrt(b * c)


def split_s(a, b, c, d, s):
    """Split alpha + beta = s into a feasible (alpha, beta) pair."""
    alpha = np.minimum(s, np.sqrt(a * d))
    beta = np.clip(s - alpha, 0.0, np.sqrt(b * c))
    return alpha, beta


def gap_batch(a, b, c, d, s, n_grid: int = N_GRID):
    """Gap and optimal theta for parallel arrays of reduced parameters."""
    alpha, beta = split_s(a, b, c, d, s)
    res = minimize_theta_batch(a, b, c, d, alpha, beta, n_grid=n_grid)
    return res.gap, res.theta_opt


def gap_at(a: float, b: float, c: float, d: float, s: float) -> tuple[float, float]:
    """Two-branch discord minus exact discord at diagonal (a, b, c, d), alpha + beta = s."""
    XState(a, b, c, d)
    top = float(s_max(a, b, c, d))
    if s < 0 or s > top + 1e-12:
        raise InfeasibleS(f"s={s!r} outside [0, {top!r}]")
    s = min(s, top)
    gap, theta = gap_batch(*(np.array([x], dtype=float) for x in (a, b, c, d, s)))
    return float(gap[0]), float(theta[0])


# -- domain ------------------------------------------------------------------


def _ndim(mode):
    return 4 if mode == "general" else 3


def _to_params(mode, coords):
    """Box coordinates -> columns (a, b, c, d, s)."""
    if mode == "general":
        t0, t1, t2, u = coords.T
        a, b, c = 0.5 * t0**2, 0.5 * t1**2, t2**2
    else:
        t0, t1, u = coords.T
        a, b = 0.5 * t0**2, 0.5 * t1**2
        c = b
    d = np.maximum(1.0 - a - b - c, 0.0)
    return a, b, c, d, u * s_max(a, b, c, d)


def _feasible(mode, coords):
    if mode == "general":
        t0, t1, t2, _ = coords.T
        a, b, c = 0.5 * t0**2, 0.5 * t1**2, t2**2
    else:
        t0, t1, _ = coords.T
        a, b = 0.5 * t0**2, 0.5 * t1**2
        c = b
    d = 1.0 - a - b - c
    return (b <= a + FEAS_EPS) & (a + b <= c + d + FEAS_EPS) & (d >= -FEAS_EPS)


def _mesh(axes):
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))


def _key(row):
    return tuple(np.round(row, 13).tolist())


# -- evaluation --------------------------------------------------------------


def _eval_chunk(args):
    mode, coords = args
    a, b, c, d, s = _to_params(mode, coords)
    gap, theta = gap_batch(a, b, c, d, s)
    return np.column_stack([a, b, c, d, s, gap, theta])


def _evaluate(mode, coords, workers):
    """Records (a, b, c, d, s, gap, theta) for each coordinate row.

    Chunks have a fixed size independent of ``workers`` so every cell is
    computed inside an identical batch; the output is bitwise independent of
    the pool size and scheduling.
    """
    if len(coords) == 0:
        return np.empty((0, 7))
    chunks = [(mode, coords[i : i + CHUNK]) for i in range(0, len(coords), CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_eval_chunk, chunks))
    else:
        parts = [_eval_chunk(ch) for ch in chunks]
    return np.concatenate(parts)


def _histogram(gaps):
    counts, _ = np.histogram(gaps, bins=np.array(HIST_EDGES))
    return [
        {"lo": lo, "hi": hi, "count": int(n)}
        for lo, hi, n in zip(HIST_EDGES[:-1], HIST_EDGES[1:], counts)
    ]


def _top(records, k):
    """Indices of the k highest gaps; ties go to the earlier cell."""
    order = np.lexsort((np.arange(len(records)), -records[:, 5]))
    return order[:k]


def _level0(config):
    coords = _mesh([np.linspace(0.0, 1.0, config.coarse_steps)] * _ndim(config.mode))
    return coords[_feasible(config.mode, coords)]


def _refine(config, level, coords, records, seen):
    ndim = _ndim(config.mode)
    half = np.full(ndim, config.refine_shrink**level / (config.coarse_steps - 1))
    offsets = _mesh([np.linspace(-h, h, config.refine_steps) for h in half])
    if config.jitter:
        rng = np.random.default_rng([config.seed, level])
        step = 2 * half / (config.refine_steps - 1)
        offsets = offsets + rng.uniform(-0.5, 0.5, size=len(half)) * step * config.jitter
    new = []
    for idx in _top(records, config.refine_top_k):
        cand = np.clip(coords[idx] + offsets, 0.0, 1.0)
        cand = cand[_feasible(config.mode, cand)]
        for row in cand:
            k = _key(row)
            if k not in seen:
                seen.add(k)
                new.append(row)
    return np.array(new).reshape(-1, ndim)


def _save_checkpoint(path, config, level, coords, records, level_max):
    payload = {
        "version": CHECKPOINT_VERSION,
        "config": config.result_key(),
        "level": level,
        "level_max": level_max,
        "coords": coords.tolist(),
        "records": records.tolist(),
    }
    atomic_write_text(path, json.dumps(payload))


def _load_checkpoint(path, config):
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("version") != CHECKPOINT_VERSION or data.get("config") != config.result_key():
        raise ValueError(f"checkpoint {path} was written for a different sweep configuration")
    ndim = _ndim(config.mode)
    coords = np.array(data["coords"], dtype=float).reshape(-1, ndim)
    records = np.array(data["records"], dtype=float).reshape(-1, 7)
    return data["level"], coords, records, list(data["level_max"])


def run_sweep(config: SweepConfig, checkpoint=None, log=None) -> SweepReport:
    """Grid search plus top-K box refinement of the gap over the reduced region.

    If ``checkpoint`` is a path, state is written there after every level and
    an existing file for the same configuration is resumed from.
    """
    t0 = time.perf_counter()
    if checkpoint is not None and Path(checkpoint).exists():
        done, coords, records, level_max = _load_checkpoint(checkpoint, config)
    else:
        coords = _level0(config)
        records = _evaluate(config.mode, coords, config.workers)
        level_max = [float(records[:, 5].max())]
        done = 0
        if checkpoint is not None:
            _save_checkpoint(checkpoint, config, done, coords, records, level_max)
    if log:
        log(f"level {done}: {len(records)} cells, max gap {level_max[-1]:.6g}")

    seen = {_key(row) for row in coords}
    for level in range(done + 1, config.refine_levels + 1):
        new = _refine(config, level, coords, records, seen)
        coords = np.concatenate([coords, new])
        records = np.concatenate([records, _evaluate(config.mode, new, config.workers)])
        level_max.append(float(records[:, 5].max()))
        if checkpoint is not None:
            _save_checkpoint(checkpoint, config, level, coords, records, level_max)
        if log:
            log(f"level {level}: {len(new)} new cells, max gap {level_max[-1]:.6g}")

    top = _top(records, config.refine_top_k)
    cells = [SweepCell(*map(float, records[i])) for i in top]
    return SweepReport(
        config=config,
        cells_evaluated=len(records),
        max_gap=cells[0].gap,
        witness=cells[0],
        histogram=_histogram(records[:, 5]),
        wall_time=time.perf_counter() - t0,
        level_max=level_max,
        top_cells=cells,
        records=records,
    )


# -- reference counterexamples -----------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    name: str
    a: float
    b: float
    c: float
    d: float
    s: float
    gap: float
    theta: float

    def state(self) -> XState:
        return XState(self.a, self.b, self.c, self.d, self.s, 0.0)


# Largest gaps reported for general and symmetric (b = c) X states,
# as printed to six decimals.
GENERAL_COUNTEREXAMPLE = Counterexample(
    "general", 0.027180, 0.000224, 0.027327, 0.945269, 0.141651, 0.002047, 0.607573
)
SYMMETRIC_COUNTEREXAMPLE = Counterexample(
    "symmetric", 0.021726, 0.010288, 0.010288, 0.957698, 0.128057, 0.000573, 0.477918
)
COUNTEREXAMPLES = (GENERAL_COUNTEREXAMPLE, SYMMETRIC_COUNTEREXAMPLE)


@dataclass(frozen=True)
class VerificationEntry:
    name: str
    expected_gap: float
    measured_gap: float
    expected_theta: float
    measured_theta: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple
    gap_tol: float
    theta_tol: float

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def raise_if_failed(self):
        if not self.passed:
            bad = [e for e in self.entries if not e.passed]
            raise VerificationFailed("; ".join(
                f"{e.name}: gap {e.measured_gap:.12g} (expected {e.expected_gap}), "
                f"theta {e.measured_theta:.12g} (expected {e.expected_theta})"
                for e in bad
            ))


def verify_counterexamples(fixtures=COUNTEREXAMPLES, gap_tol: float = 5e-5, theta_tol: float = 5e-3) -> VerificationReport:
    entries = []
    for fx in fixtures:
        gap, theta = gap_at(fx.a, fx.b, fx.c, fx.d, fx.s)
        ok = abs(gap - fx.gap) <= gap_tol and abs(theta - fx.theta) <= theta_tol
        entries.append(VerificationEntry(fx.name, fx.gap, gap, fx.theta, theta, ok))
    return VerificationReport(tuple(entries), gap_tol, theta_tol)
