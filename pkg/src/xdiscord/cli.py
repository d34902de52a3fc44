"""Command-line interface: ``xdiscord {compute,sweep,verify,curve}``.

Exit codes: 0 success, 2 input or configuration error, 3 failed assertion or
verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .discord import classical_correlation, minimize_theta, mutual_information
from .entropy import NATS_PER_BIT, conditional_entropy_measured_arrays, conditional_entropy_unmeasured_arrays
from .sweep import (
    COUNTEREXAMPLES,
    SweepConfig,
    atomic_write_text,
    run_sweep,
    verify_counterexamples,
)
from .xstate import XState, XStateError, XStateRaw, canonicalize

EXIT_OK, EXIT_INPUT, EXIT_ASSERT = 0, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CurveSample:
    theta: float
    phi: float
    s_cond: float
    discord_value: float


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _default_workers() -> int:
    env = os.environ.get("DISCORD_WORKERS")
    if env is None:
        return 1
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DISCORD_WORKERS={env!r} is not an integer")


def _read_state(args) -> XState:
    if args.state is not None:
        try:
            with open(args.state, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read state file {args.state}: {exc}")
        if "state" in data and isinstance(data["state"], dict):
            data = data["state"]
        raw = XStateRaw.from_dict(data)
    else:
        raw = XStateRaw(args.a, args.b, args.c, args.d, args.alpha, args.beta)
    return canonicalize(raw)


def _add_state_args(p):
    p.add_argument("state", nargs="?", help="JSON file with keys a, b, c, d, alpha, beta")
    for name in ("a", "b", "c", "d", "alpha", "beta"):
        p.add_argument(f"--{name}", type=float, default=0.0)


# -- compute -----------------------------------------------------------------


def compute_payload(s: XState) -> dict:
    res = minimize_theta(s)
    return {
        "state": s.to_dict(),
        "result": res.to_dict(),
        "mutual_information": mutual_information(s),
        "classical_correlation": classical_correlation(s, res),
        "units": "nats",
    }


def cmd_compute(args) -> int:
    s = _read_state(args)
    payload = compute_payload(s)
    if args.json:
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    res = payload["result"]
    scale = 1 / NATS_PER_BIT if args.bits else 1.0
    unit = "bits" if args.bits else "nats"
    # discord is nonnegative; hide round-off below zero
    show = lambda v: _fmt(max(v, 0.0) * scale) if v > -1e-9 else _fmt(v * scale)  # noqa: E731
    rows = [
        ("discord_exact", show(res["discord_exact"])),
        ("theta_opt", _fmt(res["theta_opt"])),
        ("d_sigma_x", show(res["d_sigma_x"])),
        ("d_sigma_z", show(res["d_sigma_z"])),
        ("discord_ara", show(res["discord_ara"])),
        ("ara_branch", res["ara_branch"]),
        ("gap", show(res["gap"])),
        ("mutual_information", show(payload["mutual_information"])),
        ("classical_correlation", show(payload["classical_correlation"])),
    ]
    width = max(len(k) for k, _ in rows)
    print(f"# entropic quantities in {unit}")
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    return EXIT_OK


# -- sweep -------------------------------------------------------------------


def cmd_sweep(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        config = SweepConfig(
            mode=args.mode,
            coarse_steps=args.coarse_steps,
            refine_levels=args.refine_levels,
            refine_top_k=args.refine_top_k,
            refine_shrink=args.refine_shrink,
            refine_steps=args.refine_steps,
            seed=args.seed,
            jitter=args.jitter,
            workers=workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    try:
        report = run_sweep(config, checkpoint=args.checkpoint, log=log)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.out:
        atomic_write_text(args.out, json.dumps(report.to_dict(), indent=2) + "\n")
    if args.csv:
        atomic_write_text(args.csv, report.to_csv())
    w = report.witness
    print(f"cells_evaluated {report.cells_evaluated}")
    print(f"max_gap {_fmt(report.max_gap)}")
    print(
        "witness a={} b={} c={} d={} s={} theta_opt={}".format(
            *(_fmt(x) for x in (w.a, w.b, w.c, w.d, w.s, w.theta_opt))
        )
    )
    if args.assert_bound is not None and report.max_gap >= args.assert_bound:
        print(f"FAIL: max_gap {_fmt(report.max_gap)} >= bound {args.assert_bound}", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    report = verify_counterexamples(COUNTEREXAMPLES, gap_tol=args.tolerance, theta_tol=args.theta_tolerance)
    for e in report.entries:
        status = "PASS" if e.passed else "FAIL"
        print(
            f"{status} {e.name}: gap {_fmt(e.measured_gap)} vs {e.expected_gap} (tol {args.tolerance:g}), "
            f"theta {_fmt(e.measured_theta)} vs {e.expected_theta} (tol {args.theta_tolerance:g})"
        )
    return EXIT_OK if report.passed else EXIT_ASSERT


# -- curve -------------------------------------------------------------------


def curve_samples(s: XState, points: int, phi_grid: int = 1):
    """Objective samples over theta in [0, pi] for each phi in [0, pi)."""
    theta = np.linspace(0.0, math.pi, points)
    phis = np.linspace(0.0, math.pi, phi_grid, endpoint=False)
    p = (s.a, s.b, s.c, s.d, s.alpha, s.beta)
    base = float(conditional_entropy_unmeasured_arrays(*p))
    out = []
    for phi in phis:
        cond = conditional_entropy_measured_arrays(*p, theta, phi)
        out.extend(
            CurveSample(float(t), float(phi), float(v), float(v - base)) for t, v in zip(theta, cond)
        )
    return out


def curve_csv(s: XState, points: int, phi_grid: int = 1) -> str:
    samples = curve_samples(s, points, phi_grid)
    theta_opt = minimize_theta(s).theta_opt
    thetas = np.linspace(0.0, math.pi, points)
    marks = {}
    for label, target in (("sigma_z", 0.0), ("sigma_x", math.pi / 2), ("theta_opt", theta_opt)):
        marks.setdefault(int(np.argmin(np.abs(thetas - target))), []).append(label)
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "phi", "s_cond", "discord_value", "mark"])
    for k, smp in enumerate(samples):
        i = k % points
        mark = "|".join(marks.get(i, [])) if k < points else ""
        w.writerow([_fmt(smp.theta), _fmt(smp.phi), _fmt(smp.s_cond), _fmt(smp.discord_value), mark])
    return buf.getvalue()


def cmd_curve(args) -> int:
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.phi_grid < 1:
        raise UsageError("--phi-grid must be >= 1")
    text = curve_csv(_read_state(args), args.points, args.phi_grid)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xdiscord", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="exact and two-branch discord of one state")
    _add_state_args(p)
    p.add_argument("--json", action="store_true", help="machine-readable output (nats)")
    p.add_argument("--bits", action="store_true", help="display entropic quantities in bits")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="worst-case gap search")
    defaults = SweepConfig()
    p.add_argument("--mode", choices=("general", "symmetric"), default=defaults.mode)
    p.add_argument("--coarse-steps", type=int, default=defaults.coarse_steps)
    p.add_argument("--refine-levels", type=int, default=defaults.refine_levels)
    p.add_argument("--refine-top-k", type=int, default=defaults.refine_top_k)
    p.add_argument("--refine-shrink", type=float, default=defaults.refine_shrink)
    p.add_argument("--refine-steps", type=int, default=defaults.refine_steps)
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--jitter", type=float, default=defaults.jitter)
    p.add_argument("--workers", type=int, default=None, help="default: $DISCORD_WORKERS or 1")
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--csv", help="CSV path, one row per evaluated cell")
    p.add_argument("--checkpoint", help="resume/checkpoint file written after each level")
    p.add_argument("--assert-bound", type=float, default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check the reference counterexample states")
    p.add_argument("--tolerance", type=float, default=5e-5, help="absolute gap tolerance")
    p.add_argument("--theta-tolerance", type=float, default=5e-3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("curve", help="CSV of the objective over theta")
    _add_state_args(p)
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--phi-grid", type=int, default=1)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (XStateError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
