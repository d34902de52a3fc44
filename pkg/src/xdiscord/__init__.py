"""Quantum discord of two-qubit X states.

Exact discord by 1-D minimization over the measurement angle, the two-branch
(sigma_x / sigma_z) closed-form estimate, and worst-case searches of the gap
between them.  All entropies are in nats.
"""

from .discord import (
    DiscordResult,
    MeasurementAngles,
    ara_discord,
    classical_correlation,
    discord_for_measurement,
    minimize_theta,
    minimize_theta_batch,
    mutual_information,
    oracle_discord_2d,
)
from .sweep import SweepConfig, SweepReport, gap_at, run_sweep, verify_counterexamples
from .xstate import XState, XStateRaw, apply_flips, canonicalize, reduce_A, reduce_B

__all__ = [
    "DiscordResult",
    "MeasurementAngles",
    "SweepConfig",
    "SweepReport",
    "XState",
    "XStateRaw",
    "apply_flips",
    "ara_discord",
    "canonicalize",
    "classical_correlation",
    "discord_for_measurement",
    "gap_at",
    "minimize_theta",
    "minimize_theta_batch",
    "mutual_information",
    "oracle_discord_2d",
    "reduce_A",
    "reduce_B",
    "run_sweep",
    "verify_counterexamples",
]
