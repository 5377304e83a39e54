"""Steering law: sign of the marble potential with a dead-band.

Positive potential turns the robot left, negative turns it right, and
anything within the dead-band (default 1 mV, strict inequality) commands no
movement. Decisions are taken every 2 s starting 3 s after activation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class ControllerError(ValueError):
    pass


class SteerDecision(Enum):
    LEFT = "L"
    RIGHT = "R"
    STAY = "S"


@dataclass(frozen=True)
class ControlConfig:
    dead_band: float = 1e-3          # volts
    decision_period_s: float = 2.0
    startup_delay_s: float = 3.0

    def __post_init__(self):
        if self.dead_band <= 0 or self.decision_period_s <= 0 or self.startup_delay_s <= 0:
            raise ControllerError("control configuration values must be > 0")


def decide(volts: float, config: ControlConfig) -> SteerDecision:
    """Map one potential reading to a steering decision.

    Non-finite input is an error, never a silent STAY.
    """
    if not math.isfinite(volts):
        raise ControllerError(f"potential reading is not finite: {volts!r}")
    if volts > config.dead_band:
        return SteerDecision.LEFT
    if volts < -config.dead_band:
        return SteerDecision.RIGHT
    return SteerDecision.STAY


def control_tick(marble, pose, control: ControlConfig, motion):
    """One control-loop tick: read, decide, move.

    The marble must already be advanced to the tick instant; its latest
    sample is the one reading the loop takes. Returns the sample, the
    decision, and the new pose.
    """
    from .robot import apply  # local import to keep module load acyclic

    if marble.t_s < control.startup_delay_s:
        raise ControllerError(
            f"tick at {marble.t_s} s precedes startup delay {control.startup_delay_s} s")
    sample = marble.last_sample
    if sample is None or sample.t_s != marble.t_s:
        raise ControllerError("marble has no sample at the tick instant")
    decision = decide(sample.volts, config=control)
    return sample, decision, apply(pose, decision, motion)
