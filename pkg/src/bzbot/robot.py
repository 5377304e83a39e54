"""Differential-drive kinematics reduced to the two motion primitives the
robot actually executes: turn 3 degrees, then advance 1.2 cm."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


class RobotError(ValueError):
    pass


@dataclass(frozen=True)
class Pose:
    x: float = 0.0            # cm
    y: float = 0.0            # cm
    theta: float = 0.0        # degrees, normalized into (-180, 180]

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.theta)):
            raise RobotError("pose must be finite")
        if not -180.0 < self.theta <= 180.0:
            raise RobotError(f"theta {self.theta} outside (-180, 180]")


@dataclass(frozen=True)
class MotionConfig:
    step_length_cm: float = 1.2
    turn_angle_deg: float = 3.0

    def __post_init__(self):
        if self.step_length_cm < 0:
            raise RobotError("step length must be >= 0")
        if not 0.0 < self.turn_angle_deg < 180.0:
            raise RobotError("turn angle must lie in (0, 180)")


def normalize_angle(theta: float) -> float:
    """Wrap an angle in degrees into (-180, 180]."""
    t = math.fmod(theta + 180.0, 360.0)
    if t <= 0.0:
        t += 360.0
    return t - 180.0


def apply(pose: Pose, decision, motion: MotionConfig) -> Pose:
    """Execute one decision: STAY holds, LEFT/RIGHT turn then advance."""
    from .controller import SteerDecision

    if decision == SteerDecision.STAY:
        return pose
    sign = 1.0 if decision == SteerDecision.LEFT else -1.0
    theta = normalize_angle(pose.theta + sign * motion.turn_angle_deg)
    rad = math.radians(theta)
    return Pose(x=pose.x + motion.step_length_cm * math.cos(rad),
                y=pose.y + motion.step_length_cm * math.sin(rad),
                theta=theta)


def trajectory(start: Pose, decisions: Iterable, motion: MotionConfig) -> list[Pose]:
    """Left fold of ``apply``; returns len(decisions) + 1 poses."""
    poses = [start]
    for d in decisions:
        poses.append(apply(poses[-1], d, motion))
    return poses
