"""Closed-form ballistic solves used when compiling thrown-object scenes.

Drag, spin, and restitution during flight are ignored; gravity is the only
force. The solver returns the horizontal speed needed for a falling object to
cover a given distance by the time it drops to a target height. Direction is
reported along +Y; callers map it onto the camera-to-object axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

STANDARD_GRAVITY = 9.81  # m/s^2


class KinematicsError(ValueError):
    pass


class UnreachableTargetError(KinematicsError):
    """The target cannot be hit: no fall time is available to cover the distance."""


@dataclass(frozen=True)
class BallisticQuery:
    start_height: float  # m
    target_height: float  # m
    horizontal_distance: float  # m
    g: float = STANDARD_GRAVITY  # m/s^2

    def __post_init__(self):
        for label, v in (("start_height", self.start_height),
                         ("target_height", self.target_height),
                         ("horizontal_distance", self.horizontal_distance),
                         ("g", self.g)):
            if not math.isfinite(v):
                raise KinematicsError(f"{label} must be finite")
        if self.g <= 0:
            raise KinematicsError("g must be > 0")
        if self.horizontal_distance < 0:
            raise KinematicsError("horizontal_distance must be >= 0")


def fall_time(height_difference: float, g: float = STANDARD_GRAVITY) -> float:
    """Seconds for a resting point mass to fall ``height_difference`` meters."""
    if not (math.isfinite(height_difference) and math.isfinite(g)):
        raise KinematicsError("arguments must be finite")
    if g <= 0:
        raise KinematicsError("g must be > 0")
    if height_difference < 0:
        raise KinematicsError("height_difference must be >= 0")
    return math.sqrt(2.0 * height_difference / g)


def projectile_velocity(q: BallisticQuery) -> tuple[float, float, float]:
    """Initial velocity (vx, vy, vz) whose horizontal speed covers the query
    distance during the fall from start to target height.

    Vertical component is zero; the speed is placed on the +Y axis.
    """
    if q.start_height < q.target_height:
        raise KinematicsError("target_height is above start_height")
    if q.horizontal_distance == 0:
        return (0.0, 0.0, 0.0)
    if q.start_height == q.target_height:
        raise UnreachableTargetError(
            "equal start and target heights leave no fall time to cover the distance")
    t = fall_time(q.start_height - q.target_height, q.g)
    return (0.0, q.horizontal_distance / t, 0.0)
