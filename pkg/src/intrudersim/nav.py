"""Arithmetic-mean obstacle navigation.

Each side's nonzero sonar readings are averaged, converted to metres and
the robot steers so that its left distance tracks the midpoint of the two.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import NamedTuple, Sequence

from .sonar import MAX_SENSOR_VALUE, SonarScan, raw_to_distance


@dataclass(frozen=True)
class ControllerParams:
    max_wheel_speed: float = 5.24  # rad/s
    base_fraction: float = 0.5
    steer_delta: float = 0.5  # rad/s
    band: float = 0.015  # m
    engage_gate: float = 3.2  # m
    clear_raw_gate: float = 700
    pixel_stop: int = 3000
    pixel_search: int = 10
    range_max: float = 10.0  # m

    def __post_init__(self):
        if not 0 < self.base_fraction <= 1:
            raise ValueError("base_fraction must lie in (0, 1]")
        if self.steer_delta > self.base_fraction * self.max_wheel_speed:
            raise ValueError("steer_delta exceeds the base wheel speed")
        if not self.band > 0:
            raise ValueError("band must be positive")
        if not 0 < self.clear_raw_gate <= MAX_SENSOR_VALUE:
            raise ValueError("clear_raw_gate must lie in (0, 1024]")

    @property
    def base_speed(self) -> float:
        return self.base_fraction * self.max_wheel_speed

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


class WheelCommand(NamedTuple):
    left: float
    right: float


STOP = WheelCommand(0.0, 0.0)


class NavDecision(NamedTuple):
    mean_raw_left: float
    mean_raw_right: float
    d_left: float
    d_right: float
    midpoint: float
    engaged: bool
    command: WheelCommand


def side_mean(raws: Sequence[float]) -> float:
    """Mean of the strictly positive readings, 0 when there are none."""
    hits = [r for r in raws if r > 0]
    return sum(hits) / len(hits) if hits else 0.0


def midpoint(d_left: float, d_right: float) -> float:
    return (d_left + d_right) / 2


def obstacle_clear(scan: SonarScan, params: ControllerParams = ControllerParams()) -> bool:
    return all(r < params.clear_raw_gate for r in scan.raw)


def steer(d_left: float, d_right: float,
          params: ControllerParams = ControllerParams()) -> tuple[float, bool, WheelCommand]:
    """Midpoint, whether the band controller is engaged, and the wheel command."""
    target = midpoint(d_left, d_right)
    base = params.base_speed
    if target >= params.engage_gate:
        return target, False, WheelCommand(base, base)
    err = target - d_left
    if err > params.band:
        # left side is nearer: speed up the left wheel to veer right
        return target, True, WheelCommand(base + params.steer_delta, base - params.steer_delta)
    if err < -params.band:
        return target, True, WheelCommand(base - params.steer_delta, base + params.steer_delta)
    return target, True, WheelCommand(base, base)


def nav_command(scan: SonarScan, params: ControllerParams = ControllerParams()) -> NavDecision:
    """Average each side in raw units, convert to metres, then :func:`steer`."""
    mean_l = side_mean(scan.left)
    mean_r = side_mean(scan.right)
    d_left = raw_to_distance(mean_l)
    d_right = raw_to_distance(mean_r)
    target, engaged, cmd = steer(d_left, d_right, params)
    return NavDecision(mean_l, mean_r, d_left, d_right, target, engaged, cmd)
