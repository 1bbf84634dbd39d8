"""Nearest-intruder target selection and pixel-balance pursuit."""
from __future__ import annotations

from enum import Enum
from typing import NamedTuple, Optional

from .nav import STOP, ControllerParams, WheelCommand
from .perception import Color, SegmentationResult


class PursuitMode(str, Enum):
    FOLLOW = "Follow"
    SEARCH_SPIN = "SearchSpin"
    STOPPED = "Stopped"


class TargetChoice(NamedTuple):
    color: Optional[Color]  # None means no target
    chosen_range: float
    left_pixels: int
    right_pixels: int

    @property
    def label(self) -> str:
        return self.color.value if self.color is not None else "none"


class PursuitDecision(NamedTuple):
    choice: TargetChoice
    total_pixels: int
    mode: PursuitMode
    command: WheelCommand


def select_target(seg: SegmentationResult, params: ControllerParams = ControllerParams()) -> TargetChoice:
    """Pick the intruder with the smaller sensed range (ties go to blue)."""
    blue, green = seg.blue, seg.green
    if blue.min_range >= params.range_max and green.min_range >= params.range_max:
        return TargetChoice(None, params.range_max, 0, 0)
    if green.min_range < blue.min_range:
        return TargetChoice(Color.GREEN, green.min_range, green.left_count, green.right_count)
    return TargetChoice(Color.BLUE, blue.min_range, blue.left_count, blue.right_count)


def pursuit_command(seg: SegmentationResult, params: ControllerParams = ControllerParams()) -> PursuitDecision:
    choice = select_target(seg, params)
    left, right = choice.left_pixels, choice.right_pixels
    total = left + right
    base, delta = params.base_speed, params.steer_delta
    if right < left:
        cmd = WheelCommand(base - delta, base + delta)
    elif right > left:
        cmd = WheelCommand(base + delta, base - delta)
    else:
        cmd = WheelCommand(base, base)
    mode = PursuitMode.FOLLOW
    if total < params.pixel_search:
        mode, cmd = PursuitMode.SEARCH_SPIN, WheelCommand(0.0, base)
    if total > params.pixel_stop:
        mode, cmd = PursuitMode.STOPPED, STOP
    return PursuitDecision(choice, total, mode, cmd)
