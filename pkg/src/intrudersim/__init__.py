"""Deterministic 2-D simulator of decentralised robots tracking coloured intruders.

Robots thread between obstacles by steering toward the midpoint of their
left/right sonar means, then, once nothing is near, pick the closest intruder
seen by their colour camera and keep it centred until it fills enough pixels.
"""
from .geometry import (Bodies, BodyGeometry, Circle, Hit, Pose, Rect, Vec2, World,
                       cast_rays, clearance, ray_cast)
from .sonar import SonarLayout, SonarScan, distance_to_raw, raw_to_distance, scan
from .perception import (CameraFrame, CameraParams, Color, DepthFrame, SegmentationResult,
                         Sprite, classify_pixel, render, segment)
from .nav import (ControllerParams, NavDecision, WheelCommand, midpoint, nav_command, steer,
                  obstacle_clear, side_mean)
from .pursuit import PursuitDecision, PursuitMode, TargetChoice, pursuit_command, select_target
from .scenario import (Scenario, ScenarioError, ScenarioParseError, ScenarioValidationError,
                       dump_scenario, load_scenario, load_scenario_file, shipped_scenario)
from .engine import Simulator, Trace, TraceRecord, integrate, intruder_step, run
from .analysis import (FollowMetricsRow, PathMetricsRow, emit_plot, follow_metrics,
                       path_metrics, path_row)

__version__ = "0.1.0"
