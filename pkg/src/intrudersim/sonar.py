"""Front sonar ring: eight beams, 5 m range, 45 degree incidence cutoff."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import Bodies, Pose, World, cast_rays

MAX_SENSOR_VALUE = 1024
SONAR_RANGE = 5.0

# indices 0..3 form the left group, 4..7 the right group
DEFAULT_BEARINGS_DEG = (90.0, 50.0, 30.0, 10.0, -10.0, -30.0, -50.0, -90.0)


@dataclass(frozen=True)
class SonarLayout:
    bearings: tuple[float, ...] = field(
        default_factory=lambda: tuple(math.radians(b) for b in DEFAULT_BEARINGS_DEG))
    max_range: float = SONAR_RANGE
    incidence_cutoff: float = math.radians(45.0)

    def __post_init__(self):
        if len(self.bearings) != 8:
            raise ValueError("sonar layout needs exactly 8 bearings")
        if any(a <= b for a, b in zip(self.bearings, self.bearings[1:])):
            raise ValueError("bearings must be strictly decreasing from left to right")
        if not self.max_range > 0:
            raise ValueError("max_range must be positive")
        if not 0 < self.incidence_cutoff <= math.pi / 2:
            raise ValueError("incidence_cutoff must lie in (0, pi/2]")


@dataclass(frozen=True)
class SonarScan:
    raw: tuple[int, ...]

    def __post_init__(self):
        if len(self.raw) != 8:
            raise ValueError("a scan holds 8 readings")
        if any(not 0 <= r <= MAX_SENSOR_VALUE for r in self.raw):
            raise ValueError("raw readings must lie in [0, 1024]")

    @property
    def left(self) -> tuple[int, ...]:
        return self.raw[:4]

    @property
    def right(self) -> tuple[int, ...]:
        return self.raw[4:]


def raw_to_distance(raw: float) -> float:
    """Linear raw -> metres map; raw 0 (no echo) reads as the full 5 m."""
    if not 0 <= raw <= MAX_SENSOR_VALUE:
        raise ValueError(f"raw value {raw} outside [0, {MAX_SENSOR_VALUE}]")
    return SONAR_RANGE * (1.0 - raw / MAX_SENSOR_VALUE)


def distance_to_raw(d: float) -> int:
    """Inverse of :func:`raw_to_distance`, never returning the 0 sentinel."""
    if not 0.0 <= d <= SONAR_RANGE:
        raise ValueError(f"distance {d} outside [0, {SONAR_RANGE}]")
    raw = int(round(MAX_SENSOR_VALUE * (1.0 - d / SONAR_RANGE)))
    return min(max(raw, 1), MAX_SENSOR_VALUE)


def _encode(dist: np.ndarray, inc: np.ndarray, layout: SonarLayout) -> np.ndarray:
    ok = np.isfinite(dist) & (dist <= layout.max_range) & (inc <= layout.incidence_cutoff)
    d = np.where(ok, np.minimum(dist, SONAR_RANGE), SONAR_RANGE)
    raw = np.rint(MAX_SENSOR_VALUE * (1.0 - d / SONAR_RANGE)).astype(int)
    raw = np.clip(raw, 1, MAX_SENSOR_VALUE)
    return np.where(ok, raw, 0)


def scan(world: World, self_pose: Pose, layout: Optional[SonarLayout] = None,
         bodies: Optional[Bodies] = None, self_index: int = -1) -> SonarScan:
    """Read all eight beams from ``self_pose``.

    ``self_index`` names the scanning robot inside ``bodies`` so it does not
    see itself.
    """
    layout = layout or SonarLayout()
    angles = self_pose.heading + np.asarray(layout.bearings)
    origins = np.tile([self_pose.x, self_pose.y], (8, 1))
    dist, inc = cast_rays(world, origins, angles, layout.max_range, bodies,
                          None if bodies is None else np.full(8, self_index))
    return SonarScan(tuple(int(v) for v in _encode(dist, inc, layout)))


def scan_many(world: World, poses: list[Pose], layout: SonarLayout,
              bodies: Bodies, indices: list[int]) -> list[SonarScan]:
    """Scan several robots in one batched cast (used by the engine)."""
    if not poses:
        return []
    bearings = np.asarray(layout.bearings)
    origins = np.repeat([[p.x, p.y] for p in poses], 8, axis=0)
    angles = (np.array([p.heading for p in poses])[:, None] + bearings[None]).reshape(-1)
    exclude = np.repeat(indices, 8)
    dist, inc = cast_rays(world, origins, angles, layout.max_range, bodies, exclude)
    raws = _encode(dist, inc, layout).reshape(len(poses), 8)
    return [SonarScan(tuple(int(v) for v in row)) for row in raws]
