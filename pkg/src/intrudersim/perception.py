"""Synthetic colour camera with aligned range image, and colour segmentation.

The camera uses equiangular columns (every column spans the same yaw step)
and a per-column perspective mapping for rows, i.e. a cylindrical image
surface. Obstacles and walls are treated as infinitely tall; robots and
intruders are vertical cylinders centred at camera height.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .geometry import Pose, World, cast_rays

BACKGROUND_RGB = (255, 255, 255)
OBSTACLE_RGB = (100, 100, 100)
ROBOT_RGB = (120, 120, 120)
BLUE_RGB = (0, 0, 255)
GREEN_RGB = (0, 200, 0)


class Color(str, Enum):
    BLUE = "blue"
    GREEN = "green"

    @property
    def rgb(self) -> tuple[int, int, int]:
        return BLUE_RGB if self is Color.BLUE else GREEN_RGB


@dataclass(frozen=True)
class CameraParams:
    width: int = 256
    height: int = 128
    horizontal_fov: float = math.radians(60.0)
    max_depth: float = 10.0
    mount_heading_offset: float = 0.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0 or self.width % 2:
            raise ValueError("camera width must be a positive even number, height positive")
        if not 0 < self.horizontal_fov < math.pi:
            raise ValueError("horizontal_fov must lie in (0, pi)")
        if not self.max_depth > 0:
            raise ValueError("max_depth must be positive")

    @property
    def pixels_per_radian(self) -> float:
        return self.width / self.horizontal_fov

    def column_angles(self) -> np.ndarray:
        """Yaw of each column's centre relative to the optical axis (left positive)."""
        u = np.arange(self.width) + 0.5
        return self.horizontal_fov * (0.5 - u / self.width)

    def row_slopes(self) -> np.ndarray:
        """Elevation tangent of each row centre (top positive)."""
        v = np.arange(self.height) + 0.5
        return (self.height / 2 - v) / self.pixels_per_radian


class Sprite(NamedTuple):
    """A renderable vertical cylinder."""

    x: float
    y: float
    radius: float
    height: float
    rgb: tuple[int, int, int]


@dataclass
class CameraFrame:
    pixels: np.ndarray  # (height, width, 3) uint8

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def mirrored(self) -> "CameraFrame":
        return CameraFrame(self.pixels[:, ::-1].copy())

    def write_ppm(self, path) -> None:
        h, w, _ = self.pixels.shape
        with open(path, "wb") as fh:
            fh.write(b"P6\n%d %d\n255\n" % (w, h))
            fh.write(np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes())


@dataclass
class DepthFrame:
    depth: np.ndarray  # (height, width) metres

    def mirrored(self) -> "DepthFrame":
        return DepthFrame(self.depth[:, ::-1].copy())


@dataclass(frozen=True)
class ColorSighting:
    left_count: int
    right_count: int
    min_range: float

    @property
    def total(self) -> int:
        return self.left_count + self.right_count


@dataclass(frozen=True)
class SegmentationResult:
    blue: ColorSighting
    green: ColorSighting

    def __getitem__(self, color: Color) -> ColorSighting:
        return self.blue if Color(color) is Color.BLUE else self.green


def classify_pixel(r: int, g: int, b: int) -> Optional[Color]:
    """Fixed RGB thresholds; the two predicates cannot both hold."""
    for ch in (r, g, b):
        if not 0 <= ch <= 255:
            raise ValueError("channel values must lie in [0, 255]")
    if b > 130 and r < 134 and g < 134:
        return Color.BLUE
    if b < 116 and r < 116 and g > 161:
        return Color.GREEN
    return None


def classify_image(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Boolean blue and green masks for an (h, w, 3) image."""
    r, g, b = pixels[..., 0], pixels[..., 1], pixels[..., 2]
    blue = (b > 130) & (r < 134) & (g < 134)
    green = (b < 116) & (r < 116) & (g > 161)
    return blue, green


def segment(frame: CameraFrame, depth: DepthFrame, max_depth: float = 10.0) -> SegmentationResult:
    """Count each colour per image half and track its nearest range."""
    if frame.pixels.shape[:2] != depth.depth.shape:
        raise ValueError("camera and depth frames are not aligned")
    half = frame.width // 2
    out = {}
    for color, mask in zip((Color.BLUE, Color.GREEN), classify_image(frame.pixels)):
        n_left = int(mask[:, :half].sum())
        n_right = int(mask[:, half:].sum())
        rng = float(depth.depth[mask].min()) if (n_left + n_right) else max_depth
        out[color] = ColorSighting(n_left, n_right, min(rng, max_depth))
    return SegmentationResult(out[Color.BLUE], out[Color.GREEN])


def _column_hits(cam_x, cam_y, yaw, sprite: Sprite):
    """Horizontal distance from the camera to the sprite's near face per column."""
    dx, dy = np.cos(yaw), np.sin(yaw)
    ox, oy = cam_x - sprite.x, cam_y - sprite.y
    b = dx * ox + dy * oy
    c = ox * ox + oy * oy - sprite.radius ** 2
    disc = b * b - c
    with np.errstate(invalid="ignore"):
        t = -b - np.sqrt(disc)
    return np.where((disc >= 0) & (c > 0) & (t > 0), t, np.inf)


def render(world: World, self_pose: Pose, sprites: Sequence[Sprite],
           params: Optional[CameraParams] = None) -> tuple[CameraFrame, DepthFrame]:
    """Render the colour image and range image seen from ``self_pose``.

    ``sprites`` are the other robots and intruders; the observer itself must
    not be included.
    """
    params = params or CameraParams()
    W, H = params.width, params.height
    yaw = self_pose.heading + params.mount_heading_offset + params.column_angles()
    slopes = params.row_slopes()

    # static geometry is full height: one distance per column
    wall, _ = cast_rays(world, np.tile([self_pose.x, self_pose.y], (W, 1)), yaw, math.inf)
    depth = np.broadcast_to(wall, (H, W)).copy()
    # layer 0 = obstacle, 1 = background, 2 + k = sprite k
    layer = np.broadcast_to(np.where(np.isfinite(wall), 0, 1).astype(np.uint8), (H, W)).copy()
    abs_slopes = np.abs(slopes)[:, None]

    for k, sp in enumerate(sprites):
        t = _column_hits(self_pose.x, self_pose.y, yaw, sp)
        cols = np.flatnonzero(np.isfinite(t))
        if cols.size == 0:
            continue
        # a convex body covers a contiguous run of columns
        lo, hi = cols[0], cols[-1] + 1
        tc = t[lo:hi]
        d_blk = depth[:, lo:hi]
        nearer = (abs_slopes <= (sp.height / 2) / tc) & (tc < d_blk)
        np.copyto(d_blk, np.broadcast_to(tc, d_blk.shape), where=nearer)
        layer[:, lo:hi][nearer] = k + 2

    palette = np.array([OBSTACLE_RGB, BACKGROUND_RGB] + [sp.rgb for sp in sprites], dtype=np.uint8)
    np.minimum(depth, params.max_depth, out=depth)
    return CameraFrame(np.take(palette, layer, axis=0)), DepthFrame(depth)


def dump_frame(frame: CameraFrame, directory, tick: int, robot_id: str) -> Path:
    path = Path(directory) / f"tick{tick:05d}_robot{robot_id}.ppm"
    frame.write_ppm(path)
    return path
