"""Planar world geometry: poses, obstacles, ray casting and clearance.

Coordinates are metres in a right-handed frame (x right, y up); headings are
radians measured counter-clockwise from +x and kept in (-pi, pi].
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

#: Sentinel returned by :func:`clearance` when nothing is in the world.
MAX_DISTANCE = sys.float_info.max


def wrap_angle(theta: float) -> float:
    """Normalise an angle to (-pi, pi]."""
    wrapped = math.pi - math.fmod(math.pi - theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class Pose:
    """Robot or intruder pose; ``heading`` is normalised on construction."""

    x: float
    y: float
    heading: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.heading)):
            raise ValueError("pose components must be finite")
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    @property
    def position(self) -> Vec2:
        return Vec2(self.x, self.y)

    def distance_to(self, other: "Pose") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle given by centre and half extents."""

    cx: float
    cy: float
    hx: float
    hy: float

    def __post_init__(self):
        if not (self.hx > 0 and self.hy > 0):
            raise ValueError("rectangle half-extents must be positive")

    @property
    def kind(self) -> str:
        return "box"

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.cx - self.hx, self.cy - self.hy, self.cx + self.hx, self.cy + self.hy)


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("circle radius must be positive")

    @property
    def kind(self) -> str:
        return "circle"

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)


Obstacle = Union[Rect, Circle]


@dataclass(frozen=True)
class BodyGeometry:
    """Differential-drive platform dimensions (Pioneer 3-DX defaults)."""

    body_radius: float = 0.22
    wheel_radius: float = 0.0975
    axle_track: float = 0.33

    def __post_init__(self):
        if min(self.body_radius, self.wheel_radius, self.axle_track) <= 0:
            raise ValueError("body geometry values must be positive")
        if self.body_radius < self.axle_track / 2:
            raise ValueError("body_radius must be at least half the axle track")


class Hit(NamedTuple):
    distance: float
    incidence: float


class Bodies(NamedTuple):
    """Dynamic circular bodies (robots, intruders) for one tick."""

    centers: np.ndarray  # (k, 2)
    radii: np.ndarray  # (k,)

    @classmethod
    def empty(cls) -> "Bodies":
        return cls(np.zeros((0, 2)), np.zeros(0))

    @classmethod
    def from_lists(cls, centers: Sequence[Sequence[float]], radii: Sequence[float]) -> "Bodies":
        c = np.asarray(centers, dtype=float).reshape(-1, 2)
        return cls(c, np.asarray(radii, dtype=float).reshape(-1))

    def __len__(self) -> int:
        return len(self.radii)


def bounds_walls(xmin: float, ymin: float, xmax: float, ymax: float,
                 thickness: float = 0.1) -> list[Rect]:
    """Four wall rectangles hugging the outside of the given bounds."""
    w, h = xmax - xmin, ymax - ymin
    t = thickness / 2
    cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2
    return [
        Rect(cx, ymin - t, w / 2 + thickness, t),
        Rect(cx, ymax + t, w / 2 + thickness, t),
        Rect(xmin - t, cy, t, h / 2 + thickness),
        Rect(xmax + t, cy, t, h / 2 + thickness),
    ]


class World:
    """Immutable static geometry, packed into arrays for vectorised queries."""

    def __init__(self, obstacles: Sequence[Obstacle] = ()):
        self.obstacles = tuple(obstacles)
        rects = [o for o in self.obstacles if isinstance(o, Rect)]
        circles = [o for o in self.obstacles if isinstance(o, Circle)]
        self.rect_lo = np.array([[r.cx - r.hx, r.cy - r.hy] for r in rects], dtype=float).reshape(-1, 2)
        self.rect_hi = np.array([[r.cx + r.hx, r.cy + r.hy] for r in rects], dtype=float).reshape(-1, 2)
        self.circle_c = np.array([[c.cx, c.cy] for c in circles], dtype=float).reshape(-1, 2)
        self.circle_r = np.array([c.r for c in circles], dtype=float)

    def __len__(self) -> int:
        return len(self.obstacles)


def _rays_vs_rects(o, d, lo, hi):
    """Slab test. Returns (t, cos_incidence) with shape (R, N); t=inf on miss."""
    R, N = len(o), len(lo)
    if N == 0:
        return np.full((R, 0), np.inf), np.zeros((R, 0))
    o3 = o[:, None, :]
    d3 = d[:, None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / d3
        t1 = (lo[None] - o3) * inv
        t2 = (hi[None] - o3) * inv
    tnear = np.minimum(t1, t2)
    tfar = np.maximum(t1, t2)
    # zero direction component: slab is everything or nothing
    parallel = d3 == 0.0
    inside_slab = (o3 > lo[None]) & (o3 < hi[None])
    tnear = np.where(parallel, np.where(inside_slab, -np.inf, np.inf), tnear)
    tfar = np.where(parallel, np.where(inside_slab, np.inf, -np.inf), tfar)
    entry_axis = np.argmax(tnear, axis=2)
    t_enter = np.max(tnear, axis=2)
    t_exit = np.min(tfar, axis=2)
    hit = (t_enter <= t_exit) & (t_enter > 0.0)
    t = np.where(hit, t_enter, np.inf)
    cos_inc = np.abs(np.take_along_axis(np.broadcast_to(d3, t1.shape), entry_axis[..., None], axis=2)[..., 0])
    return t, cos_inc


def _rays_vs_circles(o, d, c, r):
    R, N = len(o), len(c)
    if N == 0:
        return np.full((R, 0), np.inf), np.zeros((R, 0))
    oc = o[:, None, :] - c[None]
    b = np.einsum("rk,rnk->rn", d, oc)
    cc = np.einsum("rnk,rnk->rn", oc, oc) - r[None] ** 2
    disc = b * b - cc
    ok = (disc >= 0.0) & (cc > 0.0)
    sq = np.sqrt(np.where(ok, disc, 0.0))
    t = -b - sq
    ok &= t > 0.0
    t = np.where(ok, t, np.inf)
    # |d . n| with n = (o + t d - c) / r  =>  |b + t| / r
    with np.errstate(invalid="ignore"):
        cos_inc = np.where(ok, np.abs(b + np.where(ok, t, 0.0)) / r[None], 0.0)
    return t, np.clip(cos_inc, 0.0, 1.0)


def cast_rays(world: World, origins, angles, max_range: float,
              bodies: Optional[Bodies] = None, exclude=None):
    """Vectorised ray cast.

    ``origins`` is (R, 2), ``angles`` (R,). ``exclude`` optionally gives, per
    ray, the index into ``bodies`` of the casting body (-1 for none).
    Returns ``(distance, incidence)`` arrays; misses carry ``inf`` distance.
    """
    o = np.asarray(origins, dtype=float).reshape(-1, 2)
    a = np.asarray(angles, dtype=float).reshape(-1)
    d = np.stack([np.cos(a), np.sin(a)], axis=1)
    ts = []
    cs = []
    t, c = _rays_vs_rects(o, d, world.rect_lo, world.rect_hi)
    ts.append(t)
    cs.append(c)
    t, c = _rays_vs_circles(o, d, world.circle_c, world.circle_r)
    ts.append(t)
    cs.append(c)
    if bodies is not None and len(bodies):
        t, c = _rays_vs_circles(o, d, bodies.centers, bodies.radii)
        if exclude is not None:
            ex = np.asarray(exclude).reshape(-1)
            mask = ex[:, None] == np.arange(len(bodies))[None, :]
            t = np.where(mask, np.inf, t)
        ts.append(t)
        cs.append(c)
    t_all = np.concatenate(ts, axis=1)
    c_all = np.concatenate(cs, axis=1)
    if t_all.shape[1] == 0:
        return np.full(len(o), np.inf), np.zeros(len(o))
    idx = np.argmin(t_all, axis=1)
    rows = np.arange(len(o))
    dist = t_all[rows, idx]
    cos_inc = c_all[rows, idx]
    dist = np.where(dist <= max_range, dist, np.inf)
    incidence = np.where(np.isfinite(dist), np.arccos(np.clip(cos_inc, 0.0, 1.0)), 0.0)
    return dist, incidence


def ray_cast(world: World, origin: Vec2, direction: float, max_range: float,
             bodies: Optional[Bodies] = None, exclude: int = -1) -> Optional[Hit]:
    """Nearest surface along a ray within ``max_range``, or ``None``.

    ``incidence`` is the angle between the ray and the surface normal.
    Surfaces that contain the origin are ignored.
    """
    if max_range <= 0:
        raise ValueError("max_range must be positive")
    dist, inc = cast_rays(world, [[origin.x, origin.y]], [direction], max_range,
                          bodies, None if bodies is None else [exclude])
    if not np.isfinite(dist[0]):
        return None
    return Hit(float(dist[0]), float(inc[0]))


def signed_distances(world: World, point, bodies: Optional[Bodies] = None,
                     exclude: int = -1) -> np.ndarray:
    """Signed distance from ``point`` to every obstacle and body surface."""
    p = np.asarray(point, dtype=float)
    out = []
    if len(world.rect_lo):
        c = (world.rect_lo + world.rect_hi) / 2
        h = (world.rect_hi - world.rect_lo) / 2
        q = np.abs(p[None] - c) - h
        outside = np.hypot(*np.maximum(q, 0.0).T)
        inside = np.minimum(np.max(q, axis=1), 0.0)
        out.append(outside + inside)
    if len(world.circle_r):
        out.append(np.hypot(*(p[None] - world.circle_c).T) - world.circle_r)
    if bodies is not None and len(bodies):
        sd = np.hypot(*(p[None] - bodies.centers).T) - bodies.radii
        if exclude >= 0:
            sd = np.delete(sd, exclude)
        out.append(sd)
    if not out:
        return np.zeros(0)
    return np.concatenate(out)


def clearance(world: World, pose: Pose, body_radius: float,
              bodies: Optional[Bodies] = None, exclude: int = -1) -> float:
    """Smallest surface gap around a circular body; negative on penetration."""
    sd = signed_distances(world, (pose.x, pose.y), bodies, exclude)
    if sd.size == 0:
        return MAX_DISTANCE
    return float(sd.min() - body_radius)


def obstacle_gap(a: Obstacle, b: Obstacle) -> float:
    """Surface-to-surface distance between two obstacles (0 when touching/overlapping)."""
    if isinstance(a, Circle) and isinstance(b, Circle):
        return max(0.0, math.hypot(a.cx - b.cx, a.cy - b.cy) - a.r - b.r)
    if isinstance(a, Circle):
        a, b = b, a
    if isinstance(b, Circle):
        dx = max(abs(b.cx - a.cx) - a.hx, 0.0)
        dy = max(abs(b.cy - a.cy) - a.hy, 0.0)
        return max(0.0, math.hypot(dx, dy) - b.r)
    dx = max(abs(b.cx - a.cx) - a.hx - b.hx, 0.0)
    dy = max(abs(b.cy - a.cy) - a.hy - b.hy, 0.0)
    return math.hypot(dx, dy)
