"""Fixed-step simulation loop: sense, decide, act for every robot each tick."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .geometry import Bodies, BodyGeometry, Pose, Vec2, World, clearance, wrap_angle
from .nav import STOP, NavDecision, WheelCommand, nav_command, obstacle_clear
from .perception import Color, Sprite, ROBOT_RGB, dump_frame, render, segment
from .pursuit import PursuitMode, pursuit_command
from .scenario import Scenario
from .sonar import scan_many

TIME_STEP_MS = 64
DT = Fraction(TIME_STEP_MS, 1000)
CONTACT_SKIN = 0.001  # m left between a clamped body and what it hit


class Mode(str, Enum):
    NAV = "Nav"
    FOLLOW = "Follow"
    SEARCH_SPIN = "SearchSpin"
    STOPPED = "Stopped"


def tick_time(tick: int) -> float:
    """Simulation time of ``tick``; exact multiple of 64 ms rounded once."""
    return float(tick * DT)


def integrate(pose: Pose, cmd: WheelCommand, geom: BodyGeometry, dt: float) -> Pose:
    """Advance a differential-drive pose along the exact arc for ``dt`` seconds."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = geom.wheel_radius * (cmd.left + cmd.right) / 2
    w = geom.wheel_radius * (cmd.right - cmd.left) / geom.axle_track
    th = pose.heading
    if abs(w) < 1e-9:
        return Pose(pose.x + v * dt * math.cos(th), pose.y + v * dt * math.sin(th), th)
    rad = v / w
    th2 = th + w * dt
    return Pose(pose.x + rad * (math.sin(th2) - math.sin(th)),
                pose.y - rad * (math.cos(th2) - math.cos(th)),
                wrap_angle(th2))


def intruder_step(waypoints: Sequence[tuple[float, Vec2]], t: float) -> Pose:
    """Piecewise-linear position along scripted waypoints, held after the last."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if len(waypoints) == 1:
        p = waypoints[0][1]
        return Pose(p.x, p.y, 0.0)
    heading = 0.0
    for (t0, p0), (t1, p1) in zip(waypoints, waypoints[1:]):
        if p1 != p0:
            heading = math.atan2(p1.y - p0.y, p1.x - p0.x)
        if t <= t1:
            s = (t - t0) / (t1 - t0)
            return Pose(p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y), heading)
    last = waypoints[-1][1]
    return Pose(last.x, last.y, heading)


@dataclass
class RobotState:
    id: str
    pose: Pose
    last_command: WheelCommand = STOP
    mode: Mode = Mode.NAV


@dataclass
class SimState:
    tick: int
    robots: list[RobotState]
    intruder_poses: list[Pose]

    @property
    def time(self) -> float:
        return tick_time(self.tick)


class TraceRecord(NamedTuple):
    tick: int
    time: float
    robot_id: str
    x: float
    y: float
    heading: float
    mode: str
    d_left: float
    d_right: float
    midpoint: float
    chosen_color: str
    left_pixels: int
    right_pixels: int
    blue_min_range: float
    green_min_range: float
    cmd_left: float
    cmd_right: float
    clearance: float


class IntruderRecord(NamedTuple):
    tick: int
    time: float
    color: str
    x: float
    y: float
    heading: float


TRACE_COLUMNS = list(TraceRecord._fields)
INTRUDER_MODE = "Intruder"


@dataclass
class Trace:
    records: list[TraceRecord] = field(default_factory=list)
    intruders: list[IntruderRecord] = field(default_factory=list)
    collisions: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def robot(self, robot_id: str) -> list[TraceRecord]:
        return [r for r in self.records if r.robot_id == str(robot_id)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        write_trace(self, buf)
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def write_trace(trace: Trace, fh) -> None:
    """CSV with one header row; robot rows then intruder rows per tick."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    intr = {}
    for rec in trace.intruders:
        intr.setdefault(rec.tick, []).append(rec)
    ticks = sorted({r.tick for r in trace.records} | set(intr))
    by_tick = {}
    for rec in trace.records:
        by_tick.setdefault(rec.tick, []).append(rec)
    blank = [""] * (len(TRACE_COLUMNS) - 7)
    for t in ticks:
        for rec in by_tick.get(t, []):
            w.writerow([_fmt(v) for v in rec])
        for rec in intr.get(t, []):
            w.writerow([rec.tick, _fmt(rec.time), rec.color, _fmt(rec.x), _fmt(rec.y),
                        _fmt(rec.heading), INTRUDER_MODE] + blank)


def read_trace(fh) -> Trace:
    """Inverse of :func:`write_trace` (floats carry 6 significant digits)."""
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != TRACE_COLUMNS:
        raise ValueError("not a trace file: unexpected header")
    trace = Trace()
    types = [int, float, str, float, float, float, str, float, float, float, str,
             int, int, float, float, float, float, float]
    for row in reader:
        if not row:
            continue
        if row[6] == INTRUDER_MODE:
            trace.intruders.append(IntruderRecord(int(row[0]), float(row[1]), row[2],
                                                  float(row[3]), float(row[4]), float(row[5])))
        else:
            trace.records.append(TraceRecord(*(t(v) for t, v in zip(types, row))))
    return trace


class Simulator:
    """Owns all mutable state of one run."""

    def __init__(self, scenario: Scenario, frames_dir: Optional[Path] = None):
        self.scenario = scenario
        self.world: World = scenario.world()
        self.frames_dir = Path(frames_dir) if frames_dir else None
        if self.frames_dir:
            self.frames_dir.mkdir(parents=True, exist_ok=True)
        robots = [RobotState(r.id, r.pose) for r in scenario.robots]
        self.state = SimState(0, robots, [intruder_step(i.waypoints, 0.0) for i in scenario.intruders])
        self.trace = Trace()

    def _bodies(self) -> tuple[Bodies, list[Sprite]]:
        s = self.scenario
        centers = [(r.pose.x, r.pose.y) for r in self.state.robots]
        centers += [(p.x, p.y) for p in self.state.intruder_poses]
        radii = [s.body.body_radius] * len(self.state.robots)
        radii += [s.intruder_radius] * len(self.state.intruder_poses)
        sprites = [Sprite(r.pose.x, r.pose.y, s.body.body_radius, s.robot_height, ROBOT_RGB)
                   for r in self.state.robots]
        sprites += [Sprite(p.x, p.y, s.intruder_radius, s.intruder_height, spec.color.rgb)
                    for p, spec in zip(self.state.intruder_poses, s.intruders)]
        return Bodies.from_lists(centers, radii), sprites

    def _clamp(self, idx: int, start: Pose, cmd: WheelCommand, bodies: Bodies, dt: float) -> tuple[Pose, bool]:
        """Shorten a move that would penetrate geometry; returns (pose, collided)."""
        rad = self.scenario.body.body_radius
        end = integrate(start, cmd, self.scenario.body, dt)
        if clearance(self.world, end, rad, bodies, idx) >= 0:
            return end, False
        if clearance(self.world, start, rad, bodies, idx) < CONTACT_SKIN:
            return start, True
        lo, hi = 0.0, 1.0
        for _ in range(40):
            mid = (lo + hi) / 2
            if clearance(self.world, integrate(start, cmd, self.scenario.body, mid * dt), rad, bodies, idx) >= CONTACT_SKIN:
                lo = mid
            else:
                hi = mid
        return (integrate(start, cmd, self.scenario.body, lo * dt) if lo > 0 else start), True

    def step(self) -> list[TraceRecord]:
        s = self.scenario
        st = self.state
        tick, now = st.tick, st.time
        bodies, sprites = self._bodies()
        poses = [r.pose for r in st.robots]
        scans = scan_many(self.world, poses, s.sonar, bodies, list(range(len(poses))))
        params = s.controller
        records = []
        commands = []
        for i, (robot, sc) in enumerate(zip(st.robots, scans)):
            nav: NavDecision = nav_command(sc, params)
            color, lpx, rpx = "none", 0, 0
            blue_rng = green_rng = params.range_max
            if not obstacle_clear(sc, params):
                mode, cmd = Mode.NAV, nav.command
            else:
                others = sprites[:i] + sprites[i + 1:]
                frame, depth = render(self.world, robot.pose, others, s.camera)
                seg = segment(frame, depth, params.range_max)
                dec = pursuit_command(seg, params)
                mode, cmd = Mode(dec.mode.value), dec.command
                color, lpx, rpx = dec.choice.label, dec.choice.left_pixels, dec.choice.right_pixels
                blue_rng, green_rng = seg.blue.min_range, seg.green.min_range
                if self.frames_dir:
                    dump_frame(frame, self.frames_dir, tick, robot.id)
            clr = clearance(self.world, robot.pose, s.body.body_radius, bodies, i)
            records.append(TraceRecord(
                tick, now, robot.id, robot.pose.x, robot.pose.y, robot.pose.heading, mode.value,
                nav.d_left, nav.d_right, nav.midpoint, color, lpx, rpx, blue_rng, green_rng,
                float(cmd.left), float(cmd.right), clr))
            commands.append((mode, cmd))

        dt = float(DT)
        for i, (robot, (mode, cmd)) in enumerate(zip(st.robots, commands)):
            pose, hit = self._clamp(i, robot.pose, cmd, bodies, dt)
            if hit:
                self.trace.collisions.append((tick, robot.id))
            robot.pose, robot.last_command, robot.mode = pose, cmd, mode
        for p, spec in zip(st.intruder_poses, s.intruders):
            self.trace.intruders.append(IntruderRecord(tick, now, spec.color.value, p.x, p.y, p.heading))
        st.tick += 1
        st.intruder_poses = [intruder_step(i.waypoints, st.time) for i in s.intruders]
        self.trace.records.extend(records)
        return records

    def run(self) -> Trace:
        n_ticks = int(Fraction(self.scenario.duration).limit_denominator(10**6) / DT)
        for _ in range(n_ticks):
            self.step()
        return self.trace


def run(scenario: Scenario, frames_dir: Optional[Path] = None) -> Trace:
    """Simulate ``scenario`` for ``duration / 64 ms`` ticks."""
    return Simulator(scenario, frames_dir).run()
