"""Scenario documents: YAML in, validated :class:`Scenario` out (and back).

Document layout::

    name: optional label
    world: {bounds: [xmin, ymin, xmax, ymax]}
    obstacles:
      - {kind: box, center: [x, y], size: [w, h]}
      - {kind: circle, center: [x, y], radius: r}
    robots:
      - {id: "1", x: 0.0, y: 0.0, heading: 0.0}      # heading in radians
    intruders:
      - {color: green, waypoints: [[t, x, y], ...]}
    duration_s: 40
    params:
      <ControllerParams fields>
      sonar: {max_range, incidence_cutoff}
      camera: {width, height, horizontal_fov, mount_heading_offset}
      body: {body_radius, wheel_radius, axle_track}
      intruder: {radius, height}
      robot_height: 0.38
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import yaml

from .geometry import (BodyGeometry, Circle, Obstacle, Pose, Rect, Vec2, World,
                       bounds_walls, obstacle_gap)
from .nav import ControllerParams
from .perception import CameraParams, Color
from .sonar import SonarLayout

#: Extra lateral margin each side of a robot when squeezing between obstacles.
PASSAGE_MARGIN = 0.2


class ScenarioError(Exception):
    pass


class ScenarioParseError(ScenarioError):
    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class ScenarioValidationError(ScenarioError):
    def __init__(self, constraint: str, message: str):
        self.constraint = constraint
        super().__init__(f"[{constraint}] {message}")


@dataclass(frozen=True)
class RobotSpec:
    id: str
    pose: Pose


@dataclass(frozen=True)
class IntruderSpec:
    color: Color
    waypoints: tuple[tuple[float, Vec2], ...]


@dataclass(frozen=True)
class Scenario:
    bounds: tuple[float, float, float, float]
    robots: tuple[RobotSpec, ...]
    obstacles: tuple[Obstacle, ...] = ()
    intruders: tuple[IntruderSpec, ...] = ()
    duration: float = 40.0
    controller: ControllerParams = field(default_factory=ControllerParams)
    sonar: SonarLayout = field(default_factory=SonarLayout)
    camera: CameraParams = field(default_factory=CameraParams)
    body: BodyGeometry = field(default_factory=BodyGeometry)
    intruder_radius: float = 0.20
    intruder_height: float = 0.38
    robot_height: float = 0.38
    name: str = ""

    def __post_init__(self):
        validate(self)

    @property
    def walls(self) -> list[Rect]:
        return bounds_walls(*self.bounds)

    def world(self) -> World:
        return World(list(self.walls) + list(self.obstacles))

    def with_duration(self, duration: float) -> "Scenario":
        return replace(self, duration=duration)


def validate(s: Scenario) -> None:
    """Raise :class:`ScenarioValidationError` naming the first broken rule."""
    xmin, ymin, xmax, ymax = s.bounds
    if not (xmax > xmin and ymax > ymin):
        raise ScenarioValidationError("world-bounds", "bounds must have positive extent")
    if not s.robots:
        raise ScenarioValidationError("at-least-one-robot", "scenario needs at least one friendly robot")
    ids = [r.id for r in s.robots]
    if len(set(ids)) != len(ids):
        raise ScenarioValidationError("unique-robot-ids", f"duplicate robot ids in {ids}")
    colors = [i.color for i in s.intruders]
    if len(set(colors)) != len(colors):
        raise ScenarioValidationError("unique-intruder-colors",
                                      f"intruder colours must be unique, got {[c.value for c in colors]}")
    for intr in s.intruders:
        times = [t for t, _ in intr.waypoints]
        if not times or times[0] != 0:
            raise ScenarioValidationError("waypoint-times",
                                          f"{intr.color.value} intruder waypoints must start at t=0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ScenarioValidationError("waypoint-times",
                                          f"{intr.color.value} intruder waypoint times must strictly increase")
    if s.duration < 0:
        raise ScenarioValidationError("duration", "duration must be non-negative")
    if s.intruder_radius <= 0 or s.intruder_height <= 0 or s.robot_height <= 0:
        raise ScenarioValidationError("body-size", "intruder and robot render sizes must be positive")
    if s.camera.max_depth != s.controller.range_max:
        raise ScenarioValidationError("range-max", "camera max_depth must equal params.range_max")

    bodies = [(f"robot {r.id}", r.pose.x, r.pose.y, s.body.body_radius) for r in s.robots]
    bodies += [(f"{i.color.value} intruder", i.waypoints[0][1].x, i.waypoints[0][1].y, s.intruder_radius)
               for i in s.intruders]
    for name, x, y, rad in bodies:
        if not (xmin + rad <= x <= xmax - rad and ymin + rad <= y <= ymax - rad):
            raise ScenarioValidationError("bodies-inside-bounds", f"{name} is not inside the world bounds")
    for (na, xa, ya, ra), (nb, xb, yb, rb) in itertools.combinations(bodies, 2):
        if math.hypot(xa - xb, ya - yb) < ra + rb:
            raise ScenarioValidationError("bodies-non-overlapping", f"{na} overlaps {nb}")
    for name, x, y, rad in bodies:
        for ob in s.obstacles:
            if obstacle_gap(ob, Circle(x, y, rad)) <= 0:
                raise ScenarioValidationError("bodies-non-overlapping", f"{name} overlaps an obstacle")

    min_gap = 2 * (s.body.body_radius + PASSAGE_MARGIN)
    solids = [(f"wall {i}", w) for i, w in enumerate(s.walls)]
    solids += [(f"obstacle {i}", o) for i, o in enumerate(s.obstacles)]
    for (na, a), (nb, b) in itertools.combinations(solids, 2):
        gap = obstacle_gap(a, b)
        # sub-nanometre gaps are float noise at flush contacts
        if 1e-9 < gap < min_gap:
            raise ScenarioValidationError(
                "obstacle-gap", f"gap of {gap:.3f} m between {na} and {nb} is below {min_gap:.3f} m")


# --- document <-> Scenario ---------------------------------------------------

def _line_index(node, path=(), out=None) -> dict:
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            _line_index(v, path + (k.value,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_index(v, path + (i,), out)
    return out


class _Reader:
    def __init__(self, lines: dict):
        self.lines = lines

    def fail(self, path: tuple, msg: str):
        probe = path
        while probe and probe not in self.lines:
            probe = probe[:-1]
        raise ScenarioParseError(msg, self.lines.get(probe), ".".join(str(p) for p in path))

    def number(self, value, path) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"expected a number, got {value!r}")
        if not math.isfinite(value):
            self.fail(path, "value must be finite")
        return float(value)

    def vector(self, value, n, path) -> list[float]:
        if not isinstance(value, list) or len(value) != n:
            self.fail(path, f"expected a list of {n} numbers")
        return [self.number(v, path + (i,)) for i, v in enumerate(value)]

    def mapping(self, value, path, required=(), optional=()) -> dict:
        if not isinstance(value, dict):
            self.fail(path, "expected a mapping")
        for key in required:
            if key not in value:
                self.fail(path + (key,), "missing required field")
        unknown = set(value) - set(required) - set(optional)
        if unknown:
            self.fail(path + (sorted(map(str, unknown))[0],), "unknown field")
        return value


def _build(doc, rd: _Reader) -> Scenario:
    top = rd.mapping(doc, (), required=("world", "robots"),
                     optional=("name", "obstacles", "intruders", "duration_s", "params"))
    world = rd.mapping(top["world"], ("world",), required=("bounds",))
    bounds = tuple(rd.vector(world["bounds"], 4, ("world", "bounds")))

    obstacles: list[Obstacle] = []
    for i, ob in enumerate(top.get("obstacles") or []):
        p = ("obstacles", i)
        kind = ob.get("kind") if isinstance(ob, dict) else None
        try:
            if kind == "box":
                rd.mapping(ob, p, required=("kind", "center", "size"))
                cx, cy = rd.vector(ob["center"], 2, p + ("center",))
                w, h = rd.vector(ob["size"], 2, p + ("size",))
                obstacles.append(Rect(cx, cy, w / 2, h / 2))
            elif kind == "circle":
                rd.mapping(ob, p, required=("kind", "center", "radius"))
                cx, cy = rd.vector(ob["center"], 2, p + ("center",))
                obstacles.append(Circle(cx, cy, rd.number(ob["radius"], p + ("radius",))))
            else:
                rd.fail(p + ("kind",), f"obstacle kind must be 'box' or 'circle', got {kind!r}")
        except ValueError as exc:
            rd.fail(p, str(exc))

    robots = []
    if not isinstance(top["robots"], list):
        rd.fail(("robots",), "expected a list")
    for i, r in enumerate(top["robots"]):
        p = ("robots", i)
        rd.mapping(r, p, required=("id", "x", "y"), optional=("heading",))
        pose = Pose(rd.number(r["x"], p + ("x",)), rd.number(r["y"], p + ("y",)),
                    rd.number(r.get("heading", 0.0), p + ("heading",)))
        robots.append(RobotSpec(str(r["id"]), pose))

    intruders = []
    for i, it in enumerate(top.get("intruders") or []):
        p = ("intruders", i)
        rd.mapping(it, p, required=("color", "waypoints"))
        try:
            color = Color(str(it["color"]).lower())
        except ValueError:
            rd.fail(p + ("color",), "colour must be 'blue' or 'green'")
        if not isinstance(it["waypoints"], list) or not it["waypoints"]:
            rd.fail(p + ("waypoints",), "expected a non-empty list of [t, x, y]")
        wps = []
        for j, wp in enumerate(it["waypoints"]):
            t, x, y = rd.vector(wp, 3, p + ("waypoints", j))
            wps.append((t, Vec2(x, y)))
        intruders.append(IntruderSpec(color, tuple(wps)))

    kwargs: dict[str, Any] = {}
    params = top.get("params") or {}
    sections = ("sonar", "camera", "body", "intruder", "robot_height")
    rd.mapping(params, ("params",), optional=tuple(ControllerParams.field_names()) + sections)
    try:
        kwargs["controller"] = ControllerParams(**{
            k: rd.number(v, ("params", k)) for k, v in params.items() if k not in sections})
        if "sonar" in params:
            sec = rd.mapping(params["sonar"], ("params", "sonar"), optional=("max_range", "incidence_cutoff"))
            kwargs["sonar"] = SonarLayout(**{k: rd.number(v, ("params", "sonar", k)) for k, v in sec.items()})
        cam_fields = ("width", "height", "horizontal_fov", "mount_heading_offset")
        sec = rd.mapping(params.get("camera", {}), ("params", "camera"), optional=cam_fields)
        cam = {k: rd.number(v, ("params", "camera", k)) for k, v in sec.items()}
        for k in ("width", "height"):
            if k in cam:
                cam[k] = int(cam[k])
        kwargs["camera"] = CameraParams(max_depth=kwargs["controller"].range_max, **cam)
        if "body" in params:
            sec = rd.mapping(params["body"], ("params", "body"),
                             optional=("body_radius", "wheel_radius", "axle_track"))
            kwargs["body"] = BodyGeometry(**{k: rd.number(v, ("params", "body", k)) for k, v in sec.items()})
        if "intruder" in params:
            sec = rd.mapping(params["intruder"], ("params", "intruder"), optional=("radius", "height"))
            if "radius" in sec:
                kwargs["intruder_radius"] = rd.number(sec["radius"], ("params", "intruder", "radius"))
            if "height" in sec:
                kwargs["intruder_height"] = rd.number(sec["height"], ("params", "intruder", "height"))
        if "robot_height" in params:
            kwargs["robot_height"] = rd.number(params["robot_height"], ("params", "robot_height"))
    except ValueError as exc:
        rd.fail(("params",), str(exc))

    if "duration_s" in top:
        kwargs["duration"] = rd.number(top["duration_s"], ("duration_s",))
    if "name" in top:
        kwargs["name"] = str(top["name"])
    return Scenario(bounds=bounds, robots=tuple(robots), obstacles=tuple(obstacles),
                    intruders=tuple(intruders), **kwargs)


def load_scenario(document: str) -> Scenario:
    """Parse and validate a scenario document (YAML or JSON text)."""
    try:
        node = yaml.compose(document, Loader=yaml.SafeLoader)
        doc = yaml.safe_load(document)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise ScenarioParseError(str(exc.problem or exc), mark.line + 1 if mark else None) from None
    if node is None:
        raise ScenarioParseError("empty document", 1)
    return _build(doc, _Reader(_line_index(node)))


def load_scenario_file(path) -> Scenario:
    return load_scenario(Path(path).read_text())


def shipped_scenario(name: str) -> Scenario:
    """Load one of the bundled scenarios (``corridor``, ``follow``, ``patrol``)."""
    text = resources.files("intrudersim").joinpath("scenarios").joinpath(f"{name}.yaml").read_text()
    return load_scenario(text)


def scenario_to_dict(s: Scenario) -> dict:
    def ob(o):
        if isinstance(o, Rect):
            return {"kind": "box", "center": [o.cx, o.cy], "size": [2 * o.hx, 2 * o.hy]}
        return {"kind": "circle", "center": [o.cx, o.cy], "radius": o.r}

    params: dict[str, Any] = asdict(s.controller)
    params["sonar"] = {"max_range": s.sonar.max_range, "incidence_cutoff": s.sonar.incidence_cutoff}
    params["camera"] = {"width": s.camera.width, "height": s.camera.height,
                        "horizontal_fov": s.camera.horizontal_fov,
                        "mount_heading_offset": s.camera.mount_heading_offset}
    params["body"] = asdict(s.body)
    params["intruder"] = {"radius": s.intruder_radius, "height": s.intruder_height}
    params["robot_height"] = s.robot_height
    doc = {
        "name": s.name,
        "world": {"bounds": list(s.bounds)},
        "obstacles": [ob(o) for o in s.obstacles],
        "robots": [{"id": r.id, "x": r.pose.x, "y": r.pose.y, "heading": r.pose.heading} for r in s.robots],
        "intruders": [{"color": i.color.value, "waypoints": [[t, p.x, p.y] for t, p in i.waypoints]}
                      for i in s.intruders],
        "duration_s": s.duration,
        "params": params,
    }
    return doc


def dump_scenario(s: Scenario) -> str:
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False)
